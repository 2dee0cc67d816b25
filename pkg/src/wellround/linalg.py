"""Small exact linear algebra over Q and Z used across the package.

Matrices are lists of rows.  Rational work uses ``fractions.Fraction``; the
big integer work (Hermite forms of expanded group-ring matrices) goes through
python-flint.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import flint

Matrix = list[list]


def rref(A: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [[Fraction(x) for x in row] for row in A]
    if not M:
        return [], []
    n = len(M[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                Mi, Mr = M[i], M[r]
                M[i] = [a - f * b for a, b in zip(Mi, Mr)]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(A: Sequence[Sequence]) -> int:
    if not A:
        return 0
    den = 1
    for row in A:
        for x in row:
            if isinstance(x, Fraction):
                den = math.lcm(den, x.denominator)
    return flint.fmpz_mat([[int(x * den) for x in row] for row in A]).rank()


def nullspace(A: Sequence[Sequence], n: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} in Q^n, one vector per free column, in column order."""
    if not A:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    R, piv = rref(A, n)
    free = [j for j in range(n) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(R, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Unique solution of A x = b (A with full column rank); raises if inconsistent."""
    n = len(A[0])
    aug = [list(row) + [bb] for row, bb in zip(A, b)]
    R, piv = rref(aug, n + 1)
    if n in piv:
        raise ValueError("inconsistent linear system")
    if len(piv) != n:
        raise ValueError("linear system is not uniquely solvable")
    return [R[i][n] for i in range(n)]


def det(A: Sequence[Sequence]) -> Fraction:
    M = [[Fraction(x) for x in row] for row in A]
    n = len(M)
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            out = -out
        out *= M[c][c]
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return out


def inverse(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(A)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def transpose(A):
    return [list(r) for r in zip(*A)]


def matvec(A, v):
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def ldl_signs(G: Sequence[Sequence]) -> tuple[int, int]:
    """(positive, negative) inertia counts of a rational symmetric matrix."""
    M = [[Fraction(x) for x in row] for row in G]
    n = len(M)
    pos = neg = 0
    idx = list(range(n))
    while idx:
        piv = next((i for i in idx if M[i][i] != 0), None)
        if piv is None:
            # all diagonal zero: find an off-diagonal entry to split a hyperbolic pair
            pair = next(((i, j) for i in idx for j in idx if i < j and M[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # replace row/col i by i + j, which has diagonal 2 M[i][j] != 0
            for k in range(n):
                M[i][k] += M[j][k]
            for k in range(n):
                M[k][i] += M[k][j]
            continue
        d = M[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in idx if i != piv]
        for i in rest:
            f = M[i][piv] / d
            if f:
                for j in rest:
                    M[i][j] -= f * M[piv][j]
        idx = rest
    return pos, neg


def is_positive_definite(G: Sequence[Sequence]) -> bool:
    """Leading principal minors test, exactly."""
    M = [[Fraction(x) for x in row] for row in G]
    n = len(M)
    for c in range(n):
        if M[c][c] <= 0:
            return False
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return True


def is_positive_semidefinite(G: Sequence[Sequence]) -> bool:
    return ldl_signs(G)[1] == 0


def primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Integer multiple of v with coprime entries (sign kept)."""
    den = 1
    for x in v:
        den = math.lcm(den, Fraction(x).denominator)
    w = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in w:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(w)
    return tuple(x // g for x in w)


# ---------------------------------------------------------------------------
# integer matrices via flint


def hnf_with_transform(A: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], int]:
    """Row HNF H = U A with U unimodular; returns (H, U, rank)."""
    m = len(A)
    n = len(A[0]) if m else 0
    aug = flint.fmpz_mat([list(A[i]) + [int(i == j) for j in range(m)] for i in range(m)])
    H = aug.hnf()
    rows = H.tolist()
    Hl = [[int(x) for x in r[:n]] for r in rows]
    U = [[int(x) for x in r[n:]] for r in rows]
    r = sum(1 for row in Hl if any(row))
    return Hl, U, r


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Z-basis of {x in Z^ncols : A x = 0}."""
    if not A:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    At = [[A[i][j] for i in range(len(A))] for j in range(ncols)]
    H, U, r = hnf_with_transform(At)
    return [U[i] for i in range(len(H)) if not any(H[i])]
