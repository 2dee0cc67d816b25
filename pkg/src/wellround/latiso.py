"""Automorphisms and isometries of families of 4x4 rational forms.

A family is a list of rational matrices whose first member is symmetric
positive definite.  Later members may be non-symmetric (the omega-twisted
Gram of a Hermitian form is); everything here only needs the bilinear
identities A^T M A = M', which make sense either way.

The search is a plain Plesken-Souvignier backtrack: columns of A are picked
among vectors of the right length for the first Gram and pruned with the
pairwise values of every member.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import flint

from . import linalg
from .formspace import short_vectors

IntMat = tuple[tuple[int, ...], ...]

ENUM_CAP = 10**5


@dataclass
class FormFamily:
    grams: list[list[list[Fraction]]]

    def __post_init__(self):
        self.grams = [[[Fraction(x) for x in row] for row in G] for G in self.grams]
        if not self.grams:
            raise ValueError("empty family")
        G0 = self.grams[0]
        if any(G0[i][j] != G0[j][i] for i in range(len(G0)) for j in range(i)):
            raise ValueError("first Gram must be symmetric")
        if not linalg.is_positive_definite(G0):
            raise ValueError("first Gram must be positive definite")

    @property
    def dim(self) -> int:
        return len(self.grams[0])

    def transform(self, A) -> "FormFamily":
        """The family A^T G A."""
        At = linalg.transpose(A)
        return FormFamily([linalg.matmul(linalg.matmul(At, G), A) for G in self.grams])


def identity(n: int) -> IntMat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_mul(A, B) -> IntMat:
    n = len(B[0])
    return tuple(tuple(sum(a * B[k][j] for k, a in enumerate(row)) for j in range(n)) for row in A)


def mat_inv_int(A) -> IntMat:
    inv = linalg.inverse(A)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


def preserves(A, fam: FormFamily, fam2: FormFamily | None = None) -> bool:
    """A^T fam[k] A == fam2[k] for every k (fam2 defaults to fam)."""
    target = fam if fam2 is None else fam2
    At = linalg.transpose(A)
    return all(
        linalg.matmul(linalg.matmul(At, G), A) == H for G, H in zip(fam.grams, target.grams)
    )


@dataclass
class MatrixGroup:
    generators: list[IntMat]
    order: int
    elements: list[IntMat] = field(default_factory=list, repr=False)

    def __contains__(self, A) -> bool:
        A = tuple(tuple(int(x) for x in row) for row in A)
        if self.elements:
            return A in self._element_set
        raise NotImplementedError("membership needs the element list")

    @property
    def _element_set(self):
        s = getattr(self, "_eset", None)
        if s is None:
            s = set(self.elements)
            self._eset = s
        return s


def closure(gens: Sequence[IntMat], cap: int = ENUM_CAP) -> list[IntMat]:
    n = len(gens[0]) if gens else 4
    one = identity(n)
    seen = {one}
    out = [one]
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mat_mul(x, g)
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    nxt.append(y)
                    if len(out) > cap:
                        raise RuntimeError("group closure exceeds the enumeration cap")
        frontier = nxt
    return out


def group_from_elements(elements: Sequence[IntMat]) -> MatrixGroup:
    """Pick a small generating set greedily from a full element list."""
    elems = sorted(set(elements))
    n = len(elems[0])
    one = identity(n)
    gens: list[IntMat] = []
    span = {one}
    # prefer elements of large order so that few generators suffice
    for g in sorted(elems, key=lambda g: (-_elem_order(g), g)):
        if g not in span:
            gens.append(g)
            span = set(closure(gens))
            if len(span) == len(elems):
                break
    if len(span) != len(elems):
        raise AssertionError("element list is not a group")
    return MatrixGroup(gens, len(elems), elems)


def _elem_order(g: IntMat, cap: int = 1000) -> int:
    one = identity(len(g))
    x = g
    k = 1
    while x != one:
        x = mat_mul(x, g)
        k += 1
        if k > cap:
            raise RuntimeError("element of infinite order")
    return k


# ---------------------------------------------------------------------------
# backtracking


def _integral_scaled(fam1: FormFamily, fam2: FormFamily):
    out1, out2 = [], []
    for G, H in zip(fam1.grams, fam2.grams):
        den = 1
        for M in (G, H):
            for row in M:
                for x in row:
                    den = math.lcm(den, x.denominator)
        out1.append([[int(x * den) for x in row] for row in G])
        out2.append([[int(x * den) for x in row] for row in H])
    return out1, out2


def _lll_basis(G: list[list[int]]) -> list[list[int]]:
    """Unimodular U (rows = new basis) with U G U^T LLL-reduced."""
    _, U = flint.fmpz_mat(G).lll(transform=True, rep="gram")
    return [[int(x) for x in row] for row in U.tolist()]


def _iter_isometries(fam1: FormFamily, fam2: FormFamily) -> Iterator[IntMat]:
    """All integral A with A^T fam1[k] A = fam2[k]."""
    if len(fam1.grams) != len(fam2.grams) or fam1.dim != fam2.dim:
        return
    n = fam1.dim
    F1, F2 = _integral_scaled(fam1, fam2)
    if not linalg.is_positive_definite(F2[0]):
        return
    U = _lll_basis(F2[0])
    Ut = linalg.transpose(U)
    R = [linalg.matmul(linalg.matmul(U, M), Ut) for M in F2]
    # A = A' U^{-T} where A'^T F1 A' = R
    UinvT = mat_inv_int(Ut)
    norms = sorted({R[0][j][j] for j in range(n)})
    cands_by_norm: dict[int, list] = {nn: [] for nn in norms}
    for v, nv in short_vectors(F1[0], max(norms)):
        nv = int(nv)
        if nv in cands_by_norm:
            # rows v^T M and columns M v for every member
            left = [tuple(sum(v[i] * M[i][j] for i in range(n)) for j in range(n)) for M in F1]
            right = [tuple(sum(M[i][j] * v[j] for j in range(n)) for i in range(n)) for M in F1]
            diag_ok = tuple(sum(a * b for a, b in zip(left[k], v)) for k in range(len(F1)))
            cands_by_norm[nv].append((v, left, right, diag_ok))
    nk = len(F1)
    cols: list = [None] * n

    def rec(j: int):
        target_diag = tuple(R[k][j][j] for k in range(nk))
        for cand in cands_by_norm[R[0][j][j]]:
            v, left, right, dg = cand
            if dg != target_diag:
                continue
            ok = True
            for i in range(j):
                w = cols[i][0]
                for k in range(nk):
                    # w^T M v = R[i][j], v^T M w = R[j][i]
                    if sum(a * b for a, b in zip(w, right[k])) != R[k][i][j]:
                        ok = False
                        break
                    if sum(a * b for a, b in zip(left[k], w)) != R[k][j][i]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            cols[j] = cand
            if j + 1 == n:
                Ap = tuple(tuple(cols[c][0][r] for c in range(n)) for r in range(n))
                if abs(linalg.det(Ap)) == 1:
                    yield mat_mul(Ap, UinvT)
            else:
                yield from rec(j + 1)
            cols[j] = None

    yield from rec(0)


def automorphism_group(fam: FormFamily) -> MatrixGroup:
    elems = []
    for A in _iter_isometries(fam, fam):
        elems.append(A)
        if len(elems) > ENUM_CAP:
            raise RuntimeError("automorphism group exceeds the enumeration cap")
    for A in elems:
        assert preserves(A, fam)
    return group_from_elements(elems)


def find_isometry(fam1: FormFamily, fam2: FormFamily) -> IntMat | None:
    """Some integral g with g^T fam1[k] g = fam2[k] for all k, or None."""
    if fingerprint(fam1) != fingerprint(fam2):
        return None
    for A in _iter_isometries(fam1, fam2):
        assert preserves(A, fam1, fam2)
        return A
    return None


def iter_isometries(fam1: FormFamily, fam2: FormFamily) -> Iterator[IntMat]:
    if fingerprint(fam1) != fingerprint(fam2):
        return iter(())
    return _iter_isometries(fam1, fam2)


def fingerprint(fam: FormFamily) -> tuple:
    """Isometry invariants: determinants, the minimum of the first Gram, the
    number of minimal vectors and the multiset of values of every other member
    on them."""
    dets = tuple(linalg.det(G) for G in fam.grams)
    G0 = fam.grams[0]
    m = min(G0[i][i] for i in range(fam.dim))
    sv = short_vectors(G0, m)
    mn = min(nv for _, nv in sv)
    mins = [v for v, nv in sv if nv == mn]
    vals = []
    for M in fam.grams[1:]:
        c = Counter(
            sum(v[i] * M[i][j] * v[j] for i in range(fam.dim) for j in range(fam.dim)) for v in mins
        )
        vals.append(tuple(sorted(c.items())))
    return (dets, mn, len(mins), tuple(vals))
