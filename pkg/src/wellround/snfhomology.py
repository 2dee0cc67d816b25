"""Smith normal form and integral homology of augmented resolutions."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import flint

Matrix = list[list[int]]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]], transforms: bool = False):
    """Elementary divisors of an integer matrix.

    Returns (divisors, rank) where divisors lists the nonzero diagonal entries
    (each dividing the next).  With transforms=True returns (S, U, V) with
    U M V = S, U and V unimodular.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m) if transforms else None
    V = _identity(n) if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row dst += f * row src
        A[dst] = [a + f * b for a, b in zip(A[dst], A[src])]
        if U is not None:
            U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for row in A:
            row[dst] += f * row[src]
        if V is not None:
            for row in V:
                row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest remainder into the pivot position
                best = (t, t)
                for i in range(t + 1, m):
                    if A[i][t] and abs(A[i][t]) < abs(A[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t + 1, n):
                    if A[t][j] and abs(A[t][j]) < abs(A[best[0]][best[1]]):
                        best = (t, j)
                swap_rows(t, best[0])
                swap_cols(t, best[1])
                continue
            # divisibility: pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    divisors = [A[i][i] for i in range(min(m, n)) if A[i][i]]
    if transforms:
        return A, U, V
    return divisors, len(divisors)


def _eliminate_units(M: Sequence[Sequence[int]]) -> tuple[int, list[list[int]]]:
    """Pivot away +-1 entries of a sparse matrix.

    Returns the number of unit pivots and the dense remaining block, whose
    elementary divisors together with that many 1s are those of M.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, row in enumerate(M):
        r = {j: int(x) for j, x in enumerate(row) if x}
        if r:
            rows[i] = r
            for j in r:
                cols.setdefault(j, set()).add(i)
    units = 0
    while True:
        best = None
        for i, r in rows.items():
            for j, x in r.items():
                if x == 1 or x == -1:
                    cost = (len(r) - 1) * (len(cols[j]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
                        if cost == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, i, j = best
        prow = rows.pop(i)
        piv = prow[j]
        for k in prow:
            cols[k].discard(i)
        for i2 in list(cols[j]):
            r2 = rows[i2]
            f = r2[j] * piv  # piv = +-1, so r2[j] / piv = r2[j] * piv
            for k, x in prow.items():
                v = r2.get(k, 0) - f * x
                if v:
                    if k not in r2:
                        cols[k].add(i2)
                    r2[k] = v
                else:
                    if k in r2:
                        del r2[k]
                        cols[k].discard(i2)
            if not r2:
                del rows[i2]
        del cols[j]
        units += 1
    live_cols = sorted(j for j, rs in cols.items() if rs)
    index = {j: t for t, j in enumerate(live_cols)}
    dense = []
    for r in rows.values():
        row = [0] * len(live_cols)
        for j, x in r.items():
            row[index[j]] = x
        dense.append(row)
    return units, dense


def elementary_divisors(M: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero elementary divisors: sparse unit pivoting, then flint on the rest."""
    if not M or not M[0]:
        return []
    units, rest = _eliminate_units(M)
    out = [1] * units
    if rest and rest[0]:
        S = flint.fmpz_mat(rest).snf()
        k = min(S.nrows(), S.ncols())
        out += [int(S[i, i]) for i in range(k) if S[i, i] != 0]
    return out


@dataclass(frozen=True)
class HomologyGroup:
    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("torsion coefficients must form a divisibility chain")
        if any(t <= 1 for t in self.torsion):
            raise ValueError("torsion coefficients must exceed 1")

    @classmethod
    def from_cyclic_orders(cls, orders: Sequence[int], free_rank: int = 0) -> "HomologyGroup":
        return cls(tuple(invariant_factors(orders)), free_rank)

    @classmethod
    def parse(cls, text: str) -> "HomologyGroup":
        """Parse strings like '(Z/2)^2 x Z/12 x Z^2' or '0'."""
        text = text.replace(" ", "").replace("×", "x").replace("*", "x")
        if text in ("0", ""):
            return cls()
        orders: list[int] = []
        free = 0
        for part in text.split("x"):
            m = re.fullmatch(r"\(?Z/(\d+)\)?(?:\^(\d+))?", part)
            if m:
                orders += [int(m.group(1))] * int(m.group(2) or 1)
                continue
            m = re.fullmatch(r"Z(?:\^(\d+))?", part)
            if m:
                free += int(m.group(1) or 1)
                continue
            raise ValueError(f"cannot parse group factor {part!r}")
        return cls.from_cyclic_orders(orders, free)

    def primary_parts(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for t in self.torsion:
            for p, e in _factor(t).items():
                out.setdefault(p, []).append(p**e)
        return {p: sorted(v) for p, v in sorted(out.items())}

    def __str__(self) -> str:
        if not self.torsion and not self.free_rank:
            return "0"
        parts = []
        i = 0
        tors = list(self.torsion)
        while i < len(tors):
            j = i
            while j < len(tors) and tors[j] == tors[i]:
                j += 1
            parts.append(f"Z/{tors[i]}" if j - i == 1 else f"(Z/{tors[i]})^{j - i}")
            i = j
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " x ".join(parts)


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors(orders: Sequence[int]) -> list[int]:
    """Divisibility chain of a product of cyclic groups of the given orders."""
    prim: dict[int, list[int]] = {}
    for o in orders:
        if o <= 1:
            continue
        for p, e in _factor(o).items():
            prim.setdefault(p, []).append(p**e)
    if not prim:
        return []
    length = max(len(v) for v in prim.values())
    chain = [1] * length
    for p, powers in prim.items():
        powers.sort(reverse=True)
        for i, q in enumerate(powers):
            chain[length - 1 - i] *= q
    return chain


def homology_from_matrices(Dn: Sequence[Sequence[int]], Dn1: Sequence[Sequence[int]], n_gens: int) -> HomologyGroup:
    """H = ker(x -> x Dn) / rowspan(Dn1) for chain groups of rank n_gens.

    Matrices use the row convention: row i is the image of generator i.
    """
    if Dn and Dn1:
        prod = flint.fmpz_mat([list(r) for r in Dn1]) * flint.fmpz_mat([list(r) for r in Dn])
        if any(prod[i, j] != 0 for i in range(prod.nrows()) for j in range(prod.ncols())):
            raise ArithmeticError("consecutive differentials do not compose to zero")
    rank_n = _rank(Dn)
    divs = elementary_divisors(Dn1) if Dn1 else []
    free = n_gens - rank_n - len(divs)
    return HomologyGroup(tuple(d for d in divs if d > 1), free)


def _rank(M) -> int:
    if not M or not M[0]:
        return 0
    return flint.fmpz_mat([list(map(int, r)) for r in M]).rank()


def integral_homology(R, n: int) -> HomologyGroup:
    """H_n of the group resolved by R (a PerturbedResolution)."""
    if n + 1 > R.length:
        raise ValueError("resolution not built far enough")
    Dn = R.augmented(n)
    Dn1 = R.augmented(n + 1)
    return homology_from_matrices(Dn, Dn1, R.total_rank(n))
