"""Free resolutions of the stabilizers and Wall's perturbation of their sum.

Group ring elements are dicts {g: coeff} over canonical group elements.
Elements of a free module are dicts {(gen, g): coeff} meaning sum coeff * g e_gen,
with the group acting on the left.
"""
from __future__ import annotations

import logging
from typing import Callable, Hashable, Sequence

import flint

from . import linalg
from .voronoi import CellComplexData, coset_key

log = logging.getLogger(__name__)

Elem = Hashable
RingElem = dict
ModElem = dict


def _add_into(acc: dict, key, c: int):
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class GroupRingElement:
    """Thin wrapper used by the public API; the heavy lifting works on dicts."""

    def __init__(self, terms: dict | None = None, mul: Callable | None = None):
        self.terms = {g: c for g, c in (terms or {}).items() if c}
        self.mul = mul

    def __add__(self, other):
        out = dict(self.terms)
        for g, c in other.terms.items():
            _add_into(out, g, c)
        return GroupRingElement(out, self.mul or other.mul)

    def __neg__(self):
        return GroupRingElement({g: -c for g, c in self.terms.items()}, self.mul)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        mul = self.mul or other.mul
        out: dict = {}
        for g, a in self.terms.items():
            for h, b in other.terms.items():
                _add_into(out, mul(g, h), a * b)
        return GroupRingElement(out, mul)

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def augmentation(self) -> int:
        return sum(self.terms.values())

    def __repr__(self):
        return f"GroupRingElement({len(self.terms)} terms)"


class RowSolver:
    """Solves x D = y over Z for a fixed integer matrix D (rows = generators)."""

    def __init__(self, D: list[list[int]]):
        self.nrows = len(D)
        self.ncols = len(D[0]) if D else 0
        if not D or not self.ncols:
            self.rows = []
            self.U = []
            return
        H, U, r = linalg.hnf_with_transform(D)
        self.rows = []
        self.U = []
        for i in range(r):
            row = H[i]
            piv = next(j for j, x in enumerate(row) if x)
            self.rows.append((piv, {j: x for j, x in enumerate(row) if x}))
            self.U.append(U[i])

    def solve(self, y: Sequence[int]) -> list[int]:
        y = list(y)
        coeffs = []
        for piv, row in self.rows:
            if y[piv] % row[piv]:
                raise ArithmeticError("vector not in the image")
            c = y[piv] // row[piv]
            coeffs.append(c)
            if c:
                for j, x in row.items():
                    y[j] -= c * x
        if any(y):
            raise ArithmeticError("vector not in the image")
        x = [0] * self.nrows
        for c, u in zip(coeffs, self.U):
            if c:
                for i, v in enumerate(u):
                    if v:
                        x[i] += c * v
        return x


class StabResolution:
    """Free Z[G]-resolution of Z^chi for a finite group G given by its elements."""

    def __init__(self, elements: Sequence[Elem], generators: Sequence[Elem], chi: dict,
                 mul: Callable, one: Elem, length: int):
        self.elements = list(elements)
        self.n = len(self.elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        self.mul = mul
        self.one = one
        self.chi = chi
        self.gens = list(generators)
        self.mt = [[self.index[mul(a, b)] for b in self.elements] for a in self.elements]
        self.ranks = [1]
        # diffs[q][i][j] = ring element (dict elem -> coeff) with d(e_i) = sum_j a_ij e_j
        self.diffs: list[list[list[dict]]] = [[]]
        self._mats: list[list[list[int]] | None] = [None]
        self._solvers: dict[int, RowSolver] = {}
        self.length = 0
        self._extend_to(length)

    # -- expansion
    def expand(self, q: int) -> list[list[int]]:
        """Z-matrix of d_q : R_q -> R_{q-1}; basis (i, s) -> index i*n + idx(s)."""
        M = self._mats[q]
        if M is None:
            n = self.n
            src, tgt = self.ranks[q], self.ranks[q - 1]
            M = [[0] * (tgt * n) for _ in range(src * n)]
            for i in range(src):
                for j in range(tgt):
                    a = self.diffs[q][i][j]
                    for u, c in a.items():
                        ui = self.index[u]
                        for si in range(n):
                            M[i * n + si][j * n + self.mt[si][ui]] += c
            self._mats[q] = M
        return M

    def _kernel_generators(self, q: int) -> list[list[dict]]:
        """Z[G]-generators of ker(d_q), as rows over the rank of R_q."""
        n = self.n
        rq = self.ranks[q]
        if q == 0:
            # kernel of the augmentation: s - chi(s) for generators s
            return [[_ring_add({g: 1}, {self.one: -self.chi[g]})] for g in self.gens if g != self.one]
        D = self.expand(q)
        K = linalg.integer_kernel(linalg.transpose(D), rq * n)
        if not K:
            return []
        Kf = flint.fmpz_mat(K).lll()
        K = [[int(x) for x in row] for row in Kf.tolist()]
        target = _hnf_rows(K)
        cands = sorted(K, key=lambda v: (sum(1 for x in v if x), sum(x * x for x in v), v))
        chosen: list[list[int]] = []
        span: list[list[int]] = []  # kept in HNF
        for v in cands:
            if span and _in_hnf_span(span, v):
                continue
            chosen.append(v)
            span = _hnf_rows(span + self._translates(v, rq))
            if span == target:
                break
        else:
            if span != target:
                raise AssertionError("kernel generators do not span the kernel")
        return [self._to_ring(v, rq) for v in chosen]

    def _translates(self, v: list[int], r: int) -> list[list[int]]:
        n = self.n
        out = []
        for s in range(n):
            w = [0] * (r * n)
            for j in range(r):
                for u in range(n):
                    c = v[j * n + u]
                    if c:
                        w[j * n + self.mt[s][u]] += c
            out.append(w)
        return out

    def _to_ring(self, v: list[int], r: int) -> list[dict]:
        n = self.n
        return [{self.elements[u]: v[j * n + u] for u in range(n) if v[j * n + u]} for j in range(r)]

    def _cyclic_generator(self):
        for g in self.elements:
            k, x = 1, g
            while x != self.one:
                x = self.mul(x, g)
                k += 1
            if k == self.n:
                return g
        return None

    def _extend_to(self, length: int):
        cyc = self._cyclic_generator() if self.n > 1 else None
        while self.length < length:
            q = self.length
            if self.n == 1:
                rows = []
            elif cyc is not None:
                c = self.chi[cyc]
                if q % 2 == 0:
                    rows = [[_ring_add({cyc: 1}, {self.one: -c})]]
                else:
                    norm: dict = {}
                    x, sign = self.one, 1
                    for _ in range(self.n):
                        _add_into(norm, x, sign)
                        x = self.mul(x, cyc)
                        sign *= c
                    rows = [[norm]]
            else:
                rows = self._kernel_generators(q)
            self.diffs.append(rows)
            self.ranks.append(len(rows))
            self._mats.append(None)
            self.length += 1

    # -- contract
    def solver(self, q: int) -> RowSolver:
        """Solver for lifting through d_q : R_q -> R_{q-1}."""
        s = self._solvers.get(q)
        if s is None:
            s = RowSolver(self.expand(q))
            self._solvers[q] = s
        return s

    def lift(self, q: int, y: list[int]) -> list[int]:
        """x in R_{q+1} with d(x) = y, for y a cycle (or in ker of the augmentation)."""
        if not any(y):
            return [0] * (self.ranks[q + 1] * self.n)
        return self.solver(q + 1).solve(y)

    def d0(self, q: int, x: Sequence[int]) -> list[int]:
        M = self.expand(q)
        out = [0] * (self.ranks[q - 1] * self.n)
        for i, c in enumerate(x):
            if c:
                for j, v in enumerate(M[i]):
                    if v:
                        out[j] += c * v
        return out

    def certify(self):
        """d o d = 0 and exactness at every degree below the top."""
        n = self.n
        aug = [self.chi[g] for g in self.elements]
        for q in range(1, self.length + 1):
            M = self.expand(q)
            if q == 1:
                for row in M:
                    if sum(a * b for a, b in zip(row, aug)):
                        raise AssertionError("augmentation o d1 != 0")
            else:
                P = flint.fmpz_mat(M) * flint.fmpz_mat(self.expand(q - 1)) if M and M[0] else None
                if P is not None and not P.is_zero():
                    raise AssertionError("d o d != 0 in a stabilizer resolution")
        # exactness: rank(im d_{q+1}) = rank(ker d_q) and the lattices agree
        for q in range(0, self.length):
            if q == 0:
                ker = linalg.integer_kernel([aug], n)
            else:
                ker = linalg.integer_kernel(linalg.transpose(self.expand(q)), self.ranks[q] * n)
            im = self.expand(q + 1)
            if _hnf_rows(ker) != _hnf_rows(im):
                raise AssertionError(f"stabilizer resolution not exact in degree {q}")
        return True


def _ring_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for g, c in b.items():
        _add_into(out, g, c)
    return out


def _hnf_rows(rows: list[list[int]]) -> list[list[int]]:
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    H = flint.fmpz_mat(rows).hnf()
    return [[int(x) for x in r] for r in H.tolist() if any(x != 0 for x in r)]


def _in_hnf_span(H: list[list[int]], v: list[int]) -> bool:
    """Membership of v in the row lattice of H, for H in Hermite normal form."""
    v = list(v)
    for row in H:
        piv = next(j for j, x in enumerate(row) if x)
        if v[piv] % row[piv]:
            return False
        c = v[piv] // row[piv]
        if c:
            for j in range(piv, len(row)):
                if row[j]:
                    v[j] -= c * row[j]
    return not any(v)


def finite_group_resolution(cd: CellComplexData, p: int, idx: int, length: int) -> StabResolution:
    c = cd.orbits[p][idx]
    one = cd.canon(tuple(tuple(int(i == j) for j in range(4)) for i in range(4)))
    return StabResolution(c.stabilizer.elements, c.stabilizer.generators, c.chi, cd.mul, one, length)


# ---------------------------------------------------------------------------
# Wall's perturbation


Gen = tuple[int, int, int, int]  # (p, cell index, q, i)


class PerturbedResolution:
    def __init__(self, cd: CellComplexData, length: int, check: bool = True):
        self.cd = cd
        self.length = length
        self.res: dict[tuple[int, int], StabResolution] = {}
        for p, cells in cd.orbits.items():
            for idx in range(len(cells)):
                R = finite_group_resolution(cd, p, idx, length)
                if check:
                    R.certify()
                self.res[(p, idx)] = R
        self.one = cd.canon(tuple(tuple(int(i == j) for j in range(4)) for i in range(4)))
        self.dk: dict[tuple[int, Gen], ModElem] = {}
        self._coset_rep: dict = {}
        self._h0_memo: dict = {}
        self.max_k = 0
        self._build()
        if check:
            self.check_dd()

    # -- bookkeeping
    def gens(self, p: int, q: int) -> list[Gen]:
        cells = self.cd.orbits.get(p, [])
        out = []
        for idx in range(len(cells)):
            R = self.res[(p, idx)]
            if q <= R.length:
                out += [(p, idx, q, i) for i in range(R.ranks[q])]
        return out

    def total_gens(self, n: int) -> list[Gen]:
        out = []
        for p in sorted(self.cd.orbits):
            if 0 <= n - p <= self.length:
                out += self.gens(p, n - p)
        return out

    def total_rank(self, n: int) -> int:
        return len(self.total_gens(n))

    def ranks(self) -> dict[tuple[int, int], int]:
        return {(p, q): len(self.gens(p, q)) for p in sorted(self.cd.orbits) for q in range(self.length + 1)}

    # -- applying maps
    def _translate_into(self, acc: ModElem, img: ModElem, g, c: int):
        mul = self.cd.mul
        for (gen, h), v in img.items():
            _add_into(acc, (gen, mul(g, h)), c * v)

    def d0_gen(self, gen: Gen) -> ModElem:
        p, idx, q, i = gen
        if q == 0:
            return {}
        R = self.res[(p, idx)]
        out: ModElem = {}
        for j, a in enumerate(R.diffs[q][i]):
            for u, c in a.items():
                _add_into(out, ((p, idx, q - 1, j), u), c)
        return out

    def d_gen(self, k: int, gen: Gen) -> ModElem:
        if k == 0:
            return self.d0_gen(gen)
        return self.dk.get((k, gen), {})

    def apply(self, k: int, x: ModElem) -> ModElem:
        out: ModElem = {}
        for (gen, g), c in x.items():
            img = self.d_gen(k, gen)
            if img:
                self._translate_into(out, img, g, c)
        return out

    # -- contracting lift
    def induce_and_decompose(self, g, p: int, idx: int):
        """g = t s with s in Stab(c) and t a fixed representative of g Stab(c)."""
        key = (p, idx, coset_key(self.cd, p, idx, g))
        t = self._coset_rep.get(key)
        if t is None:
            t = g
            self._coset_rep[key] = t
        s = self.cd.mul(self.cd.inv(t), g)
        return t, s

    def h0(self, y: ModElem) -> ModElem:
        """x with d0(x) = y, for y a d0-cycle (augmentation-null in q = 0)."""
        blocks: dict = {}
        for ((p, idx, q, i), g), c in y.items():
            t, s = self.induce_and_decompose(g, p, idx)
            blk = blocks.setdefault((p, idx, q, t), {})
            _add_into(blk, (i, s), c)
        out: ModElem = {}
        for (p, idx, q, t), blk in blocks.items():
            if not blk:
                continue
            R = self.res[(p, idx)]
            if q + 1 > R.length:
                raise RuntimeError("stabilizer resolution too short")
            n = R.n
            z = [0] * (R.ranks[q] * n)
            for (i, s), c in blk.items():
                z[i * n + R.index[s]] += c
            key = (p, idx, q, tuple(z))
            x = self._h0_memo.get(key)
            if x is None:
                try:
                    x = R.lift(q, z)
                except ArithmeticError:
                    raise RuntimeError(
                        f"perturbation term outside the image of d0 (cell {p}:{idx}, degree {q})"
                    ) from None
                self._h0_memo[key] = x
            for pos, c in enumerate(x):
                if c:
                    j, u = divmod(pos, n)
                    _add_into(out, ((p, idx, q + 1, j), self.cd.mul(t, R.elements[u])), c)
        return out

    def contracting_lift(self, y: ModElem) -> ModElem:
        return self.h0(y)

    # -- assembly
    def _build(self):
        cd = self.cd
        top = cd.top_dim
        N = self.length  # maximal total degree needed
        for k in range(1, top + 1):
            for q in range(0, N + 1):
                for p in range(k, top + 1):
                    if p + q > N:
                        continue
                    for gen in self.gens(p, q):
                        if k == 1 and q == 0:
                            img: ModElem = {}
                            for t in cd.boundaries[p][gen[1]]:
                                _add_into(img, ((p - 1, t.target, 0, 0), t.element), t.sign)
                        else:
                            y: ModElem = {}
                            base = {(gen, self.one): 1}
                            for i in range(1, k + 1):
                                mid = self.apply(k - i, base)
                                if mid:
                                    for key, c in self.apply(i, mid).items():
                                        _add_into(y, key, c)
                            if not y:
                                continue
                            img = {key: -c for key, c in self.h0(y).items()}
                        if img:
                            self.dk[(k, gen)] = img
                            self.max_k = max(self.max_k, k)

    def total_d(self, gen: Gen) -> ModElem:
        out: ModElem = {}
        for k in range(0, self.max_k + 1):
            for key, c in self.d_gen(k, gen).items():
                _add_into(out, key, c)
        return out

    def check_dd(self):
        for n in range(1, self.length + 1):
            for gen in self.total_gens(n):
                first = self.total_d(gen)
                acc: ModElem = {}
                for (g2, g), c in first.items():
                    self._translate_into(acc, self.total_d(g2), g, c)
                if acc:
                    raise AssertionError(f"d o d != 0 on generator {gen}")

    def augmented(self, n: int) -> list[list[int]]:
        """Integer matrix of the augmented differential C_n -> C_{n-1} (row convention)."""
        src = self.total_gens(n)
        tgt = self.total_gens(n - 1) if n >= 1 else []
        col = {g: j for j, g in enumerate(tgt)}
        M = [[0] * len(tgt) for _ in src]
        for i, gen in enumerate(src):
            for (g2, _), c in self.total_d(gen).items():
                M[i][col[g2]] += c
        return M


def wall_assemble(cd: CellComplexData, length: int, check: bool = True) -> PerturbedResolution:
    return PerturbedResolution(cd, length, check)
