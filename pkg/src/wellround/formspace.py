"""Hermitian (resp. symmetric) forms over a quadratic field and weighted minima.

A form is a point of Sigma_Q, the 2x2 matrices F over K with F^dagger = F,
where dagger is conjugate transpose for imaginary K and plain transpose for
real K.  Coordinates over the fixed basis (see ``sigma_basis``):

    imaginary:  F = [[a, b], [conj(b), c]],  coords (a, c, b0, b1), b = b0 + b1*w
    real:       F = [[a, b], [b, c]],        coords (a0, a1, c0, c1, b0, b1)

The pairing is <F1, F2> = Tr_{K/Q}(tr(F1 F2)) and F[x] = <F, x x^dagger>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import flint

from . import linalg
from .quadfield import (
    FieldConfig,
    FieldElem,
    ModuleLattice,
    class_group,
    ideal_of_vector,
    min_norm_in_class,
)

Vec = tuple[int, ...]


class NotPositiveDefinite(ValueError):
    pass


def _star(x: FieldElem) -> FieldElem:
    return x.conj() if x.field.is_imaginary else x


def sigma_dim(K: FieldConfig) -> int:
    return 4 if K.is_imaginary else 6


def sigma_basis_names(K: FieldConfig) -> list[str]:
    if K.is_imaginary:
        return ["E11", "E22", "E12+E21", "w*E12+conj(w)*E21"]
    return ["E11", "w*E11", "E22", "w*E22", "E12+E21", "w*(E12+E21)"]


@dataclass(frozen=True)
class Form:
    field: FieldConfig
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != sigma_dim(self.field):
            raise ValueError("wrong number of form coordinates")
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    def matrix(self):
        K = self.field
        c = self.coords
        if K.is_imaginary:
            a, cc, b0, b1 = c
            b = K(b0, b1)
            return ((K(a), b), (b.conj(), K(cc)))
        a = K(c[0], c[1])
        cc = K(c[2], c[3])
        b = K(c[4], c[5])
        return ((a, b), (b, cc))

    @classmethod
    def from_matrix(cls, K: FieldConfig, F) -> "Form":
        (a, b), (b2, c) = F
        if K.is_imaginary:
            if a.b != 0 or c.b != 0 or b2 != b.conj():
                raise ValueError("matrix is not Hermitian")
            return cls(K, (a.a, c.a, b.a, b.b))
        if b2 != b:
            raise ValueError("matrix is not symmetric")
        return cls(K, (a.a, a.b, c.a, c.b, b.a, b.b))

    def __add__(self, other: "Form") -> "Form":
        _check_same(self, other)
        return Form(self.field, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: "Form") -> "Form":
        _check_same(self, other)
        return Form(self.field, tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "Form":
        return Form(self.field, tuple(-x for x in self.coords))

    def scale(self, c) -> "Form":
        c = Fraction(c)
        return Form(self.field, tuple(c * x for x in self.coords))

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    @classmethod
    def zero(cls, K: FieldConfig) -> "Form":
        return cls(K, (0,) * sigma_dim(K))

    @classmethod
    def identity(cls, K: FieldConfig) -> "Form":
        return cls.from_matrix(K, ((K.one, K.zero), (K.zero, K.one)))


def _check_same(F1: Form, F2: Form):
    if F1.field != F2.field:
        raise ValueError("forms over different fields")


def sigma_basis(K: FieldConfig) -> list[Form]:
    n = sigma_dim(K)
    return [Form(K, tuple(int(i == j) for j in range(n))) for i in range(n)]


def _mat_mul(A, B):
    return tuple(
        tuple(A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)) for i in range(2)
    )


def dagger(A):
    return tuple(tuple(_star(A[j][i]) for j in range(2)) for i in range(2))


def mat_inverse(A):
    (a, b), (c, d) = A
    det = a * d - b * c
    inv = det.inverse()
    return ((d * inv, -b * inv), (-c * inv, a * inv))


def trace_pairing(F1: Form, F2: Form) -> Fraction:
    _check_same(F1, F2)
    P = _mat_mul(F1.matrix(), F2.matrix())
    return (P[0][0] + P[1][1]).trace()


def eval_form(F: Form, x: Sequence[FieldElem]) -> Fraction:
    """F[x] = Tr_{K/Q}(x^dagger F x)."""
    M = F.matrix()
    x1, x2 = x
    s = _star(x1) * (M[0][0] * x1 + M[0][1] * x2) + _star(x2) * (M[1][0] * x1 + M[1][1] * x2)
    return s.trace()


def rank_one(x: Sequence[FieldElem]) -> Form:
    x1, x2 = x
    K = x1.field
    M = ((x1 * _star(x1), x1 * _star(x2)), (x2 * _star(x1), x2 * _star(x2)))
    return Form.from_matrix(K, M)


def form_inverse(F: Form) -> Form:
    return Form.from_matrix(F.field, mat_inverse(F.matrix()))


def act_on_form(g, F: Form) -> Form:
    """Natural action g.F = g^{-dagger} F g^{-1}, so that (g.F)[g x] = F[x]."""
    gi = mat_inverse(g)
    return Form.from_matrix(F.field, _mat_mul(_mat_mul(dagger(gi), F.matrix()), gi))


def act_on_ray(g, T: Form) -> Form:
    """g T g^dagger, the action on sums of rank-one forms."""
    return Form.from_matrix(T.field, _mat_mul(_mat_mul(g, T.matrix()), dagger(g)))


def z_gram(F: Form, L: ModuleLattice) -> list[list[Fraction]]:
    """Gram matrix of x -> F[x] on the Z-basis of L (F[x] = v^T G v)."""
    if not is_positive_definite(F, L):
        raise NotPositiveDefinite("z_gram needs a positive definite form")
    return _z_gram_raw(F, L)


def _z_gram_raw(F: Form, L: ModuleLattice) -> list[list[Fraction]]:
    M = F.matrix()
    B = L.z_basis
    G = [[Fraction(0)] * 4 for _ in range(4)]
    for i in range(4):
        x1, x2 = B[i]
        for j in range(i, 4):
            y1, y2 = B[j]
            s = _star(x1) * (M[0][0] * y1 + M[0][1] * y2) + _star(x2) * (M[1][0] * y1 + M[1][1] * y2)
            G[i][j] = G[j][i] = s.trace()
    return G


def is_positive_definite(F: Form, L: ModuleLattice | None = None) -> bool:
    if L is None:
        from .quadfield import Ideal

        L = ModuleLattice(F.field, Ideal.unit(F.field))
    return linalg.is_positive_definite(_z_gram_raw(F, L))


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class WeightSpec:
    kind: str = "phi0"
    class_norm_table: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("phi0", "phi1"):
            raise ValueError(f"unknown weight {self.kind!r}")

    @classmethod
    def phi0(cls) -> "WeightSpec":
        return cls("phi0")

    @classmethod
    def phi1(cls, K: FieldConfig) -> "WeightSpec":
        cg = class_group(K)
        return cls("phi1", tuple(min_norm_in_class(cg, i) for i in range(cg.h)))

    @property
    def is_trivial(self) -> bool:
        return self.kind == "phi0" or max(self.class_norm_table, default=1) == 1

    @property
    def min_value(self) -> Fraction:
        if self.kind == "phi0":
            return Fraction(1)
        return Fraction(1, max(self.class_norm_table))


def weight_value(w: WeightSpec, L: ModuleLattice, x: Sequence[FieldElem]) -> Fraction:
    x1, x2 = x
    if not x1 and not x2:
        raise ValueError("weight of the zero vector")
    if w.is_trivial:
        return Fraction(1)
    cg = class_group(L.field)
    idx = cg.class_of(ideal_of_vector(L, x))
    # exponent -2/[K:Q] = -1 for quadratic K
    return Fraction(1, w.class_norm_table[idx])


# ---------------------------------------------------------------------------
# short vectors


def short_vectors(G: Sequence[Sequence], bound) -> list[tuple[Vec, Fraction]]:
    """All nonzero v in Z^n with v^T G v <= bound, exact, for G rational PD.

    Floating point only prunes the search tree (with a safety margin); every
    returned vector is checked exactly.
    """
    n = len(G)
    den = 1
    for row in G:
        for x in row:
            den = math.lcm(den, Fraction(x).denominator)
    Gi = [[int(Fraction(x) * den) for x in row] for row in G]
    B = Fraction(bound) * den
    if B <= 0:
        return []
    R, U = flint.fmpz_mat(Gi).lll(transform=True, rep="gram")
    Gr = [[int(x) for x in row] for row in R.tolist()]
    Ut = [[int(x) for x in row] for row in U.transpose().tolist()]
    found = _fincke_pohst(Gr, B)
    out = []
    for w in found:
        v = tuple(sum(Ut[i][k] * w[k] for k in range(n)) for i in range(n))
        out.append((v, Fraction(_qf(Gi, v), den)))
    return out


def _qf(G, v) -> int:
    n = len(v)
    s = 0
    for i in range(n):
        if v[i]:
            row = G[i]
            s += v[i] * sum(row[j] * v[j] for j in range(n))
    return s


def _fincke_pohst(G: list[list[int]], bound: Fraction) -> list[Vec]:
    n = len(G)
    # float Cholesky-type decomposition q_ii, q_ij
    q = [[float(G[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    fb = float(bound) * (1 + 1e-9) + 1e-9
    out: list[Vec] = []
    x = [0] * n
    bi = bound  # exact comparison at the leaves

    def rec(i: int, remaining: float):
        c = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        if remaining < 0:
            return
        r = math.sqrt(max(remaining, 0.0) / q[i][i]) + 1e-9
        lo = math.ceil(c - r)
        hi = math.floor(c + r)
        for xi in range(lo, hi + 1):
            x[i] = xi
            t = xi - c
            rem = remaining - q[i][i] * t * t
            if rem < -1e-9 * (1 + fb):
                continue
            if i == 0:
                if any(x):
                    v = tuple(x)
                    if _qf(G, v) <= bi:
                        out.append(v)
            else:
                rec(i - 1, rem)
        x[i] = 0

    rec(n - 1, fb)
    return out


# ---------------------------------------------------------------------------
# a form space attached to a lattice and a weight


@dataclass(frozen=True)
class MinData:
    minimum: Fraction
    vectors: tuple[Vec, ...]


class FormSpace:
    """Forms on a fixed lattice L with a fixed weight, in coordinates.

    Lattice vectors are integer coordinate tuples on the Z-basis of L.  The
    evaluation vector ev(v) satisfies F[v] = coords(F) . ev(v) and is integral.
    """

    def __init__(self, L: ModuleLattice, weight: WeightSpec | None = None):
        self.L = L
        self.K = L.field
        self.weight = weight or WeightSpec.phi0()
        self.N = sigma_dim(self.K)
        self.basis = sigma_basis(self.K)
        self.basis_grams = [_z_gram_raw(E, L) for E in self.basis]
        # quadratic coefficient tables: ev(v)_k = sum_{i<=j} c[k][i][j] v_i v_j
        self._qcoef = []
        for G in self.basis_grams:
            c = {}
            for i in range(4):
                for j in range(i, 4):
                    val = G[i][j] if i == j else 2 * G[i][j]
                    if val:
                        if Fraction(val).denominator != 1:
                            raise AssertionError("non-integral evaluation coefficient")
                        c[(i, j)] = int(val)
            self._qcoef.append(c)
        self.pairing_gram = [[trace_pairing(a, b) for b in self.basis] for a in self.basis]
        self._pairing_inv = linalg.inverse(self.pairing_gram)
        self._ev_cache: dict[Vec, tuple[int, ...]] = {}
        self._w_cache: dict[Vec, Fraction] = {}

    # -- vectors
    def ev(self, v: Vec) -> tuple[int, ...]:
        e = self._ev_cache.get(v)
        if e is None:
            e = tuple(sum(c * v[i] * v[j] for (i, j), c in qc.items()) for qc in self._qcoef)
            self._ev_cache[v] = e
        return e

    def weight_of(self, v: Vec) -> Fraction:
        if self.weight.is_trivial:
            return Fraction(1)
        w = self._w_cache.get(v)
        if w is None:
            w = weight_value(self.weight, self.L, self.L.to_vector(v))
            self._w_cache[v] = w
        return w

    def value(self, F: Sequence[Fraction], v: Vec) -> Fraction:
        """Weighted value phi(v) F[v]."""
        return self.weight_of(v) * sum(f * e for f, e in zip(F, self.ev(v)) if e)

    def rank_one_coords(self, v: Vec) -> list[Fraction]:
        return self.dual_coords(self.ev(v))

    def dual_coords(self, e: Sequence[int]) -> list[Fraction]:
        """The form R with <R, F> = coords(F) . e, e.g. R = v v^dagger for e = ev(v)."""
        return linalg.matvec(self._pairing_inv, e)

    def k_independent(self, u: Vec, v: Vec) -> bool:
        W = self.L.omega_action
        Wu = tuple(sum(W[i][j] * u[j] for j in range(4)) for i in range(4))
        Wv = tuple(sum(W[i][j] * v[j] for j in range(4)) for i in range(4))
        return linalg.det([u, Wu, v, Wv]) != 0

    def contains_k_basis(self, vecs: Sequence[Vec]) -> bool:
        vecs = list(vecs)
        if not vecs:
            return False
        u = vecs[0]
        return any(self.k_independent(u, v) for v in vecs[1:])

    # -- forms
    def gram(self, F: Sequence[Fraction]) -> list[list[Fraction]]:
        G = [[Fraction(0)] * 4 for _ in range(4)]
        for f, Gk in zip(F, self.basis_grams):
            if f:
                for i in range(4):
                    for j in range(4):
                        if Gk[i][j]:
                            G[i][j] += f * Gk[i][j]
        return G

    def is_pd(self, F: Sequence[Fraction]) -> bool:
        return linalg.is_positive_definite(self.gram(F))

    def is_psd(self, F: Sequence[Fraction]) -> bool:
        return linalg.is_positive_semidefinite(self.gram(F))

    def minimum(self, F: Sequence[Fraction]) -> MinData:
        """Exact weighted minimum and all lattice vectors attaining it."""
        G = self.gram(F)
        if not linalg.is_positive_definite(G):
            raise NotPositiveDefinite("minimum of a form that is not positive definite")
        # candidate: weighted values of the LLL-short vectors
        wmin = self.weight.min_value
        cand = None
        for v, nv in short_vectors(G, _diag_bound(G)):
            val = self.weight_of(v) * nv
            if cand is None or val < cand:
                cand = val
        bound = cand / wmin
        best = None
        vecs: list[Vec] = []
        for v, nv in short_vectors(G, bound):
            val = self.weight_of(v) * nv
            if best is None or val < best:
                best, vecs = val, [v]
            elif val == best:
                vecs.append(v)
        vecs.sort()
        return MinData(best, tuple(vecs))

    def act_matrix(self, A) -> list[list[Fraction]]:
        """N x N matrix of F -> g.F on coordinates, for g with integer matrix A on L."""
        Ai = linalg.inverse(A)
        AiT = linalg.transpose(Ai)
        cols = []
        for Gk in self.basis_grams:
            cols.append(self.coords_of_gram(linalg.matmul(linalg.matmul(AiT, Gk), Ai)))
        return linalg.transpose(cols)

    @cached_property
    def _gram_solver(self):
        # pick N entries (i <= j) of the 4x4 Gram that determine the coordinates
        entries = [(i, j) for i in range(4) for j in range(i, 4)]
        rows = []
        chosen = []
        for e in entries:
            row = [Gk[e[0]][e[1]] for Gk in self.basis_grams]
            if linalg.rank(rows + [row]) > len(rows):
                rows.append(row)
                chosen.append(e)
            if len(rows) == self.N:
                break
        return chosen, linalg.inverse(rows)

    def coords_of_gram(self, G) -> list[Fraction]:
        chosen, inv = self._gram_solver
        rhs = [Fraction(G[i][j]) for i, j in chosen]
        return linalg.matvec(inv, rhs)

    def form(self, F: Sequence[Fraction]) -> Form:
        return Form(self.K, tuple(F))


def _diag_bound(G) -> Fraction:
    return min(G[i][i] for i in range(len(G)))


def minimum_and_vectors(F: Form, w: WeightSpec, L: ModuleLattice) -> MinData:
    return FormSpace(L, w).minimum(F.coords)
