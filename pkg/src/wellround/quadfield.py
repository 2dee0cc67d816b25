"""Exact arithmetic in a quadratic field, its maximal order, ideals and class group.

Elements are stored over the integral basis (1, w) where w = sqrt(d) when
d = 2, 3 mod 4 and w = (1 + sqrt(d))/2 when d = 1 mod 4.  Ideals are rank-2
Z-modules kept in Hermite normal form together with a positive denominator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

DEFAULT_DISC_BOUND = 10**4


class FieldTooLarge(ValueError):
    pass


def _is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def _primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, v in enumerate(sieve) if v]


@dataclass(frozen=True)
class FieldConfig:
    """The quadratic field Q(sqrt(d)) for a squarefree integer d != 0, 1."""

    squarefree_d: int

    def __post_init__(self):
        d = self.squarefree_d
        if d in (0, 1) or not _is_squarefree(d):
            raise ValueError(f"d={d} is not a squarefree integer different from 0 and 1")

    @property
    def d(self) -> int:
        return self.squarefree_d

    @property
    def disc(self) -> int:
        d = self.squarefree_d
        return d if d % 4 == 1 else 4 * d

    @property
    def omega_rule(self) -> str:
        return "(1+sqrt(d))/2" if self.squarefree_d % 4 == 1 else "sqrt(d)"

    # w satisfies w^2 = t*w - m, i.e. t = Tr(w), m = N(w).
    @property
    def omega_trace(self) -> int:
        return 1 if self.squarefree_d % 4 == 1 else 0

    @property
    def omega_norm(self) -> int:
        d = self.squarefree_d
        return (1 - d) // 4 if d % 4 == 1 else -d

    @property
    def is_imaginary(self) -> bool:
        return self.squarefree_d < 0

    @property
    def signature(self) -> tuple[int, int]:
        return (0, 1) if self.squarefree_d < 0 else (2, 0)

    @property
    def degree(self) -> int:
        return 2

    def __call__(self, a=0, b=0) -> "FieldElem":
        return FieldElem(self, Fraction(a), Fraction(b))

    @property
    def one(self) -> "FieldElem":
        return self(1, 0)

    @property
    def zero(self) -> "FieldElem":
        return self(0, 0)

    @property
    def omega(self) -> "FieldElem":
        return self(0, 1)

    def sqrt_d(self) -> "FieldElem":
        return self(-1, 2) if self.squarefree_d % 4 == 1 else self(0, 1)

    def omega_embeddings(self) -> tuple[complex, complex]:
        d = self.squarefree_d
        s = complex(0, math.sqrt(-d)) if d < 0 else complex(math.sqrt(d), 0)
        w = (1 + s) / 2 if d % 4 == 1 else s
        wc = (1 - s) / 2 if d % 4 == 1 else -s
        return w, wc

    @cached_property
    def torsion_units(self) -> tuple["FieldElem", ...]:
        """Roots of unity in Z_K, starting with 1."""
        d = self.squarefree_d
        one = self.one
        if d == -1:
            i = self.omega
            return (one, i, -one, -i)
        if d == -3:
            # w = (1+sqrt(-3))/2 is a primitive 6th root of unity
            w = self.omega
            out = [one]
            x = w
            while x != one:
                out.append(x)
                x = x * w
            return tuple(out)
        return (one, -one)

    @cached_property
    def fundamental_unit(self) -> "FieldElem":
        """Fundamental unit > 1 in the first real embedding (real fields only)."""
        if self.is_imaginary:
            raise ValueError("imaginary quadratic fields have no fundamental unit")
        return _fundamental_unit(self)

    def minkowski_bound(self) -> float:
        D = abs(self.disc)
        if self.is_imaginary:
            return 2 / math.pi * math.sqrt(D)
        return math.sqrt(D) / 2


@dataclass(frozen=True, eq=False)
class FieldElem:
    """a + b*w with rational a, b."""

    field: FieldConfig
    a: Fraction
    b: Fraction

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElem(self.field, Fraction(other), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t, m = self.field.omega_trace, self.field.omega_norm
        # (a + b w)(c + e w) = ac + (ae + bc) w + be (t w - m)
        a, b, c, e = self.a, self.b, o.a, o.b
        be = b * e
        return FieldElem(self.field, a * c - m * be, a * e + b * c + t * be)

    __rmul__ = __mul__

    def conj(self) -> "FieldElem":
        # conj(w) = t - w
        return FieldElem(self.field, self.a + self.b * self.field.omega_trace, -self.b)

    def norm(self) -> Fraction:
        t, m = self.field.omega_trace, self.field.omega_norm
        return self.a * self.a + t * self.a * self.b + m * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a + self.field.omega_trace * self.b

    def inverse(self) -> "FieldElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero field element")
        c = self.conj()
        return FieldElem(self.field, c.a / n, c.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.field == other.field and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.field.squarefree_d, self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def is_rational(self) -> bool:
        return self.b == 0

    def embeddings(self) -> tuple[complex, complex]:
        w, wc = self.field.omega_embeddings()
        return float(self.a) + float(self.b) * w, float(self.a) + float(self.b) * wc

    def to_complex(self) -> complex:
        return self.embeddings()[0]

    def __repr__(self):
        return f"({self.a} + {self.b}*w)"


# ---------------------------------------------------------------------------
# Ideals


def _hnf2(vectors: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    """HNF (a, b, c) of the Z-span of integer vectors in Z^2 of full rank.

    The lattice is spanned by (a, 0) and (b, c) with a, c > 0 and 0 <= b < a.
    """
    # Reduce on the second coordinate first.
    rows = [list(v) for v in vectors if v[0] or v[1]]
    c = 0
    lead = None  # row with second coordinate = c
    rest: list[list[int]] = []
    for r in rows:
        if lead is None:
            if r[1] == 0:
                rest.append(r)
            else:
                lead = r
            continue
        x, y = lead, r
        while y[1] != 0:
            q = x[1] // y[1]
            x, y = y, [x[0] - q * y[0], x[1] - q * y[1]]
        lead = x
        rest.append(y)
    if lead is None:
        raise ValueError("vectors do not span a rank-2 lattice")
    if lead[1] < 0:
        lead = [-lead[0], -lead[1]]
    c = lead[1]
    a = 0
    for r in rest:
        a = math.gcd(a, r[0])
    if a == 0:
        raise ValueError("vectors do not span a rank-2 lattice")
    return a, lead[0] % a, c


@dataclass(frozen=True)
class Ideal:
    """Fractional ideal (1/denominator) * (a Z + (b + c w) Z) of Z_K.

    ``hermite_basis`` is ((a, b), (0, c)) with a, c > 0, 0 <= b < a; the stored
    denominator is coprime to the content of the basis.
    """

    field: FieldConfig
    hermite_basis: tuple[tuple[int, int], tuple[int, int]]
    denominator: int = 1

    @classmethod
    def from_generators(cls, K: FieldConfig, gens: Sequence[FieldElem]) -> "Ideal":
        """Ideal generated over Z_K by the given elements (not all zero)."""
        elems: list[FieldElem] = []
        for g in gens:
            if g:
                elems.append(g)
                elems.append(g * K.omega)
        return cls.from_z_module(K, elems)

    @classmethod
    def from_z_module(cls, K: FieldConfig, elems: Sequence[FieldElem]) -> "Ideal":
        if not elems:
            raise ValueError("zero ideal")
        den = 1
        for e in elems:
            den = math.lcm(den, e.a.denominator, e.b.denominator)
        vecs = [(int(e.a * den), int(e.b * den)) for e in elems]
        a, b, c = _hnf2(vecs)
        g = math.gcd(math.gcd(a, b), math.gcd(c, den))
        return cls(K, ((a // g, b // g), (0, c // g)), den // g)

    @classmethod
    def unit(cls, K: FieldConfig) -> "Ideal":
        return cls(K, ((1, 0), (0, 1)), 1)

    @classmethod
    def principal(cls, K: FieldConfig, x: FieldElem) -> "Ideal":
        return cls.from_generators(K, [x])

    @property
    def z_basis(self) -> tuple[FieldElem, FieldElem]:
        (a, b), (_, c) = self.hermite_basis
        K = self.field
        den = self.denominator
        return K(Fraction(a, den), 0), K(Fraction(b, den), Fraction(c, den))

    def norm(self) -> Fraction:
        (a, _), (_, c) = self.hermite_basis
        return Fraction(a * c, self.denominator**2)

    def is_integral(self) -> bool:
        return self.denominator == 1

    def __mul__(self, other: "Ideal") -> "Ideal":
        if isinstance(other, FieldElem):
            other = Ideal.principal(self.field, other)
        elems = [x * y for x in self.z_basis for y in other.z_basis]
        return Ideal.from_z_module(self.field, elems)

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal.from_z_module(self.field, list(self.z_basis) + list(other.z_basis))

    def conj(self) -> "Ideal":
        return Ideal.from_z_module(self.field, [x.conj() for x in self.z_basis])

    def inverse(self) -> "Ideal":
        n = self.norm()
        return Ideal.from_z_module(self.field, [x / n for x in self.conj().z_basis])

    def __truediv__(self, other: "Ideal") -> "Ideal":
        return self * other.inverse()

    def contains(self, x: FieldElem) -> bool:
        (a, b), (_, c) = self.hermite_basis
        den = self.denominator
        xa, xb = x.a * den, x.b * den
        if xb.denominator != 1 or xa.denominator != 1:
            return False
        xa, xb = int(xa), int(xb)
        if xb % c:
            return False
        k = xb // c
        return (xa - k * b) % a == 0

    def __contains__(self, x: FieldElem) -> bool:
        return self.contains(x)

    def scale(self, x: FieldElem) -> "Ideal":
        return Ideal.from_z_module(self.field, [y * x for y in self.z_basis])

    def __repr__(self):
        (a, b), (_, c) = self.hermite_basis
        s = f"[{a}, {b}+{c}w]"
        return s if self.denominator == 1 else f"{s}/{self.denominator}"


# ---------------------------------------------------------------------------
# Principality via binary quadratic forms


def _ideal_form(I: Ideal) -> tuple[int, int, int]:
    """The binary quadratic form N(x*alpha + y*beta)/N(I) on the HNF basis."""
    al, be = I.z_basis
    n = I.norm()
    # N(x al + y be) = x^2 N(al) + xy Tr(al conj(be)) + y^2 N(be)
    A = al.norm() / n
    B = (al * be.conj()).trace() / n
    C = be.norm() / n
    assert A.denominator == B.denominator == C.denominator == 1
    return int(A), int(B), int(C)


def _reduce_definite(f: tuple[int, int, int]) -> tuple[int, int, int]:
    a, b, c = f
    if a < 0:
        a, b, c = -a, -b, -c
    while True:
        if c < a:
            a, b, c = c, -b, a
            continue
        # bring b into (-a, a]
        if b > a or b <= -a:
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
            continue
        if a == c and b < 0:
            b = -b
        return a, b, c


def _indefinite_cycle_hits_unit(f: tuple[int, int, int], D: int) -> bool:
    """Whether the indefinite form f represents +1 or -1."""
    sD = math.isqrt(D)

    def is_reduced(a, b, c):
        return 0 < b <= sD and sD - 2 * abs(a) < b and b >= 2 * abs(a) - sD

    def rho(a, b, c):
        # (a, b, c) -> (c, b', a') with b' = -b mod 2c chosen in the reduced window
        cc = abs(c)
        if cc > sD:
            lo = -cc
        else:
            lo = sD - 2 * cc
        # b' ≡ -b mod 2c, lo < b' <= lo + 2|c|
        bp = -b
        k = (lo - bp) // (2 * cc) + 1
        bp = bp + 2 * cc * k
        ap = (bp * bp - D) // (4 * c)
        return c, bp, ap

    a, b, c = f
    seen = set()
    steps = 0
    while not is_reduced(a, b, c):
        a, b, c = rho(a, b, c)
        steps += 1
        if abs(a) == 1:
            return True
        if steps > 10_000:
            raise RuntimeError("indefinite reduction did not terminate")
    start = (a, b, c)
    while True:
        if abs(a) == 1 or abs(c) == 1:
            return True
        seen.add((a, b, c))
        a, b, c = rho(a, b, c)
        if (a, b, c) == start or (a, b, c) in seen:
            return False


def is_principal(I: Ideal) -> bool:
    """Whether I = alpha*Z_K for some alpha in K."""
    K = I.field
    f = _ideal_form(I)
    if K.is_imaginary:
        return _reduce_definite(f)[0] == 1
    return _indefinite_cycle_hits_unit(f, K.disc)


def equivalent(I: Ideal, J: Ideal) -> bool:
    return is_principal(I * J.conj())


def _fundamental_unit(K: FieldConfig) -> FieldElem:
    # Continued fraction of w = (P + sqrt(D'))/Q, convergents p/q, test N(p - q w) = ±1.
    d = K.squarefree_d
    if d % 4 == 1:
        P, Q, Dp = 1, 2, d
    else:
        P, Q, Dp = 0, 1, d
    # make Q | Dp - P^2
    if (Dp - P * P) % Q:
        P, Q, Dp = P * Q, Q * Q, Dp * Q * Q
    s = math.isqrt(Dp)
    p0, p1 = 1, 0
    q0, q1 = 0, 1
    for _ in range(100_000):
        a = (P + s) // Q
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        u = K(p0, 0) - K(q0, 0) * K.omega
        if abs(u.norm()) == 1 and q0 > 0:
            # normalize to > 1 in the first embedding
            cands = [u, -u, u.inverse(), -u.inverse()]
            best = max(cands, key=lambda e: e.embeddings()[0].real)
            return best
        P = a * Q - P
        Q = (Dp - P * P) // Q
    raise RuntimeError("fundamental unit search did not terminate")


# ---------------------------------------------------------------------------
# Integral ideals and the class group


def integral_ideals_upto(K: FieldConfig, bound: int) -> list[Ideal]:
    """All integral ideals of norm <= bound, by brute force over HNFs."""
    out = []
    t, m = K.omega_trace, K.omega_norm
    for c in range(1, bound + 1):
        for a in range(c, bound // c + 1, c):
            for b in range(0, a, c):
                # closure under multiplication by w: w*(b + c w) = -c m + (b + c t) w
                k = b // c + t
                if (-c * m - k * b) % a:
                    continue
                out.append(Ideal(K, ((a, b), (0, c)), 1))
    out.sort(key=lambda I: (I.norm(), I.hermite_basis))
    return out


def prime_ideals_upto(K: FieldConfig, bound: int) -> list[Ideal]:
    """Non-principal-looking candidates: prime ideals of prime norm p <= bound."""
    t, m = K.omega_trace, K.omega_norm
    out = []
    for p in _primes_upto(bound):
        for r in range(p):
            if (r * r - t * r + m) % p == 0:
                out.append(Ideal(K, ((p, (-r) % p), (0, 1)), 1))
    return out


@dataclass
class ClassGroup:
    """Ideal classes with minimal-norm integral representatives."""

    field: FieldConfig
    representatives: list[Ideal]
    table: list[list[int]] = field(repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def h(self) -> int:
        return len(self.representatives)

    def class_of(self, I: Ideal) -> int:
        key = (I.hermite_basis, I.denominator)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self.h == 1:
            idx = 0
        else:
            for idx, R in enumerate(self.representatives):
                if equivalent(I, R):
                    break
            else:
                raise RuntimeError(f"ideal {I} matches no class representative")
        self._cache[key] = idx
        return idx

    def min_norm(self, idx: int) -> int:
        return int(self.representatives[idx].norm())


@lru_cache(maxsize=None)
def class_group(K: FieldConfig, bound: int = DEFAULT_DISC_BOUND) -> ClassGroup:
    """Class group from prime ideals below the Minkowski bound.

    Representatives are the integral ideals of least norm in each class (ties
    broken by HNF), so the principal class comes first as Z_K itself.
    """
    if abs(K.disc) > bound:
        raise FieldTooLarge(f"|disc| = {abs(K.disc)} exceeds the bound {bound}")
    M = int(math.floor(K.minkowski_bound()))
    reps: list[Ideal] = [Ideal.unit(K)]
    gens = prime_ideals_upto(K, M)
    frontier = [Ideal.unit(K)]
    while frontier:
        nxt = []
        for R in frontier:
            for P in gens:
                J = R * P
                if not any(equivalent(J, S) for S in reps):
                    reps.append(J)
                    nxt.append(J)
        frontier = nxt
    # replace representatives by minimal-norm integral ideals of their classes
    best: list[Ideal | None] = [None] * len(reps)
    best[0] = Ideal.unit(K)
    for I in integral_ideals_upto(K, max(M, 1)):
        if all(b is not None for b in best):
            break
        for i, R in enumerate(reps):
            if best[i] is None and equivalent(I, R):
                best[i] = I
                break
    if any(b is None for b in best):
        raise RuntimeError("a class without an ideal below the Minkowski bound")
    reps = [b for b in best]  # type: ignore[misc]
    order = sorted(range(len(reps)), key=lambda i: (i != 0, reps[i].norm(), reps[i].hermite_basis))
    reps = [reps[i] for i in order]
    cg = ClassGroup(K, reps, [])
    cg.table = [[cg.class_of(reps[i] * reps[j]) for j in range(len(reps))] for i in range(len(reps))]
    return cg


def min_norm_in_class(cg: ClassGroup, idx: int) -> int:
    """Least |Z_K / I| over integral ideals I in the class with index idx."""
    M = max(int(math.floor(cg.field.minkowski_bound())), 1)
    best = None
    for I in integral_ideals_upto(cg.field, M):
        if cg.class_of(I) == idx:
            n = int(I.norm())
            best = n if best is None else min(best, n)
    if best is None:
        raise RuntimeError("empty ideal class below the Minkowski bound")
    return best


# ---------------------------------------------------------------------------
# Rank-2 lattices


@dataclass(frozen=True)
class ModuleLattice:
    """L = e1*Z_K + e2*c with (e1, e2) the standard basis of K^2.

    The Z-basis used everywhere is (1,0), (w,0), (0,g1), (0,g2) with (g1, g2)
    the HNF basis of c.
    """

    field: FieldConfig
    coefficient_ideal: Ideal
    steinitz: int = 0

    @property
    def pseudo_basis(self):
        K = self.field
        e1 = (K.one, K.zero)
        e2 = (K.zero, K.one)
        return [(e1, Ideal.unit(K)), (e2, self.coefficient_ideal)]

    @cached_property
    def z_basis(self) -> tuple[tuple[FieldElem, FieldElem], ...]:
        K = self.field
        g1, g2 = self.coefficient_ideal.z_basis
        return ((K.one, K.zero), (K.omega, K.zero), (K.zero, g1), (K.zero, g2))

    def to_vector(self, v: Sequence[int]) -> tuple[FieldElem, FieldElem]:
        x1 = self.field.zero
        x2 = self.field.zero
        for coeff, (b1, b2) in zip(v, self.z_basis):
            if coeff:
                x1 = x1 + b1 * coeff
                x2 = x2 + b2 * coeff
        return x1, x2

    def coords(self, x: Sequence[FieldElem]) -> tuple[Fraction, ...]:
        """Rational coordinates of x in K^2 with respect to the Z-basis of L."""
        x1, x2 = x
        g1, g2 = self.coefficient_ideal.z_basis
        # x2 = s*g1 + u*g2 with g1 rational, g2 = (b + c w)/den
        u = x2.b / g2.b
        s = (x2.a - u * g2.a) / g1.a
        return (x1.a, x1.b, s, u)

    def int_coords(self, x: Sequence[FieldElem]) -> tuple[int, ...]:
        c = self.coords(x)
        if any(v.denominator != 1 for v in c):
            raise ValueError("vector is not in the lattice")
        return tuple(int(v) for v in c)

    @cached_property
    def omega_action(self) -> tuple[tuple[int, ...], ...]:
        """4x4 integer matrix of multiplication by w on the Z-basis (column convention)."""
        K = self.field
        cols = [self.int_coords((b1 * K.omega, b2 * K.omega)) for b1, b2 in self.z_basis]
        return tuple(tuple(cols[j][i] for j in range(4)) for i in range(4))

    def scalar_action(self, u: FieldElem) -> tuple[tuple[int, ...], ...]:
        cols = [self.int_coords((b1 * u, b2 * u)) for b1, b2 in self.z_basis]
        return tuple(tuple(cols[j][i] for j in range(4)) for i in range(4))

    def matrix_to_z(self, g) -> tuple[tuple[int, ...], ...]:
        """4x4 integer matrix of g in K^{2x2} acting on L; raises unless gL is inside L."""
        cols = []
        for b1, b2 in self.z_basis:
            y1 = g[0][0] * b1 + g[0][1] * b2
            y2 = g[1][0] * b1 + g[1][1] * b2
            cols.append(self.int_coords((y1, y2)))
        return tuple(tuple(cols[j][i] for j in range(4)) for i in range(4))

    def z_to_matrix(self, A) -> tuple[tuple[FieldElem, FieldElem], tuple[FieldElem, FieldElem]]:
        """The K-linear map with integer matrix A (inverse of matrix_to_z)."""
        col0 = self.to_vector([A[i][0] for i in range(4)])
        g1 = self.z_basis[2][1]
        img = self.to_vector([A[i][2] for i in range(4)])
        col1 = (img[0] / g1, img[1] / g1)
        return ((col0[0], col1[0]), (col0[1], col1[1]))

    def label(self) -> str:
        return "Z_K^2" if self.steinitz == 0 else f"Z_K + {self.coefficient_ideal!r}"


def steinitz_lattices(K: FieldConfig, bound: int = DEFAULT_DISC_BOUND) -> list[ModuleLattice]:
    """One lattice Z_K + c per Steinitz class; the first is Z_K^2."""
    cg = class_group(K, bound)
    return [ModuleLattice(K, c, i) for i, c in enumerate(cg.representatives)]


def ideal_of_vector(L: ModuleLattice, x: Sequence[FieldElem]) -> Ideal:
    """a_x = x1*Z_K + x2*c^{-1}; integral for x in L."""
    x1, x2 = x
    if not x1 and not x2:
        raise ValueError("ideal of the zero vector")
    K = L.field
    gens = []
    if x1:
        gens.append(x1)
    if x2:
        cinv = L.coefficient_ideal.inverse()
        gens.extend(g * x2 for g in cinv.z_basis)
    return Ideal.from_generators(K, gens)
