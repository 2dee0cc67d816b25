"""Perfect forms, minimal classes and the equivariant cell complex.

Conventions.  A group element g in GL(L) is stored as the 4x4 integer matrix A
of x -> g x on the Z-basis of L.  It acts on forms by F -> g^{-dagger} F g^{-1}
(Gram G -> A^{-T} G A^{-1}) and on rank-one sums by T -> g T g^dagger, so that
S(g.F) = g S(F).  Rays of minimal vectors are keyed by their evaluation
vectors ev(v), which do not see torsion unit multiples.
"""
from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg, polyhedra
from .formspace import Form, FormSpace, MinData, WeightSpec, _z_gram_raw, form_inverse
from .latiso import (
    FormFamily,
    IntMat,
    MatrixGroup,
    automorphism_group,
    fingerprint,
    group_from_elements,
    identity,
    iter_isometries,
    mat_inv_int,
    mat_mul,
)
from .quadfield import ModuleLattice

log = logging.getLogger(__name__)

Vec = tuple[int, ...]
Ray = tuple[int, ...]
Coords = tuple[Fraction, ...]

ID4 = identity(4)


class VoronoiError(RuntimeError):
    pass


def apply(A: IntMat, v: Vec) -> Vec:
    return tuple(sum(A[i][j] * v[j] for j in range(4)) for i in range(4))


# ---------------------------------------------------------------------------
# perfect forms and their Voronoi domains


@dataclass
class PerfectForm:
    coords: Coords
    min_vectors: MinData
    rays: list[Ray]                      # sorted ev keys
    ray_vec: dict[Ray, Vec]              # one lattice vector per ray
    facet_normals: list[tuple[int, ...]] = field(default_factory=list)
    facet_sets: list[frozenset[Ray]] = field(default_factory=list)

    @property
    def voronoi_rays(self) -> list[Ray]:
        return self.rays


def _rays_of(space: FormSpace, vecs: Sequence[Vec]) -> tuple[list[Ray], dict[Ray, Vec]]:
    rv: dict[Ray, Vec] = {}
    for v in sorted(vecs):
        rv.setdefault(space.ev(v), v)
    return sorted(rv), rv


def _perfect(space: FormSpace, coords: Coords, md: MinData | None = None) -> PerfectForm:
    md = md or space.minimum(coords)
    if md.minimum != 1:
        raise VoronoiError("perfect forms are normalized to minimum 1")
    rays, rv = _rays_of(space, md.vectors)
    if linalg.rank(rays) != space.N:
        raise VoronoiError("form is not perfect")
    return PerfectForm(tuple(coords), md, rays, rv)


def voronoi_domain_facets(space: FormSpace, P: PerfectForm):
    if not P.facet_normals:
        if linalg.rank(P.rays) != space.N:
            raise VoronoiError("degenerate ray set")
        fs = polyhedra.facets(P.rays)
        P.facet_normals = [h for h, _ in fs]
        P.facet_sets = [frozenset(P.rays[i] for i in z) for _, z in fs]
        for h, z in zip(P.facet_normals, P.facet_sets):
            for r in P.rays:
                val = sum(a * b for a, b in zip(h, r))
                if (val == 0) != (r in z) or val < 0:
                    raise AssertionError("double description produced a bad facet")
    return list(zip(P.facet_normals, P.facet_sets))


def _line_search(space: FormSpace, P: Coords, H: Sequence, base: frozenset[Ray]) -> tuple[Coords, MinData]:
    """Smallest rho > 0 such that P + rho H has minimum 1 and rays beyond base."""
    H = [Fraction(h) for h in H]
    rho = Fraction(1)
    lo = Fraction(0)
    hi = None
    for _ in range(10000):
        Q = tuple(p + rho * h for p, h in zip(P, H))
        if not space.is_pd(Q):
            hi = rho
            rho = (lo + rho) / 2
            continue
        md = space.minimum(Q)
        if md.minimum == 1:
            rays = {space.ev(v) for v in md.vectors}
            if rays == base:
                lo = rho
                rho = 2 * rho if hi is None else (rho + hi) / 2
                continue
            if not base < rays:
                raise VoronoiError("line search lost minimal vectors")
            return Q, md
        if md.minimum > 1:
            raise VoronoiError("minimum rose above 1 along the search direction")
        # some vectors dropped below 1: jump to where the first of them reaches 1
        best = None
        for v in md.vectors:
            e = space.ev(v)
            w = space.weight_of(v)
            pv = w * sum(a * b for a, b in zip(P, e))
            hv = w * sum(a * b for a, b in zip(H, e))
            if hv >= 0:
                raise VoronoiError("unexpected minimal vector in line search")
            r = (1 - pv) / hv
            if best is None or r < best:
                best = r
        rho = best
    raise VoronoiError("line search did not converge")


def initial_perfect_form(space: FormSpace) -> PerfectForm:
    E = Form.identity(space.K).coords
    m = space.minimum(E).minimum
    P = tuple(x / m for x in E)
    md = space.minimum(P)
    while True:
        rays, _ = _rays_of(space, md.vectors)
        r = linalg.rank(rays)
        if r == space.N:
            return _perfect(space, P, md)
        ns = linalg.nullspace(rays, space.N)
        H = ns[0]
        if space.is_psd(H):
            H = [-x for x in H]
        P, md2 = _line_search(space, P, H, frozenset(rays))
        rays2, _ = _rays_of(space, md2.vectors)
        if linalg.rank(rays2) <= r:
            raise VoronoiError("Voronoi ascent stalled")
        md = md2


def neighbor_across_facet(space: FormSpace, P: PerfectForm, facet) -> PerfectForm:
    h, zset = facet
    Q, md = _line_search(space, P.coords, h, frozenset(zset))
    return _perfect(space, Q, md)


# ---------------------------------------------------------------------------
# the complex


@dataclass
class MinimalClass:
    index: int
    dim: int
    rays: frozenset[Ray]
    vectors: list[Vec]            # one lattice vector per ray, sorted by ray
    t_form: Coords
    stabilizer: MatrixGroup
    chi: dict[IntMat, int]
    orient_basis: list[list[Fraction]]   # N x dim, columns spanning the translation space
    barycenter: Coords
    vertices: list[tuple[int, IntMat]]   # (perfect rep, g) with g.P_rep a vertex
    home: tuple[int, IntMat]             # the face of (perfect rep k) this rep was taken from

    @property
    def corank(self) -> int:
        return self.dim

    def character(self, g) -> int:
        try:
            return self.chi[g]
        except KeyError:
            raise ValueError("element is not in the stabilizer") from None


@dataclass
class BoundaryTerm:
    target: int
    sign: int
    element: IntMat


@dataclass
class CellComplexData:
    space: FormSpace
    group_label: str
    orbits: dict[int, list[MinimalClass]]
    boundaries: dict[int, list[list[BoundaryTerm]]]
    perfect: list[PerfectForm] = field(default_factory=list)
    # central elements quotiented out (acting trivially on forms)
    center: tuple[IntMat, ...] = (ID4,)
    seed: int = 0

    def canon(self, A: IntMat) -> IntMat:
        if len(self.center) == 1:
            return A
        return min(mat_mul(z, A) for z in self.center)

    def mul(self, A: IntMat, B: IntMat) -> IntMat:
        return self.canon(mat_mul(A, B))

    def inv(self, A: IntMat) -> IntMat:
        return self.canon(mat_inv_int(A))

    def cell(self, p: int, idx: int) -> MinimalClass:
        return self.orbits[p][idx]

    @property
    def counts(self) -> list[int]:
        return [len(self.orbits.get(p, [])) for p in range(self.top_dim + 1)]

    @property
    def top_dim(self) -> int:
        return max(self.orbits) if self.orbits else -1

    @property
    def max_stabilizer_order(self) -> int:
        return max(c.stabilizer.order for cs in self.orbits.values() for c in cs)


class ComplexBuilder:
    """Runs the Voronoi traversal for (L, weight) and assembles the GL(L) complex."""

    def __init__(self, space: FormSpace, orientation_seed: int = 0):
        self.S = space
        self.N = space.N
        self.W = space.L.omega_action
        self.seed = orientation_seed
        self._act: dict[IntMat, list[list[Fraction]]] = {}
        self.perfect: list[PerfectForm] = []
        self.stabs: list[MatrixGroup] = []
        # neighbors[k][facet index] = (rep j, g) with neighbor form g.P_j
        self.neighbors: list[list[tuple[int, IntMat]]] = []

    # -- actions
    def act(self, A: IntMat) -> list[list[Fraction]]:
        M = self._act.get(A)
        if M is None:
            M = self.S.act_matrix(A)
            self._act[A] = M
        return M

    def act_ray(self, A: IntMat, r: Ray, ray_vec: dict[Ray, Vec]) -> Ray:
        return self.S.ev(apply(A, ray_vec[r]))

    def act_rayset(self, A: IntMat, rays, ray_vec) -> frozenset[Ray]:
        return frozenset(self.act_ray(A, r, ray_vec) for r in rays)

    def form_family(self, coords: Coords) -> FormFamily:
        G = self.S.gram(coords)
        return FormFamily([G, linalg.matmul(G, self.W)])

    def t_family(self, rays, ray_vec) -> tuple[FormFamily, Coords]:
        T = [Fraction(0)] * self.N
        for r in rays:
            T = [a + b for a, b in zip(T, self.S.dual_coords(r))]
        Tinv = form_inverse(self.S.form(T))
        G = _z_gram_raw(Tinv, self.S.L)
        return FormFamily([G, linalg.matmul(G, self.W)]), tuple(T)

    # -- perfect forms
    def perfect_stabilizer(self, P: PerfectForm) -> MatrixGroup:
        grp = automorphism_group(self.form_family(P.coords))
        for A in grp.generators:
            if self.act_rayset(A, P.rays, P.ray_vec) != frozenset(P.rays):
                raise AssertionError("stabilizer does not permute minimal vectors")
        return grp

    def equivalent_perfect(self, Q: PerfectForm) -> tuple[int, IntMat] | None:
        """(j, g) with Q = g.P_j."""
        famQ = self.form_family(Q.coords)
        fq = fingerprint(famQ)
        for j, P in enumerate(self.perfect):
            famP = self._pfam[j]
            if self._pfp[j] != fq:
                continue
            for A in iter_isometries(famP, famQ):
                # A^T G_P A = G_Q means Q = A^{-1}.P
                return j, mat_inv_int(A)
        return None

    def enumerate_perfect_orbits(self) -> list[PerfectForm]:
        P0 = initial_perfect_form(self.S)
        self.perfect = [P0]
        self._pfam = [self.form_family(P0.coords)]
        self._pfp = [fingerprint(self._pfam[0])]
        k = 0
        while k < len(self.perfect):
            P = self.perfect[k]
            stab = self.perfect_stabilizer(P)
            self.stabs.append(stab)
            facets = voronoi_domain_facets(self.S, P)
            index = {z: i for i, (_, z) in enumerate(facets)}
            nb: list[tuple[int, IntMat] | None] = [None] * len(facets)
            for i, (h, z) in enumerate(facets):
                if nb[i] is not None:
                    continue
                Q = neighbor_across_facet(self.S, P, (h, z))
                hit = self.equivalent_perfect(Q)
                if hit is None:
                    self.perfect.append(Q)
                    self._pfam.append(self.form_family(Q.coords))
                    self._pfp.append(fingerprint(self._pfam[-1]))
                    hit = (len(self.perfect) - 1, ID4)
                j, g = hit
                # transport along the stabilizer orbit of this facet
                for s in stab.elements:
                    zs = self.act_rayset(s, z, P.ray_vec)
                    t = index[zs]
                    if nb[t] is None:
                        nb[t] = (j, mat_mul(s, g))
            self.neighbors.append(nb)  # type: ignore[arg-type]
            k += 1
        return self.perfect

    # -- faces
    def _rank(self, rays) -> int:
        return linalg.rank(list(rays)) if rays else 0

    def build(self) -> CellComplexData:
        if not self.perfect:
            self.enumerate_perfect_orbits()
        S = self.S
        N = self.N
        # faces of every perfect rep, well-rounded only
        self.faces: list[dict[frozenset[Ray], int]] = []  # face -> dim
        for k, P in enumerate(self.perfect):
            fl = polyhedra.face_lattice(
                [frozenset(P.rays.index(r) for r in z) for z in P.facet_sets],
                lambda F, P=P: self._rank([P.rays[i] for i in F]),
            )
            fk = {}
            for rk, faces in fl.items():
                for F in faces:
                    rs = frozenset(P.rays[i] for i in F)
                    if S.contains_k_basis([P.ray_vec[r] for r in rs]):
                        fk[rs] = N - rk
            self.faces.append(fk)
        # orbit classification: face (k, F) -> (dim, rep index, e) with F = e.rep
        self.face_orbit: list[dict[frozenset[Ray], tuple[int, int, IntMat]]] = [dict() for _ in self.perfect]
        orbits: dict[int, list[MinimalClass]] = {}
        fp_index: dict[tuple, list[int]] = {}
        rep_data: dict[int, list] = {}  # dim -> list of (family, rays)
        for k, P in enumerate(self.perfect):
            stab = self.stabs[k]
            for F in sorted(self.faces[k], key=lambda f: (self.faces[k][f], sorted(f))):
                if F in self.face_orbit[k]:
                    continue
                p = self.faces[k][F]
                fam, T = self.t_family(F, P.ray_vec)
                fpr = (p, fingerprint(fam))
                found = None
                for idx in fp_index.get(fpr, []):
                    rfam, rrays, rvec = rep_data[p][idx]
                    for A in iter_isometries(rfam, fam):
                        # T_F = A^{-1}.T_rep on rays, i.e. F = A^{-1} rep as sets
                        g = mat_inv_int(A)
                        if self.act_rayset(g, rrays, rvec) == F:
                            found = (idx, g)
                            break
                    if found:
                        break
                if found is None:
                    idx = len(orbits.setdefault(p, []))
                    cell = self._new_cell(p, idx, k, F, P, fam, T)
                    orbits[p].append(cell)
                    rep_data.setdefault(p, []).append((fam, F, dict(P.ray_vec)))
                    fp_index.setdefault(fpr, []).append(idx)
                    found = (idx, ID4)
                idx, g = found
                for s in stab.elements:
                    Fs = self.act_rayset(s, F, P.ray_vec)
                    if Fs not in self.face_orbit[k]:
                        self.face_orbit[k][Fs] = (p, idx, mat_mul(s, g))
        self.orbits = orbits
        for p in orbits:
            for c in orbits[p]:
                self._finish_cell(c)
        boundaries = {p: [self._boundary(c) for c in orbits[p]] for p in sorted(orbits)}
        cd = CellComplexData(S, "GL", orbits, boundaries, self.perfect)
        check_dd(cd)
        return cd

    def _new_cell(self, p, idx, k, F, P, fam, T) -> MinimalClass:
        stab_all = automorphism_group(fam)
        keep = [A for A in stab_all.elements if self.act_rayset(A, F, P.ray_vec) == F]
        if len(keep) != len(stab_all.elements):
            log.warning("T-form stabilizer larger than the class stabilizer")
        stab = group_from_elements(keep)
        vecs = [P.ray_vec[r] for r in sorted(F)]
        ns = linalg.nullspace([list(r) for r in sorted(F)], self.N)
        B = linalg.transpose(ns) if ns else [[] for _ in range(self.N)]
        if self.seed and p > 0 and random.Random(self.seed * 1000003 + p * 1009 + idx).random() < 0.5:
            # another orientation convention: flip some cells
            for row in B:
                row[0] = -row[0]
        return MinimalClass(idx, p, F, vecs, T, stab, {}, B, (), [], (k, ID4))

    def _coords_in_basis(self, B, vecs) -> list[list[Fraction]]:
        """Columns of vecs written in the column basis B (exact, must be inside)."""
        out = []
        for v in vecs:
            out.append(linalg.solve(B, v))
        return linalg.transpose(out)

    def _sign_in_basis(self, B, vecs) -> int:
        if not vecs:
            return 1
        M = self._coords_in_basis(B, vecs)
        d = linalg.det(M)
        if d == 0:
            raise AssertionError("degenerate orientation frame")
        return 1 if d > 0 else -1

    def _vertices(self, k: int, rays: frozenset[Ray], vec_of: dict[Ray, Vec]) -> list[tuple[int, IntMat]]:
        """All perfect forms g.P_j whose minimal vectors contain the given rays."""
        target_vecs = [vec_of[r] for r in rays]
        start = (k, ID4)
        seen = {}
        queue = deque([start])
        out = []

        def key(j, g):
            P = self.perfect[j]
            return self.act_rayset(g, P.rays, P.ray_vec)

        seen[key(*start)] = True
        while queue:
            j, g = queue.popleft()
            out.append((j, g))
            P = self.perfect[j]
            gi = mat_inv_int(g)
            pulled = frozenset(self.S.ev(apply(gi, v)) for v in target_vecs)
            for t, z in enumerate(P.facet_sets):
                if pulled <= z:
                    j2, h = self.neighbors[j][t]
                    g2 = mat_mul(g, h)
                    kk = key(j2, g2)
                    if kk not in seen:
                        seen[kk] = True
                        queue.append((j2, g2))
        return out

    def vertex_coords(self, j: int, g: IntMat) -> list[Fraction]:
        return linalg.matvec(self.act(g), self.perfect[j].coords)

    def _finish_cell(self, c: MinimalClass):
        k, _ = c.home
        P = self.perfect[k]
        c.vertices = self._vertices(k, c.rays, P.ray_vec)
        acc = [Fraction(0)] * self.N
        for j, g in c.vertices:
            acc = [a + b for a, b in zip(acc, self.vertex_coords(j, g))]
        c.barycenter = tuple(a / len(c.vertices) for a in acc)
        md = self.S.minimum(c.barycenter)
        if md.minimum != 1 or frozenset(self.S.ev(v) for v in md.vectors) != c.rays:
            raise AssertionError("barycenter does not recover the minimal class")
        for s in c.stabilizer.elements:
            c.chi[s] = self.orientation_character(s, c)

    def orientation_character(self, s: IntMat, c: MinimalClass) -> int:
        if c.dim == 0:
            return 1
        M = self.act(s)
        imgs = linalg.transpose(linalg.matmul(M, c.orient_basis))
        return self._sign_in_basis(c.orient_basis, imgs)

    def _boundary(self, c: MinimalClass) -> list[BoundaryTerm]:
        if c.dim == 0:
            return []
        terms = []
        seen = set()
        k0, _ = c.home
        vec_of = self.perfect[k0].ray_vec
        cvecs = [vec_of[r] for r in c.rays]
        for j, g in c.vertices:
            P = self.perfect[j]
            gi = mat_inv_int(g)
            pulled = frozenset(self.S.ev(apply(gi, v)) for v in cvecs)
            for F, p in self.faces[j].items():
                if p != c.dim - 1 or not pulled < F:
                    continue
                actual = self.act_rayset(g, F, P.ray_vec)
                if actual in seen:
                    continue
                seen.add(actual)
                dim, idx, e = self.face_orbit[j][F]
                gamma = mat_mul(g, e)
                r = self.orbits[dim][idx]
                b_face = linalg.matvec(self.act(gamma), r.barycenter)
                u = [a - b for a, b in zip(c.barycenter, b_face)]
                frame = [u]
                if r.dim:
                    frame += linalg.transpose(linalg.matmul(self.act(gamma), r.orient_basis))
                sign = self._sign_in_basis(c.orient_basis, frame)
                terms.append(BoundaryTerm(idx, sign, gamma))
        terms.sort(key=lambda t: (t.target, t.element))
        return terms


# ---------------------------------------------------------------------------
# checks


def coset_key(cd: CellComplexData, p: int, idx: int, g: IntMat):
    """Canonical key of the coset g.Stab(c) for c = orbits[p][idx]: the image g S(c)."""
    c = cd.orbits[p][idx]
    return frozenset(cd.space.ev(apply(g, v)) for v in c.vectors)


def check_dd(cd: CellComplexData):
    """Exact check of d o d = 0 in the twisted induced modules."""
    for p in sorted(cd.orbits):
        if p < 2:
            continue
        for idx, terms in enumerate(cd.boundaries[p]):
            acc: dict = {}
            reps: dict = {}
            for t1 in terms:
                for t2 in cd.boundaries[p - 1][t1.target]:
                    g = cd.mul(t1.element, t2.element)
                    key = (t2.target, coset_key(cd, p - 2, t2.target, g))
                    if key not in reps:
                        reps[key] = g
                    s = cd.mul(cd.inv(reps[key]), g)
                    chi = cd.orbits[p - 2][t2.target].character(s)
                    acc[key] = acc.get(key, 0) + t1.sign * t2.sign * chi
            if any(acc.values()):
                raise VoronoiError(f"d o d != 0 on cell {idx} of dimension {p}")


def check_cells(cd: CellComplexData):
    """Stabilizers permute S(c), fix T_C and are closed; characters multiply."""
    S = cd.space
    for p, cells in cd.orbits.items():
        for c in cells:
            rays = frozenset(S.ev(v) for v in c.vectors)
            if rays != c.rays:
                raise AssertionError("cell vectors and rays disagree")
            els = set(c.stabilizer.elements)
            for s in c.stabilizer.elements:
                if frozenset(S.ev(apply(s, v)) for v in c.vectors) != c.rays:
                    raise AssertionError("stabilizer element moves the cell")
            for a in c.stabilizer.generators:
                for b in c.stabilizer.elements:
                    ab = cd.mul(a, b)
                    if ab not in els:
                        raise AssertionError("stabilizer is not closed")
                    if c.chi[ab] != c.chi[a] * c.chi[b]:
                        raise AssertionError("orientation character is not multiplicative")


def build_complex(L: ModuleLattice, weight: WeightSpec | None = None, orientation_seed: int = 0) -> CellComplexData:
    space = FormSpace(L, weight)
    cd = ComplexBuilder(space, orientation_seed).build()
    cd.seed = orientation_seed
    return cd


# ---------------------------------------------------------------------------
# subgroups and quotients


def _transport_cell(cd: CellComplexData, c: MinimalClass, r: IntMat, stab: list[IntMat],
                    chi: dict, index: int) -> MinimalClass:
    S = cd.space
    M = S.act_matrix(r)
    vecs = sorted((apply(r, v) for v in c.vectors), key=S.ev)
    rays = frozenset(S.ev(v) for v in vecs)
    T = [Fraction(0)] * S.N
    for e in rays:
        T = [a + b for a, b in zip(T, S.dual_coords(e))]
    B = linalg.matmul(M, c.orient_basis) if c.dim else [[] for _ in range(S.N)]
    bary = tuple(linalg.matvec(M, c.barycenter))
    grp = MatrixGroup(_small_gens(cd, stab), len(stab), sorted(stab))
    return MinimalClass(index, c.dim, rays, vecs, tuple(T), grp, chi, B, bary,
                        [(j, mat_mul(r, g)) for j, g in c.vertices], c.home)


def _small_gens(cd: CellComplexData, elems: list[IntMat]) -> list[IntMat]:
    """Greedy generating set of a finite group given by canonical elements."""
    one = cd.canon(ID4)
    span = {one}
    gens: list[IntMat] = []
    for g in sorted(elems):
        if g in span:
            continue
        gens.append(g)
        frontier = list(span)
        span = set(span)
        while frontier:
            nxt = []
            for x in frontier:
                for h in gens:
                    y = cd.mul(x, h)
                    if y not in span:
                        span.add(y)
                        nxt.append(y)
            frontier = nxt
        if len(span) == len(elems):
            break
    return gens


def restrict_to_subgroup(cd: CellComplexData, predicate: Callable[[IntMat], bool],
                         transversal: Sequence[IntMat], label: str) -> CellComplexData:
    """The same complex viewed as a complex for the finite index normal subgroup
    {g : predicate(g)}.  ``transversal`` lists coset representatives."""
    index = len(transversal)
    reps: dict[int, list[list[IntMat]]] = {}
    new_orbits: dict[int, list[MinimalClass]] = {}
    where: dict[tuple[int, int, int], int] = {}
    for p in sorted(cd.orbits):
        new_orbits[p] = []
        reps[p] = []
        for idx, c in enumerate(cd.orbits[p]):
            sinv = [(s, cd.inv(s)) for s in c.stabilizer.elements]
            rs: list[IntMat] = []
            for t in transversal:
                if not any(predicate(cd.mul(cd.mul(t, si), cd.inv(r))) for r in rs for _, si in sinv):
                    rs.append(t)
            reps[p].append(rs)
            total = 0
            for k, r in enumerate(rs):
                rinv = cd.inv(r)
                stab = []
                chi = {}
                for s, _ in sinv:
                    conj = cd.mul(cd.mul(r, s), rinv)
                    if predicate(conj):
                        stab.append(conj)
                        chi[conj] = c.chi[s]
                total += c.stabilizer.order // len(stab)
                where[(p, idx, k)] = len(new_orbits[p])
                new_orbits[p].append(_transport_cell(cd, c, r, stab, chi, len(new_orbits[p])))
            if total != index:
                raise VoronoiError("orbit splitting does not match the subgroup index")
    boundaries: dict[int, list[list[BoundaryTerm]]] = {}
    for p in sorted(cd.orbits):
        boundaries[p] = []
        for idx, c in enumerate(cd.orbits[p]):
            for k, r in enumerate(reps[p][idx]):
                terms = []
                for t in cd.boundaries[p][idx]:
                    g = cd.mul(r, t.element)
                    tc = cd.orbits[p - 1][t.target]
                    hit = None
                    for k2, r2 in enumerate(reps[p - 1][t.target]):
                        r2inv = cd.inv(r2)
                        for s in tc.stabilizer.elements:
                            gp = cd.mul(cd.mul(g, cd.inv(s)), r2inv)
                            if predicate(gp):
                                hit = (k2, s, gp)
                                break
                        if hit:
                            break
                    if hit is None:
                        raise VoronoiError("boundary cell not covered by the subgroup orbits")
                    k2, s, gp = hit
                    terms.append(BoundaryTerm(where[(p - 1, t.target, k2)], t.sign * tc.chi[s], gp))
                terms.sort(key=lambda t: (t.target, t.element))
                boundaries[p].append(terms)
    out = CellComplexData(cd.space, label, new_orbits, boundaries, cd.perfect, cd.center, cd.seed)
    check_cells(out)
    check_dd(out)
    return out


def quotient_trivial_action(cd: CellComplexData, subgroup: Sequence[IntMat], label: str) -> CellComplexData:
    """Quotient by a central subgroup acting trivially on forms (torsion scalars)."""
    S = cd.space
    idN = [[Fraction(int(i == j)) for j in range(S.N)] for i in range(S.N)]
    for z in subgroup:
        if S.act_matrix(z) != idN:
            raise VoronoiError("subgroup does not act trivially")
    center = set(cd.center)
    for z in subgroup:
        for c in list(center):
            center.add(mat_mul(z, c))
    # close up
    changed = True
    while changed:
        changed = False
        for a in list(center):
            for b in list(center):
                ab = mat_mul(a, b)
                if ab not in center:
                    center.add(ab)
                    changed = True
    center_t = tuple(sorted(center))
    out = CellComplexData(cd.space, label, {}, {}, cd.perfect, center_t, cd.seed)
    for p in sorted(cd.orbits):
        out.orbits[p] = []
        for c in cd.orbits[p]:
            chi = {}
            for s in c.stabilizer.elements:
                k = out.canon(s)
                if k in chi and chi[k] != c.chi[s]:
                    raise VoronoiError("orientation character is not trivial on the center")
                chi[k] = c.chi[s]
            for z in center_t:
                if out.canon(z) not in chi:
                    raise VoronoiError("central element missing from a stabilizer")
            stab = sorted(chi)
            grp = MatrixGroup(_small_gens(out, stab), len(stab), stab)
            out.orbits[p].append(MinimalClass(c.index, c.dim, c.rays, c.vectors, c.t_form, grp, chi,
                                              c.orient_basis, c.barycenter, c.vertices, c.home))
        out.boundaries[p] = [
            sorted((BoundaryTerm(t.target, t.sign, out.canon(t.element)) for t in terms),
                   key=lambda t: (t.target, t.element))
            for terms in cd.boundaries[p]
        ]
    check_cells(out)
    check_dd(out)
    return out


def torsion_scalars(L: ModuleLattice) -> list[IntMat]:
    return [tuple(map(tuple, L.scalar_action(u))) for u in L.field.torsion_units]


def det_transversal(L: ModuleLattice) -> list[IntMat]:
    """diag(u, 1) for the torsion units u: coset representatives of SL in GL."""
    K = L.field
    out = []
    for u in K.torsion_units:
        g = ((u, K.zero), (K.zero, K.one))
        out.append(L.matrix_to_z(g))
    return out


def det_of(L: ModuleLattice, A: IntMat):
    g = L.z_to_matrix(A)
    return g[0][0] * g[1][1] - g[0][1] * g[1][0]


def complex_for_group(L: ModuleLattice, group: str, weight: WeightSpec | None = None,
                      orientation_seed: int = 0, base: CellComplexData | None = None) -> CellComplexData:
    """GL, SL, PGL or PSL complex for the lattice L."""
    cd = base or build_complex(L, weight, orientation_seed)
    if group == "GL":
        return cd
    if group == "PGL":
        return quotient_trivial_action(cd, torsion_scalars(L), "PGL")
    if group not in ("SL", "PSL"):
        raise ValueError(f"unknown group {group!r}")
    if not L.field.is_imaginary:
        raise ValueError("SL has infinite index in GL over a real quadratic field")
    one = L.field.one
    sl = restrict_to_subgroup(cd, lambda A: det_of(L, A) == one, det_transversal(L), "SL")
    if group == "SL":
        return sl
    minus = tuple(tuple(-int(i == j) for j in range(4)) for i in range(4))
    return quotient_trivial_action(sl, [minus], "PSL")
