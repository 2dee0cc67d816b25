from fractions import Fraction

import pytest

from complexes import gl_complex, group_complex, lattice
from wellround import linalg
from wellround.formspace import act_on_ray
from wellround.latiso import identity, mat_mul
from wellround.voronoi import (
    _perfect,
    ComplexBuilder,
    VoronoiError,
    apply,
    check_cells,
    check_dd,
    coset_key,
    det_of,
    initial_perfect_form,
    neighbor_across_facet,
    quotient_trivial_action,
    restrict_to_subgroup,
    torsion_scalars,
    voronoi_domain_facets,
)

ID4 = identity(4)
FAST = [(-1, 0), (-3, 0), (-2, 0), (-7, 0), (-5, 0), (-5, 1), (-6, 1), (2, 0), (5, 0)]


@pytest.mark.parametrize("d,idx", FAST)
def test_complex_is_consistent(d, idx):
    cd = gl_complex(d, idx)
    check_cells(cd)
    check_dd(cd)
    # top cells are the perfect forms
    assert cd.counts[0] == len(cd.perfect)
    assert cd.top_dim == cd.space.N - 2


@pytest.mark.parametrize("d,idx", FAST)
def test_perfect_forms_are_perfect(d, idx):
    cd = gl_complex(d, idx)
    S = cd.space
    for P in cd.perfect:
        md = S.minimum(P.coords)
        assert md.minimum == 1
        assert linalg.rank([list(r) for r in P.rays]) == S.N
        # the minimal vectors pin the form down
        assert all(sum(f * e for f, e in zip(P.coords, r)) == 1 for r in P.rays)


@pytest.mark.parametrize("d", [-1, -7, 2])
def test_neighbor_is_adjacent(d):
    cd = gl_complex(d)
    S = cd.space
    P = initial_perfect_form(S)
    for facet in voronoi_domain_facets(S, P)[:4]:
        h, zset = facet
        Q = neighbor_across_facet(S, P, facet)
        shared = set(P.rays) & set(Q.rays)
        assert set(zset) <= shared
        assert Q.coords != P.coords
        # Q - P is orthogonal to the rays of the shared facet
        diff = [a - b for a, b in zip(Q.coords, P.coords)]
        assert all(sum(x * y for x, y in zip(diff, r)) == 0 for r in zset)


@pytest.mark.parametrize("d,idx", FAST)
def test_stabilizers_fix_t_form(d, idx):
    cd = gl_complex(d, idx)
    L = lattice(d, idx)
    S = cd.space
    for cells in cd.orbits.values():
        for c in cells:
            T = S.form(c.t_form)
            for s in c.stabilizer.generators:
                assert act_on_ray(L.z_to_matrix(s), T) == T


@pytest.mark.parametrize("d,idx", FAST)
def test_orientation_characters(d, idx):
    cd = gl_complex(d, idx)
    for cells in cd.orbits.values():
        for c in cells:
            assert c.character(ID4) == 1
            assert set(c.chi.values()) <= {1, -1}
            for a in c.stabilizer.elements:
                for b in c.stabilizer.generators:
                    assert c.character(mat_mul(a, b)) == c.character(a) * c.character(b)


@pytest.mark.parametrize("d,idx", FAST)
def test_barycenters_recover_cells(d, idx):
    cd = gl_complex(d, idx)
    S = cd.space
    for cells in cd.orbits.values():
        for c in cells:
            md = S.minimum(c.barycenter)
            assert md.minimum == 1
            assert frozenset(S.ev(v) for v in md.vectors) == c.rays
            # the barycenter is fixed by the stabilizer
            for s in c.stabilizer.generators:
                assert tuple(linalg.matvec(S.act_matrix(s), c.barycenter)) == tuple(c.barycenter)


@pytest.mark.parametrize("d,idx", FAST)
def test_face_relation(d, idx):
    cd = gl_complex(d, idx)
    S = cd.space
    for p in sorted(cd.orbits):
        if p == 0:
            continue
        for idx2, terms in enumerate(cd.boundaries[p]):
            c = cd.cell(p, idx2)
            assert terms, "positive dimensional cells have faces"
            for t in terms:
                face = cd.cell(p - 1, t.target)
                img = frozenset(S.ev(apply(t.element, v)) for v in face.vectors)
                # faces of the cone carry more minimal vectors
                assert c.rays < img


@pytest.mark.parametrize("d,idx", FAST)
def test_torsion_scalars_in_stabilizers(d, idx):
    cd = gl_complex(d, idx)
    scal = torsion_scalars(lattice(d, idx))
    for cells in cd.orbits.values():
        for c in cells:
            for z in scal:
                assert z in c.stabilizer


def test_gaussian_sl_index():
    L = lattice(-1)
    gl = gl_complex(-1)
    sl = group_complex(-1, "SL")
    # sum over cells of 1/|Stab| scales by the index [GL : SL] = 4
    for p in gl.orbits:
        a = sum(Fraction(1, c.stabilizer.order) for c in gl.orbits[p])
        b = sum(Fraction(1, c.stabilizer.order) for c in sl.orbits[p])
        assert b == 4 * a
    for cells in sl.orbits.values():
        for c in cells:
            for s in c.stabilizer.elements:
                assert det_of(L, s) == L.field.one


@pytest.mark.parametrize("d,group", [(-1, "PSL"), (-1, "PGL"), (-3, "PSL"), (-5, "PSL"), (-5, "PGL"), (2, "PGL")])
def test_group_variants_consistent(d, group):
    cd = group_complex(d, group)
    check_cells(cd)
    check_dd(cd)
    base = gl_complex(d)
    for p in cd.orbits:
        for c in cd.orbits[p]:
            # PSL and PGL stabilizers are quotients of subgroups of GL stabilizers
            assert any(b.stabilizer.order % c.stabilizer.order == 0 for b in base.orbits[p])


def test_restrict_to_whole_group_is_identity():
    cd = gl_complex(-7)
    same = restrict_to_subgroup(cd, lambda A: True, [ID4], "GL")
    assert same.counts == cd.counts
    for p in cd.orbits:
        for a, b in zip(cd.orbits[p], same.orbits[p]):
            assert a.stabilizer.order == b.stabilizer.order
            assert a.rays == b.rays


def test_quotient_idempotent():
    L = lattice(-1)
    q1 = group_complex(-1, "PGL")
    q2 = quotient_trivial_action(q1, torsion_scalars(L), "PGL")
    assert q2.counts == q1.counts
    assert [c.stabilizer.order for cs in q2.orbits.values() for c in cs] == \
        [c.stabilizer.order for cs in q1.orbits.values() for c in cs]


def test_quotient_rejects_nontrivial_action():
    cd = gl_complex(-1)
    A = tuple(tuple(r) for r in [[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]])
    with pytest.raises(VoronoiError):
        quotient_trivial_action(cd, [A], "bad")


def test_coset_key_invariant_under_stabilizer():
    cd = gl_complex(-2)
    for p, cells in cd.orbits.items():
        for idx, c in enumerate(cells):
            k0 = coset_key(cd, p, idx, ID4)
            for s in c.stabilizer.elements:
                assert coset_key(cd, p, idx, s) == k0


def test_equivalent_perfect_finds_translates():
    cd = gl_complex(-5)
    B = ComplexBuilder(cd.space)
    B.enumerate_perfect_orbits()
    g = cd.space.L.matrix_to_z(((cd.space.K.one, cd.space.K.one), (cd.space.K.zero, cd.space.K.one)))
    for k, P in enumerate(cd.perfect):
        Q = _perfect(cd.space, tuple(linalg.matvec(cd.space.act_matrix(g), P.coords)))
        hit = B.equivalent_perfect(Q)
        assert hit is not None and hit[0] == k
        j, h = hit
        # h maps the representative onto Q
        img = tuple(linalg.matvec(cd.space.act_matrix(h), cd.perfect[j].coords))
        assert img == Q.coords
