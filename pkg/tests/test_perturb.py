import itertools
import random

import pytest

from complexes import gl_complex, group_complex, lattice
from wellround.formspace import FormSpace
from wellround.latiso import MatrixGroup, identity
from wellround.perturb import (
    GroupRingElement,
    RowSolver,
    StabResolution,
    finite_group_resolution,
    wall_assemble,
)
from wellround.snfhomology import HomologyGroup, integral_homology
from wellround.voronoi import BoundaryTerm, CellComplexData, MinimalClass

ID4 = identity(4)
MINUS = tuple(tuple(-int(i == j) for j in range(4)) for i in range(4))


def xor_group(n_bits):
    return list(range(2**n_bits)), (lambda a, b: a ^ b)


def perm_group(n):
    els = list(itertools.permutations(range(n)))
    return els, (lambda a, b: tuple(a[b[i]] for i in range(n)))


def test_trivial_group():
    R = StabResolution([0], [], {0: 1}, lambda a, b: 0, 0, 3)
    assert R.ranks == [1, 0, 0, 0]
    assert R.certify()


def test_cyclic_of_order_two():
    els, mul = xor_group(1)
    R = StabResolution(els, [1], {0: 1, 1: 1}, mul, 0, 4)
    assert R.ranks == [1, 1, 1, 1, 1]
    assert R.diffs[1] == [[{1: 1, 0: -1}]]
    assert R.diffs[2] == [[{0: 1, 1: 1}]]
    assert R.certify()
    # sign character swaps the roles
    Rm = StabResolution(els, [1], {0: 1, 1: -1}, mul, 0, 3)
    assert Rm.diffs[1] == [[{1: 1, 0: 1}]]
    assert Rm.certify()


@pytest.mark.parametrize("which", ["klein", "s3", "c2^3"])
def test_non_cyclic_resolutions_are_exact(which):
    if which == "klein":
        els, mul = xor_group(2)
        gens, one = [1, 2], 0
    elif which == "c2^3":
        els, mul = xor_group(3)
        gens, one = [1, 2, 4], 0
    else:
        els, mul = perm_group(3)
        gens, one = [(1, 0, 2), (1, 2, 0)], (0, 1, 2)
    chi = {g: 1 for g in els}
    R = StabResolution(els, gens, chi, mul, one, 4)
    assert R.certify()
    assert R.ranks[0] == 1


def test_twisted_non_cyclic():
    els, mul = perm_group(3)
    sign = {}
    for p in els:
        inv = sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j])
        sign[p] = -1 if inv % 2 else 1
    R = StabResolution(els, [(1, 0, 2), (1, 2, 0)], sign, mul, (0, 1, 2), 3)
    assert R.certify()


def test_row_solver():
    D = [[2, 0, 1], [0, 3, 1], [1, 1, 1]]
    S = RowSolver(D)
    rng = random.Random(0)
    for _ in range(20):
        x = [rng.randint(-5, 5) for _ in range(3)]
        y = [sum(x[i] * D[i][j] for i in range(3)) for j in range(3)]
        x2 = S.solve(y)
        assert [sum(x2[i] * D[i][j] for i in range(3)) for j in range(3)] == y
    with pytest.raises(ArithmeticError):
        RowSolver([[2, 0], [0, 2]]).solve([1, 0])


def test_group_ring_element():
    els, mul = xor_group(1)
    a = GroupRingElement({0: 1, 1: -1}, mul)
    b = GroupRingElement({0: 1, 1: 1}, mul)
    assert (a * b).terms == {}
    assert (b * b).terms == {0: 2, 1: 2}
    assert b.augmentation() == 2 and a.augmentation() == 0


@pytest.mark.parametrize("d,idx,group", [(-1, 0, "GL"), (-3, 0, "GL"), (-5, 1, "GL"), (-5, 0, "PSL"), (2, 0, "GL")])
def test_stabilizer_resolutions_lift(d, idx, group):
    cd = group_complex(d, group, idx)
    rng = random.Random(d)
    for p, cells in cd.orbits.items():
        for i in range(len(cells)):
            R = finite_group_resolution(cd, p, i, 3)
            assert R.certify()
            for q in range(0, 2):
                n_src = R.ranks[q + 1] * R.n
                x = [rng.randint(-2, 2) for _ in range(n_src)]
                y = R.d0(q + 1, x)
                x2 = R.lift(q, y)
                assert R.d0(q + 1, x2) == y


@pytest.mark.parametrize("d,group", [(-1, "GL"), (-5, "PSL")])
def test_induce_and_decompose(d, group):
    cd = group_complex(d, group)
    PR = wall_assemble(cd, 2)
    rng = random.Random(1)
    for p, cells in cd.orbits.items():
        for idx, c in enumerate(cells):
            # translates of a boundary element, times stabilizer elements
            g0 = cd.boundaries[p + 1][0][0].element if p + 1 in cd.boundaries and cd.boundaries[p + 1] else ID4
            for _ in range(5):
                s0 = rng.choice(c.stabilizer.elements)
                g = cd.mul(g0, s0)
                t, s = PR.induce_and_decompose(g, p, idx)
                assert cd.mul(t, s) == cd.canon(g)
                assert s in c.stabilizer
                t2, _ = PR.induce_and_decompose(g0, p, idx)
                assert t2 == t


def _space():
    return FormSpace(lattice(-1))


def _cell(index, dim, vectors, stab_elems, space):
    rays = frozenset(space.ev(v) for v in vectors)
    grp = MatrixGroup([g for g in stab_elems if g != ID4], len(stab_elems), sorted(stab_elems))
    return MinimalClass(index, dim, rays, sorted(vectors, key=space.ev), (), grp,
                        {g: 1 for g in stab_elems}, [], (), [], (0, ID4))


def test_point_with_central_involution():
    S = _space()
    cell = _cell(0, 0, [(1, 0, 0, 0)], [ID4, MINUS], S)
    cd = CellComplexData(S, "test", {0: [cell]}, {0: [[]]})
    R = wall_assemble(cd, 5)
    got = [integral_homology(R, n) for n in range(5)]
    assert got == [HomologyGroup((), 1), HomologyGroup((2,), 0), HomologyGroup(), HomologyGroup((2,), 0), HomologyGroup()]


def test_free_z_action_on_a_line():
    S = _space()
    g = ((1, 1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    v = _cell(0, 0, [(0, 1, 0, 0)], [ID4], S)
    e = _cell(0, 1, [(0, 1, 0, 0), (1, 1, 0, 0)], [ID4], S)
    bd = {0: [[]], 1: [[BoundaryTerm(0, 1, g), BoundaryTerm(0, -1, ID4)]]}
    cd = CellComplexData(S, "test", {0: [v], 1: [e]}, bd)
    R = wall_assemble(cd, 3)
    assert R.max_k == 1
    assert [integral_homology(R, n) for n in range(3)] == [HomologyGroup((), 1), HomologyGroup((), 1), HomologyGroup()]


@pytest.mark.parametrize("d,idx", [(-1, 0), (-2, 0), (-5, 0), (-6, 1)])
def test_h0_is_z(d, idx):
    R = wall_assemble(gl_complex(d, idx), 2)
    assert integral_homology(R, 0) == HomologyGroup((), 1)


def test_resolution_differentials_square_to_zero():
    cd = gl_complex(-7)
    R = wall_assemble(cd, 4, check=False)
    R.check_dd()
    assert R.max_k >= 1
    assert set(R.ranks()) == {(p, q) for p in cd.orbits for q in range(5)}
