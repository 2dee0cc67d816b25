import random

from oracles import signed_permutations
from wellround.latiso import (
    FormFamily,
    automorphism_group,
    find_isometry,
    fingerprint,
    identity,
    iter_isometries,
    mat_inv_int,
    mat_mul,
    preserves,
)


def diag(*xs):
    return [[xs[i] if i == j else 0 for j in range(len(xs))] for i in range(len(xs))]


def transpose(A):
    return [list(r) for r in zip(*A)]


def conj(G, A):
    return [[sum(A[k][i] * G[k][l] * A[l][j] for k in range(4) for l in range(4)) for j in range(4)] for i in range(4)]


def random_unimodular(rng, steps=6):
    A = [list(r) for r in identity(4)]
    for _ in range(steps):
        i, j = rng.sample(range(4), 2)
        f = rng.choice([-1, 1])
        for r in A:
            r[i] += f * r[j]
    return tuple(tuple(r) for r in A)


def test_scaled_identity_automorphisms():
    fam = FormFamily([diag(2, 2, 2, 2)])
    grp = automorphism_group(fam)
    assert grp.order == 384
    assert set(grp.elements) == set(signed_permutations(4))
    assert tuple(tuple(-int(i == j) for j in range(4)) for i in range(4)) in grp


def test_second_member_filters():
    fam = FormFamily([diag(2, 2, 2, 2), diag(1, 1, 2, 2)])
    grp = automorphism_group(fam)
    expected = [P for P in signed_permutations(4) if preserves(P, fam)]
    assert grp.order == len(expected) == 64
    assert set(grp.elements) == set(expected)


def test_generators_generate():
    grp = automorphism_group(FormFamily([[[2, 1, 0, 0], [1, 2, 0, 0], [0, 0, 2, 1], [0, 0, 1, 2]]]))
    from wellround.latiso import closure

    assert len(closure(grp.generators)) == grp.order
    for g in grp.elements:
        assert mat_mul(g, mat_inv_int(g)) == identity(4)


def test_random_isometry_found():
    rng = random.Random(3)
    G = [[4, 1, 0, 1], [1, 3, 1, 0], [0, 1, 5, 2], [1, 0, 2, 6]]
    M = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 2], [0, 0, -2, 0]]
    fam1 = FormFamily([G, M])
    for _ in range(5):
        U = random_unimodular(rng)
        fam2 = fam1.transform(U)
        A = find_isometry(fam1, fam2)
        assert A is not None
        assert preserves(A, fam1, fam2)
        assert fingerprint(fam1) == fingerprint(fam2)
        # every isometry is A composed with an automorphism of fam1
        n_iso = sum(1 for _ in iter_isometries(fam1, fam2))
        assert n_iso == automorphism_group(fam1).order


def test_signed_permutation_isometry():
    rng = random.Random(7)
    G = diag(1, 2, 3, 4)
    G[0][1] = G[1][0] = 1
    fam = FormFamily([G])
    perms = list(signed_permutations(4))
    P = rng.choice(perms)
    fam2 = fam.transform(P)
    A = find_isometry(fam, fam2)
    assert A is not None and preserves(A, fam, fam2)


def test_non_isometric():
    assert find_isometry(FormFamily([diag(2, 2, 2, 2)]), FormFamily([diag(2, 2, 2, 4)])) is None
    # same determinant and minimum, different families
    G = diag(2, 2, 2, 2)
    fam1 = FormFamily([G, diag(1, 1, 1, 1)])
    fam2 = FormFamily([G, diag(1, 1, 1, 2)])
    assert find_isometry(fam1, fam2) is None


def test_isometry_relation_symmetric():
    rng = random.Random(11)
    G = [[3, 1, 1, 0], [1, 3, 0, 1], [1, 0, 3, 1], [0, 1, 1, 3]]
    fam1 = FormFamily([G])
    fam2 = fam1.transform(random_unimodular(rng))
    A = find_isometry(fam1, fam2)
    B = find_isometry(fam2, fam1)
    assert A is not None and B is not None
    assert preserves(mat_inv_int(A), fam2, fam1)
