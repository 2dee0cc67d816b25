import random
from fractions import Fraction

import pytest

from oracles import brute_force_minimum, random_pd_form
from wellround.formspace import (
    Form,
    FormSpace,
    NotPositiveDefinite,
    WeightSpec,
    act_on_form,
    act_on_ray,
    eval_form,
    form_inverse,
    is_positive_definite,
    rank_one,
    short_vectors,
    sigma_basis,
    sigma_dim,
    trace_pairing,
    z_gram,
)
from wellround.quadfield import FieldConfig, steinitz_lattices

SMALL_FIELDS = [-1, -2, -3, -5, -6, -7, -10, -11, -13, -14, -15, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15]


def test_identity_form_values():
    K = FieldConfig(-1)
    E = Form.identity(K)
    assert trace_pairing(E, E) == 4
    assert eval_form(E, (K.one, K.zero)) == 2
    assert eval_form(E, (K.one, K.one)) == 4
    L = steinitz_lattices(K)[0]
    assert z_gram(E, L) == [[2 * int(i == j) for j in range(4)] for i in range(4)]


def test_half_identity_minimum_gaussian():
    K = FieldConfig(-1)
    S = FormSpace(steinitz_lattices(K)[0])
    md = S.minimum(Form.identity(K).scale(Fraction(1, 2)).coords)
    assert md.minimum == 1
    assert len(md.vectors) == 8


@pytest.mark.parametrize("d", [-1, -5, 2, 5])
def test_sigma_dimension_and_basis(d):
    K = FieldConfig(d)
    B = sigma_basis(K)
    assert len(B) == sigma_dim(K) == (4 if d < 0 else 6)
    P = [[trace_pairing(a, b) for b in B] for a in B]
    assert all(P[i][j] == P[j][i] for i in range(len(B)) for j in range(len(B)))


@pytest.mark.parametrize("d", [-5, -15, 10])
def test_ev_and_rank_one(d):
    K = FieldConfig(d)
    rng = random.Random(d)
    for L in steinitz_lattices(K):
        S = FormSpace(L)
        for _ in range(10):
            F = random_pd_form(S, rng)
            v = tuple(rng.randint(-3, 3) for _ in range(4))
            if not any(v):
                continue
            x = L.to_vector(v)
            # F[v] through ev, the Gram matrix and the Hermitian evaluation agree
            val = sum(f * e for f, e in zip(F, S.ev(v)))
            G = S.gram(F)
            assert val == sum(v[i] * G[i][j] * v[j] for i in range(4) for j in range(4))
            assert val == eval_form(S.form(F), x)
            # <v v^dagger, F> = F[v]
            R = rank_one(x)
            assert list(R.coords) == S.rank_one_coords(v)
            assert trace_pairing(R, S.form(F)) == val


def test_action_invariance():
    K = FieldConfig(-7)
    L = steinitz_lattices(K)[0]
    S = FormSpace(L)
    g = ((K.one, K(1, 1)), (K.zero, K.one))
    F = Form.identity(K)
    gF = act_on_form(g, F)
    for v in [(1, 0, 0, 0), (0, 1, 1, 0), (2, -1, 0, 3)]:
        x = L.to_vector(v)
        gx = (g[0][0] * x[0] + g[0][1] * x[1], g[1][0] * x[0] + g[1][1] * x[1])
        assert eval_form(gF, gx) == eval_form(F, x)
    # <g.F, g T g^dagger> = <F, T>
    T = rank_one(L.to_vector((1, 2, 0, 1)))
    assert trace_pairing(gF, act_on_ray(g, T)) == trace_pairing(F, T)
    # act_matrix agrees with the Hermitian action
    A = L.matrix_to_z(g)
    M = S.act_matrix(A)
    img = [sum(M[i][j] * F.coords[j] for j in range(S.N)) for i in range(S.N)]
    assert tuple(img) == gF.coords


def test_form_inverse():
    K = FieldConfig(-2)
    F = Form(K, (2, 3, 1, 1))
    Fi = form_inverse(F)
    M = F.matrix()
    Mi = Fi.matrix()
    prod = [[M[i][0] * Mi[0][j] + M[i][1] * Mi[1][j] for j in range(2)] for i in range(2)]
    assert prod == [[K.one, K.zero], [K.zero, K.one]]


def test_not_positive_definite():
    K = FieldConfig(-1)
    L = steinitz_lattices(K)[0]
    F = Form(K, (1, -1, 0, 0))
    assert not is_positive_definite(F, L)
    with pytest.raises(NotPositiveDefinite):
        z_gram(F, L)
    with pytest.raises(NotPositiveDefinite):
        FormSpace(L).minimum(F.coords)


def test_short_vectors_small():
    G = [[2, 1], [1, 2]]
    sv = short_vectors(G, 2)
    assert sorted(v for v, _ in sv) == sorted([(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)])
    assert all(val == 2 for _, val in sv)


def test_phi1_trivial_on_class_number_one():
    for d in (-1, -2, -3, -7, -11, 2, 3, 5):
        w = WeightSpec.phi1(FieldConfig(d))
        assert w.is_trivial and w.min_value == 1


def test_phi1_values_class_number_two():
    K = FieldConfig(-5)
    w = WeightSpec.phi1(K)
    assert w.class_norm_table == (1, 2)
    S = FormSpace(steinitz_lattices(K)[0], w)
    assert S.weight_of((1, 0, 0, 0)) == 1
    # (2, 1 + sqrt(-5)) generates the non-principal prime over 2
    assert S.weight_of((2, 0, 1, 1)) == Fraction(1, 2)


@pytest.mark.parametrize("d", SMALL_FIELDS)
def test_minimum_matches_brute_force(d):
    K = FieldConfig(d)
    rng = random.Random(1000 + d)
    weights = [WeightSpec.phi0(), WeightSpec.phi1(K)]
    for L in steinitz_lattices(K):
        for w in weights:
            S = FormSpace(L, w)
            for _ in range(20):
                F = random_pd_form(S, rng)
                md = S.minimum(F)
                m, vecs = brute_force_minimum(S, F)
                assert md.minimum == m
                assert list(md.vectors) == vecs
