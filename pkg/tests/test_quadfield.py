import random
from fractions import Fraction

import pytest

from oracles import class_number_by_search, principal_by_search, reduced_form_count, squarefree_fields
from wellround.quadfield import (
    FieldConfig,
    FieldTooLarge,
    Ideal,
    class_group,
    ideal_of_vector,
    integral_ideals_upto,
    is_principal,
    min_norm_in_class,
    steinitz_lattices,
)


def test_field_basics():
    K = FieldConfig(-1)
    assert K.disc == -4 and K.omega_rule == "sqrt(d)"
    w = K.omega
    assert w * w == K(-1)
    K5 = FieldConfig(5)
    assert K5.disc == 5
    w = K5.omega
    assert w * w == w + 1  # w^2 = t w - m with t = 1, m = -1


@pytest.mark.parametrize("d", [0, 1, 4, -4, 12])
def test_rejects_non_squarefree(d):
    with pytest.raises(ValueError):
        FieldConfig(d)


def test_field_arithmetic_matches_embeddings():
    rng = random.Random(5)
    for d in (-7, -5, 2, 13):
        K = FieldConfig(d)
        for _ in range(20):
            x = K(Fraction(rng.randint(-9, 9), rng.randint(1, 4)), rng.randint(-9, 9))
            y = K(rng.randint(-9, 9), Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
            assert abs((x * y).to_complex() - x.to_complex() * y.to_complex()) < 1e-9
            assert x.norm() == (x * x.conj()).a and (x * x.conj()).b == 0
            if x:
                assert x * x.inverse() == K.one


def test_torsion_units():
    assert len(FieldConfig(-1).torsion_units) == 4
    assert len(FieldConfig(-3).torsion_units) == 6
    assert len(FieldConfig(-5).torsion_units) == 2
    for u in FieldConfig(-3).torsion_units:
        assert u.norm() == 1


def test_fundamental_units():
    assert FieldConfig(2).fundamental_unit == FieldConfig(2)(1, 1)
    K = FieldConfig(10)
    assert K.fundamental_unit == K(3, 1)
    assert abs(K.fundamental_unit.norm()) == 1


@pytest.mark.parametrize("d", squarefree_fields(-30, 30))
def test_class_number_matches_search(d):
    K = FieldConfig(d)
    h, _ = class_number_by_search(K)
    assert class_group(K).h == h
    if d < 0:
        assert reduced_form_count(K.disc) == h


@pytest.mark.parametrize("d", [-5, -6, -14, -23, 10, 15, 79])
def test_principality_agrees_with_search(d):
    K = FieldConfig(d)
    for I in integral_ideals_upto(K, 30):
        assert is_principal(I) == principal_by_search(I)


@pytest.mark.parametrize("d,h", [(-47, 5), (-71, 7), (-26, 6), (229, 3)])
def test_larger_class_numbers(d, h):
    assert class_group(FieldConfig(d)).h == h


def test_class_representatives():
    cg = class_group(FieldConfig(-5))
    assert cg.h == 2
    assert [min_norm_in_class(cg, i) for i in range(2)] == [1, 2]
    assert cg.representatives[0] == Ideal.unit(FieldConfig(-5))


def test_ideal_arithmetic():
    K = FieldConfig(-5)
    p = Ideal.from_generators(K, [K(2), K(1, 1)])
    assert p.norm() == 2
    assert not is_principal(p)
    assert is_principal(p * p)
    assert p * p.inverse() == Ideal.unit(K)
    assert K(1, 1) in p and K(1) not in p


def test_steinitz_lattices_and_vector_ideals():
    K = FieldConfig(-6)
    Ls = steinitz_lattices(K)
    assert len(Ls) == 2
    L1 = Ls[1]
    # (0, g) for g in c: a_x = g c^{-1}, integral
    x = L1.to_vector((0, 0, 1, 0))
    a = ideal_of_vector(L1, x)
    assert a.is_integral()
    assert L1.int_coords(x) == (0, 0, 1, 0)
    W = L1.omega_action
    for v in [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]:
        y = L1.to_vector(v)
        img = tuple(sum(W[i][j] * v[j] for j in range(4)) for i in range(4))
        assert L1.to_vector(img) == (y[0] * K.omega, y[1] * K.omega)


def test_matrix_roundtrip():
    K = FieldConfig(-5)
    L = steinitz_lattices(K)[1]
    g = ((K.one, K.zero), (K.zero, K(-1)))
    A = L.matrix_to_z(g)
    assert L.z_to_matrix(A) == g


def test_field_too_large():
    with pytest.raises(FieldTooLarge):
        class_group(FieldConfig(-10**6 - 3), bound=10**4)
