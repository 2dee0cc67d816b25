import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gcd_of_minors_divisors
from wellround.snfhomology import (
    HomologyGroup,
    elementary_divisors,
    homology_from_matrices,
    invariant_factors,
    smith_normal_form,
)


def matmul(A, B):
    return [[sum(a * B[k][j] for k, a in enumerate(row)) for j in range(len(B[0]))] for row in A]


def test_small_examples():
    assert smith_normal_form([[2, 4], [0, 6]]) == ([2, 6], 2)
    assert smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == ([1, 1, 1], 3)
    assert smith_normal_form([[0, 0], [0, 0]]) == ([], 0)
    assert elementary_divisors([[2, 4], [0, 6]]) == [2, 6]
    assert elementary_divisors([[0, 0, 0]]) == []


def test_transforms():
    rng = random.Random(2)
    for _ in range(20):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        M = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)]
        S, U, V = smith_normal_form(M, transforms=True)
        assert matmul(matmul(U, M), V) == S
        assert all(S[i][j] == 0 for i in range(m) for j in range(n) if i != j)
        diag = [S[i][i] for i in range(min(m, n)) if S[i][i]]
        assert all(b % a == 0 for a, b in zip(diag, diag[1:]))


matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_divisors_match_gcd_of_minors(M):
    expected = gcd_of_minors_divisors(M)
    divs, r = smith_normal_form(M)
    assert divs == expected and r == len(expected)
    assert elementary_divisors(M) == expected


def test_sparse_unit_elimination_agrees():
    rng = random.Random(9)
    for _ in range(30):
        m, n = rng.randint(3, 12), rng.randint(3, 12)
        M = [[rng.choice([0, 0, 0, 1, -1, 2, 3]) for _ in range(n)] for _ in range(m)]
        assert elementary_divisors(M) == smith_normal_form(M)[0]


def test_invariant_factors():
    assert invariant_factors([2, 3]) == [6]
    assert invariant_factors([2, 4, 3]) == [2, 12]
    assert invariant_factors([1, 1]) == []
    assert invariant_factors([4, 2, 2]) == [2, 2, 4]


def test_parse_and_format():
    H = HomologyGroup.parse("(Z/2)^2 x Z/12 x Z")
    assert H == HomologyGroup((2, 2, 12), 1)
    assert str(H) == "(Z/2)^2 x Z/12 x Z"
    # cyclic decompositions are normalized to the divisibility chain
    assert HomologyGroup.parse("Z/4 x Z/3 x Z/2") == HomologyGroup((2, 12), 0)
    assert HomologyGroup.parse("0") == HomologyGroup()
    assert str(HomologyGroup()) == "0"
    assert str(HomologyGroup((), 2)) == "Z^2"
    assert HomologyGroup.parse("(Z/2)^2 x Z/12").primary_parts() == {2: [2, 2, 4], 3: [3]}
    with pytest.raises(ValueError):
        HomologyGroup.parse("Q")
    with pytest.raises(ValueError):
        HomologyGroup((4, 2))


def test_homology_from_matrices():
    # chain complex of a circle with one 0-cell and one 1-cell, and RP^2 style 2 x
    assert homology_from_matrices([[0]], [[2]], 1) == HomologyGroup((2,), 0)
    assert homology_from_matrices([[0]], [], 1) == HomologyGroup((), 1)
    with pytest.raises(ArithmeticError):
        homology_from_matrices([[1]], [[1]], 1)
