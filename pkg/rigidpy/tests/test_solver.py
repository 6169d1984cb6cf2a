import math

import numpy as np
import pytest

import rigidpy as rgd
from rigidpy.core.exceptions import BudgetExceededError
from rigidpy.core.solver import gaussian_binomial


def _instances(all_2x2, random_3x3):
    return list(all_2x2) + list(random_3x3)


########## subspace counting ##########
@pytest.mark.parametrize(
    "n, k, p, exp", [(2, 1, 3, 4), (3, 1, 2, 7), (4, 2, 2, 35), (5, 0, 3, 1), (2, 3, 2, 0)]
)
def test_gaussian_binomial(n, k, p, exp):
    assert gaussian_binomial(n, k, p) == exp


########## oracle equivalence ##########
@pytest.mark.parametrize("p", [2, 3])
def test_boolean_rigidity_matches_oracle(all_2x2_sign_matrices, random_3x3_sign_matrices, p):
    for A in _instances(all_2x2_sign_matrices, random_3x3_sign_matrices):
        obs = rgd.exact_boolean_rigidity(A, 1, p).value
        exp = rgd.bruteforce_oracle(A, 1, p, "boolean")
        assert obs == exp


@pytest.mark.parametrize("p", [2, 3])
def test_regular_rigidity_matches_oracle(all_2x2_sign_matrices, random_3x3_sign_matrices, p):
    for A in _instances(all_2x2_sign_matrices, random_3x3_sign_matrices):
        obs = rgd.exact_regular_rigidity(rgd.sign_to_fp(A, p), 1).value
        exp = rgd.bruteforce_oracle(A, 1, p, "regular")
        assert obs == exp


def test_oracle_rank_zero(h1):
    assert rgd.bruteforce_oracle(h1, 0, 3, "boolean") == 3
    assert rgd.bruteforce_oracle(h1, 0, 3, "regular") == 4


########## properties ##########
def test_rigidity_monotone_in_rank(random_3x3_sign_matrices):
    for A in random_3x3_sign_matrices[:20]:
        values = [rgd.exact_boolean_rigidity(A, r, 3).value for r in range(4)]
        assert values == sorted(values, reverse=True)
        assert values[-1] == 0


def test_witness_is_valid(random_3x3_sign_matrices):
    for A in random_3x3_sign_matrices[:20]:
        for r in (0, 1, 2):
            res = rgd.exact_boolean_rigidity(A, r, 3)
            assert res.exhaustive
            assert res.witness.r <= r
            assert rgd.fp_rank(res.witness.materialize()) <= r
            assert res.distance_to(A) == res.value


def test_regular_witness_is_valid(random_3x3_sign_matrices):
    for A in random_3x3_sign_matrices[:20]:
        M = rgd.sign_to_fp(A, 5)
        res = rgd.exact_regular_rigidity(M, 1)
        assert res.mode == "regular"
        assert rgd.fp_rank(res.witness.materialize()) <= 1
        assert res.distance_to(M) == res.value


def test_boolean_at_most_regular(random_3x3_sign_matrices):
    for A in random_3x3_sign_matrices:
        for r in (0, 1, 2):
            boolean = rgd.exact_boolean_rigidity(A, r, 3).value
            regular = rgd.exact_regular_rigidity(rgd.sign_to_fp(A, 3), r).value
            assert boolean <= regular


def test_rank_zero_counts_positive_entries(random_3x3_sign_matrices):
    for A in random_3x3_sign_matrices:
        assert rgd.exact_boolean_rigidity(A, 0, 2).value == A.count_positive()


def test_full_rank_target_is_free(h3):
    res = rgd.exact_boolean_rigidity(h3, 8, 3)
    assert res.value == 0
    assert res.distance_to(h3) == 0


@pytest.mark.parametrize("r, exp", [(0, 3), (1, 2), (2, 1), (3, 0)])
def test_regular_rigidity_of_identity(r, exp):
    assert rgd.exact_regular_rigidity(rgd.FpMatrix.identity(3, 3), r).value == exp


def test_larger_instance(h3):
    res = rgd.exact_boolean_rigidity(h3, 1, 3)
    assert res.value <= rgd.trivial_rank1_bound(h3)
    assert res.distance_to(h3) == res.value


########## lower-bound soundness ##########
@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("r", [0, 1, 2])
def test_singular_value_bound_is_sound(all_2x2_sign_matrices, random_3x3_sign_matrices, p, r):
    for A in _instances(all_2x2_sign_matrices, random_3x3_sign_matrices):
        rep = rgd.thm1_bound(A, r, p)
        if not rep.positive:
            continue
        exact = rgd.exact_boolean_rigidity(A, r, p).value
        assert exact >= math.ceil(rep.bound - 1e-9)


def test_bound_sound_on_walsh_hadamard():
    for n in (1, 2):
        H = rgd.walsh_hadamard(n)
        rep = rgd.thm1_bound(H, 0, 3)
        assert rep.positive
        assert rgd.exact_boolean_rigidity(H, 0, 3).value >= math.ceil(rep.bound)


########## determinism ##########
def test_threads_give_same_result(h3):
    one = rgd.exact_boolean_rigidity(h3, 1, 3, workers=1)
    four = rgd.exact_boolean_rigidity(h3, 1, 3, workers=4)
    assert one.value == four.value
    assert one.witness.U == four.witness.U
    assert one.witness.V == four.witness.V


def test_ties_go_to_smallest_echelon_basis():
    # the spans of [1, 2] and [0, 1] both fit every column exactly
    A = rgd.SignMatrix([[-1, -1], [1, 1]])
    res = rgd.exact_boolean_rigidity(A, 1, 3)
    assert res.value == 0
    assert res.witness.U.values.tolist() == [[0, 1]]
    assert res.witness.V.values.tolist() == [[1, 1]]


########## input checks ##########
def test_boolean_rigidity_needs_sign_matrix():
    with pytest.raises(TypeError, match="SignMatrix"):
        rgd.exact_boolean_rigidity(rgd.FpMatrix.identity(2, 3), 1, 3)


def test_regular_rigidity_needs_fp_matrix(h1):
    with pytest.raises(TypeError, match="FpMatrix"):
        rgd.exact_regular_rigidity(h1, 1)


def test_exact_budget(h3):
    with pytest.raises(BudgetExceededError, match="budget is 10"):
        rgd.exact_boolean_rigidity(h3, 2, 3, budget=10)


def test_oracle_budget(h3):
    with pytest.raises(BudgetExceededError):
        rgd.bruteforce_oracle(h3, 1, 3, "boolean")


def test_oracle_mode():
    with pytest.raises(AssertionError, match="The mode must be one of"):
        rgd.bruteforce_oracle(rgd.walsh_hadamard(1), 1, 3, "exact")


########## rank-1 search ##########
def test_trivial_rank1_bound(h1):
    assert rgd.trivial_rank1_bound(h1) == 1


@pytest.mark.parametrize("p", [2, 3])
def test_rank1_search_is_exact_when_exhaustive(random_3x3_sign_matrices, p):
    for A in random_3x3_sign_matrices[:20]:
        res = rgd.rank1_search(A, p)
        assert res.exhaustive
        assert res.value == rgd.exact_boolean_rigidity(A, 1, p).value
        assert res.distance_to(A) == res.value


def test_rank1_search_walsh_hadamard(h3):
    res = rgd.rank1_search(h3, 3)
    assert res.value == rgd.exact_boolean_rigidity(h3, 1, 3).value
    assert res.value <= rgd.trivial_rank1_bound(h3)


def test_rank1_search_budget(h3):
    res = rgd.rank1_search(h3, 3, budget=3 * 8 * 10)
    assert not res.exhaustive
    assert res.value <= rgd.trivial_rank1_bound(h3)
    assert res.distance_to(h3) == res.value


def test_rank1_search_rejects_large_inputs():
    with pytest.raises(AssertionError, match="at most 16 rows"):
        rgd.rank1_search(rgd.walsh_hadamard(5), 3)
    with pytest.raises(AssertionError, match="p <= 3"):
        rgd.rank1_search(rgd.walsh_hadamard(2), 5)


def test_rank1_search_all_minus_ones():
    A = rgd.SignMatrix(-np.ones((4, 4), dtype=np.int8))
    assert rgd.rank1_search(A, 3).value == 0
