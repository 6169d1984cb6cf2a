from fractions import Fraction

import numpy as np
import pytest

import rigidpy.core.validate_inputs as val


########## prime ##########
def test_prime_accepts_small_primes():
    obs = [val.prime(p) for p in (2, 3, 5, 7, 11, 13)]
    exp = [2, 3, 5, 7, 11, 13]
    assert obs == exp


def test_prime_accepts_numpy_ints():
    assert val.prime(np.int64(5)) == 5


def test_prime_str_given():
    ermsg = "Please enter the modulus as an integer"
    with pytest.raises(TypeError, match=ermsg):
        val.prime("3")


def test_prime_bool_given():
    with pytest.raises(TypeError):
        val.prime(True)


@pytest.mark.parametrize("p", [0, 1])
def test_prime_too_small(p):
    ermsg = "The modulus must be at least 2"
    with pytest.raises(AssertionError, match=ermsg):
        val.prime(p)


def test_prime_composite():
    ermsg = "The modulus must be a prime"
    with pytest.raises(AssertionError, match=ermsg):
        val.prime(9)


def test_prime_too_large():
    ermsg = "Moduli above 13 are not supported"
    with pytest.raises(AssertionError, match=ermsg):
        val.prime(17)


########## integers ##########
def test_nonneg_int():
    assert val.nonneg_int(0, "The rank") == 0


def test_nonneg_int_negative():
    ermsg = "The rank must be non-negative"
    with pytest.raises(AssertionError, match=ermsg):
        val.nonneg_int(-1, "The rank")


def test_nonneg_int_float():
    ermsg = "Please enter The rank as an integer"
    with pytest.raises(TypeError, match=ermsg):
        val.nonneg_int(1.0, "The rank")


def test_positive_int_zero():
    ermsg = "The power must be positive"
    with pytest.raises(AssertionError, match=ermsg):
        val.positive_int(0, "The power")


########## probabilities ##########
@pytest.mark.parametrize(
    "value, exp",
    [(0.1, Fraction(1, 10)), (Fraction(2, 3), Fraction(2, 3)), (1, Fraction(1)), ("1/4", Fraction(1, 4))],
)
def test_probability_exact(value, exp):
    assert val.probability(value, "delta") == exp


def test_probability_out_of_range():
    ermsg = r"delta must lie in \[0, 1\]"
    with pytest.raises(AssertionError, match=ermsg):
        val.probability(1.5, "delta")


def test_distribution():
    obs = val.distribution(0.25, 0.75)
    exp = (Fraction(1, 4), Fraction(3, 4))
    assert obs == exp


def test_distribution_bad_sum():
    ermsg = "p1 and pm1 must sum to 1"
    with pytest.raises(AssertionError, match=ermsg):
        val.distribution(0.5, 0.6)


########## residues ##########
def test_residues():
    assert val.residues([0, 2, 1], 3) == (0, 2, 1)


def test_residues_out_of_range():
    ermsg = r"Entries of the seed must lie in \[0, 3\)"
    with pytest.raises(AssertionError, match=ermsg):
        val.residues([3], 3, "seed")


def test_sign_embedding_warns_over_f2():
    wrng = "Embedding signs into F_2 is degenerate"
    with pytest.warns(UserWarning, match=wrng):
        val.sign_embedding(2)
