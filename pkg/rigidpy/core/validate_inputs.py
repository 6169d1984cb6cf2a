import numbers
import warnings
from fractions import Fraction

import galois

# largest modulus the exact field and lift code is sized for
MAX_PRIME = 13


def prime(p):
    """
    Check that the submitted modulus is a supported prime and return it as an int.
    """
    if isinstance(p, bool) or not isinstance(p, numbers.Integral):
        raise TypeError("Please enter the modulus as an integer")
    p = int(p)
    assert p >= 2, "The modulus must be at least 2"
    assert galois.is_prime(p), "The modulus must be a prime"
    assert p <= MAX_PRIME, "Moduli above {0} are not supported".format(MAX_PRIME)
    return p


def nonneg_int(value, name):
    """
    Check that the submitted value is a non-negative integer.
    """
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError("Please enter {0} as an integer".format(name))
    assert value >= 0, "{0} must be non-negative".format(name)
    return int(value)


def positive_int(value, name):
    """
    Check that the submitted value is a positive integer.
    """
    value = nonneg_int(value, name)
    assert value > 0, "{0} must be positive".format(name)
    return value


def probability(value, name):
    """
    Convert a probability to an exact rational and check it lies in [0, 1].

    Floats are converted through their decimal string so that 0.1 becomes 1/10.

    Examples
    --------
    >>> rgd.core.validate_inputs.probability(0.25, "delta")
    Fraction(1, 4)
    """
    if isinstance(value, bool) or not isinstance(value, (numbers.Rational, float, str)):
        raise TypeError("Please enter {0} as a rational, float or string".format(name))
    frac = Fraction(str(value)) if isinstance(value, float) else Fraction(value)
    assert 0 <= frac <= 1, "{0} must lie in [0, 1]".format(name)
    return frac


def distribution(p1, pm1):
    """
    Check that (p1, pm1) is the law of a +-1 random variable.
    """
    p1 = probability(p1, "p1")
    pm1 = probability(pm1, "pm1")
    assert p1 + pm1 == 1, "p1 and pm1 must sum to 1"
    return p1, pm1


def residues(values, p, name="vector"):
    """
    Check that every entry of an integer vector is a residue mod p and return a tuple.
    """
    try:
        vals = tuple(int(v) for v in values)
    except TypeError:
        raise TypeError("Please enter the {0} as a sequence of integers".format(name))
    assert all(0 <= v < p for v in vals), "Entries of the {0} must lie in [0, {1})".format(
        name, p
    )
    return vals


def sign_embedding(p):
    """
    Warn when signs are embedded into F_2, where +1 and -1 coincide.
    """
    if p == 2:
        warnings.filterwarnings("always")
        warnings.warn(
            "Embedding signs into F_2 is degenerate: +1 and -1 both map to residue 1"
        )
