"""
Closed-form evaluators: circuit-size exponents from rigidity upper bounds,
the obstruction check for Walsh-Hadamard matrices, and the parameter
schedules that turn amplified rigidity lower bounds into strong ones.
"""
import decimal
import math
from dataclasses import dataclass
from fractions import Fraction

import rigidpy.core.validate_inputs as val
from rigidpy.core.exceptions import PreconditionError

# commonly quoted value of the (q=16, r=1, R=96, d=2) exponent
PRINTED_EXPONENT = 1.47582

_RHS_PRECISION = 60


def circuit_exponent(q, r, R, d):
    """
    Exponent e such that A^n has a depth-d synchronous circuit of size O(d q^(e n)).

    e = 1 + c/d with c = log_q((r + 1)(r + R/q)), where R bounds the rank-r
    rigidity of the q x q base matrix A.

    Parameters
    ----------
    q : int
        Size of the base matrix, at least 2.
    r : int
        Rank.
    R : int or float
        Rigidity upper bound R_A(r).
    d : int
        Depth, at least 1.

    Examples
    --------
    >>> round(rgd.circuit_exponent(16, 1, 96, 2), 5)
    1.47592
    """
    q = val.nonneg_int(q, "q")
    assert q >= 2, "q must be at least 2"
    r = val.nonneg_int(r, "The rank")
    d = val.positive_int(d, "The depth")
    assert R >= 0, "The rigidity bound must be non-negative"
    arg = (r + 1) * (r + R / q)
    if arg <= 0:
        raise PreconditionError(
            "Degenerate exponent: (r + 1)(r + R/q) = {0} has no logarithm".format(arg)
        )
    return 1 + math.log(arg, q) / d


def obstruction_check(k, r, R_lb):
    """
    Whether (r + 1)(r + R_lb / 2^k) >= 2^k, i.e. whether a rigidity lower bound
    R_lb for H_k at rank r rules out a circuit exponent below 2 by this route.

    Examples
    --------
    >>> from fractions import Fraction
    >>> rgd.obstruction_check(10, 2, Fraction(4**10, 3))
    True
    >>> rgd.obstruction_check(10, 2, 0)
    False
    """
    k = val.positive_int(k, "k")
    r = val.nonneg_int(r, "The rank")
    if r <= 1:
        raise PreconditionError("The obstruction check needs rank r > 1, got {0}".format(r))
    R_lb = Fraction(R_lb)
    return (r + 1) * (r + R_lb / 2**k) >= 2**k


@dataclass(frozen=True)
class ScheduleReport:
    """
    Parameters of one step of a rigidity schedule.

    `k` is the exact schedule value and `k_int` the integer used (nearest, at
    least 2). `gap` is how far the error level the amplified bound must beat
    lies below 1/2; it is held as a Decimal because it underflows a float.
    """

    n: float
    k: float
    k_int: int
    rank: float
    gap: decimal.Decimal

    @property
    def rhs(self):
        """1/2 - gap, with enough digits that it stays below 1/2."""
        with decimal.localcontext() as ctx:
            ctx.prec = _RHS_PRECISION + max(0, -self.gap.adjusted())
            return decimal.Decimal("0.5") - self.gap

    @property
    def rhs_gap(self):
        return self.gap


def razborov_schedule_kron(n, eps, c):
    """
    Schedule for Kronecker powers: k = 2^((eps log2(n) / 2)^(1/c)), rank n^(1+eps),
    target 1/2 - (1/2) 12^(-n/k).

    Examples
    --------
    >>> rep = rgd.razborov_schedule_kron(2**16, 1, 1)
    >>> rep.k_int, rep.rank == 2**32, rep.rhs < 0.5
    (256, True, True)
    """
    assert n >= 4, "n must be at least 4"
    assert eps > 0 and c > 0, "eps and c must be positive"
    k = 2 ** ((eps * math.log2(n) / 2) ** (1 / c))
    k_int = max(2, round(k))
    with decimal.localcontext() as ctx:
        ctx.prec = _RHS_PRECISION
        gap = decimal.Decimal("0.5") * decimal.Decimal(12) ** (
            -decimal.Decimal(n) / decimal.Decimal(k_int)
        )
    return ScheduleReport(n, k, k_int, n ** (1 + eps), gap)


def razborov_schedule_maj(n, beta, c):
    """
    Schedule for Majority powers: k = 2^((log2 log2 n + log2 beta)^(1/c)),
    rank beta log2(n), target 1/2 - sqrt(k/n).

    Examples
    --------
    >>> rgd.razborov_schedule_maj(2**16, 1, 1).k_int
    16
    """
    assert n > 2, "n must exceed 2"
    assert beta > 0 and c > 0, "beta and c must be positive"
    base = math.log2(math.log2(n)) + math.log2(beta)
    if base <= 0:
        raise PreconditionError("n is too small: log log n + log beta must be positive")
    k = 2 ** (base ** (1 / c))
    k_int = max(2, round(k))
    with decimal.localcontext() as ctx:
        ctx.prec = _RHS_PRECISION
        gap = (decimal.Decimal(k_int) / decimal.Decimal(n)).sqrt()
    return ScheduleReport(n, k, k_int, beta * math.log2(n), gap)
