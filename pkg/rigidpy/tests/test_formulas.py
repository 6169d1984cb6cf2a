import decimal
import math
from fractions import Fraction

import pytest

import rigidpy as rgd
from rigidpy.core.exceptions import PreconditionError
from rigidpy.core.formulas import PRINTED_EXPONENT


########## circuit exponent ##########
def test_circuit_exponent_worked_example():
    obs = rgd.circuit_exponent(16, 1, 96, 2)
    exp = 1 + math.log(14, 16) / 2
    assert abs(obs - exp) <= 1e-9


def test_circuit_exponent_gap_to_printed_value():
    gap = rgd.circuit_exponent(16, 1, 96, 2) - PRINTED_EXPONENT
    assert 0.9e-4 < gap < 1.1e-4


def test_circuit_exponent_decreases_with_depth():
    values = [rgd.circuit_exponent(16, 1, 96, d) for d in range(1, 6)]
    assert values == sorted(values, reverse=True)


def test_circuit_exponent_degenerate():
    with pytest.raises(PreconditionError, match="Degenerate exponent"):
        rgd.circuit_exponent(4, 0, 0, 1)


def test_circuit_exponent_bad_depth():
    with pytest.raises(AssertionError, match="The depth must be positive"):
        rgd.circuit_exponent(16, 1, 96, 0)


########## obstruction ##########
@pytest.mark.parametrize("r", [2, 3])
@pytest.mark.parametrize("k", range(5, 21))
def test_obstruction_holds_at_quadratic_rigidity(k, r):
    assert rgd.obstruction_check(k, r, Fraction(4**k, 3))


def test_obstruction_fails_for_small_rigidity():
    assert not rgd.obstruction_check(12, 2, 2**12)


def test_obstruction_needs_rank_above_one():
    with pytest.raises(PreconditionError, match="rank r > 1"):
        rgd.obstruction_check(5, 1, 100)


########## schedules ##########
def test_kron_schedule_worked_example():
    rep = rgd.razborov_schedule_kron(2**16, 1, 1)
    assert rep.k == pytest.approx(256)
    assert rep.k_int == 256
    assert rep.rank == 2**32
    assert rep.rhs < decimal.Decimal("0.5")
    assert rep.rhs_gap == rep.gap > 0


def test_maj_schedule_worked_example():
    rep = rgd.razborov_schedule_maj(2**16, 1, 1)
    assert rep.k_int == 16
    assert rep.rank == pytest.approx(16)
    assert rep.rhs == decimal.Decimal("0.5") - decimal.Decimal(16 / 2**16).sqrt()


@pytest.mark.parametrize(
    "schedule, param", [(rgd.razborov_schedule_kron, 0.5), (rgd.razborov_schedule_maj, 2)]
)
def test_schedules_are_monotone(schedule, param):
    reps = [schedule(2**e, param, 1) for e in (8, 12, 16, 20, 24)]
    for a, b in zip(reps, reps[1:]):
        assert a.k <= b.k
        assert a.k_int <= b.k_int
        assert a.rank < b.rank
        assert a.rhs < decimal.Decimal("0.5")


def test_kron_schedule_gap_shrinks():
    reps = [rgd.razborov_schedule_kron(2**e, 1, 1) for e in (8, 12, 16)]
    gaps = [rep.gap for rep in reps]
    assert gaps == sorted(gaps, reverse=True)


def test_maj_schedule_too_small():
    with pytest.raises(PreconditionError, match="n is too small"):
        rgd.razborov_schedule_maj(3, 0.5, 1)
