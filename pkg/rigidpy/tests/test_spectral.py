import math

import numpy as np
import pytest

import rigidpy as rgd
import rigidpy.core.spectral as spectral
from rigidpy.core.exceptions import PreconditionError
from rigidpy.core.spectral import distance_eigenvalues_direct, distance_spectrum

# the all-ones vector lies in a lower eigenspace of its Gram matrix
STALLING_MATRIX = [[1, 1, 1, -1], [1, 1, -1, 1], [1, -1, 1, -1], [1, -1, 1, -1]]


########## largest singular value ##########
@pytest.mark.parametrize("size, count", [(4, 300), (6, 100), (8, 200)])
def test_largest_singular_value_matches_svd(size, count):
    rng = np.random.default_rng(7)
    for _ in range(count):
        A = rgd.SignMatrix(rng.choice([-1, 1], size=(size, size)))
        exp = np.linalg.svd(A.values.astype(float), compute_uv=False)[0]
        rep = rgd.largest_singular_value(A)
        assert rep.method in ("power-iteration", "exact-gram")
        assert rep.sigma1 == pytest.approx(exp, rel=1e-8)


def test_largest_singular_value_when_ones_start_stalls():
    A = rgd.SignMatrix(STALLING_MATRIX)
    rep = rgd.largest_singular_value(A)
    assert rep.sigma1 == pytest.approx(1 + math.sqrt(5), rel=1e-9)
    assert rep.converged
    assert rgd.thm1_bound(A, 0, 3).bound == pytest.approx(16 * (0.5 - rep.sigma1 / 8))


def test_largest_singular_value_when_ones_is_in_kernel(m1):
    # the all-ones start is annihilated by M1
    rep = rgd.largest_singular_value(m1)
    assert rep.sigma1 == pytest.approx(2.0)
    assert rep.converged


def test_largest_singular_value_beyond_exact_gram():
    # M_11 has the all-ones vector in its kernel and N = 2048
    rep = rgd.largest_singular_value(rgd.distance_matrix(11))
    assert rep.method == "power-iteration"
    assert rep.sigma1 == pytest.approx(504.0, rel=1e-9)


@pytest.mark.parametrize("n", range(0, 9))
def test_walsh_hadamard_sigma(n):
    obs = rgd.largest_singular_value(rgd.walsh_hadamard(n)).sigma1
    assert abs(obs - 2 ** (n / 2)) <= 1e-9


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_kron_sigma_identity(all_2x2_sign_matrices, n):
    for A in all_2x2_sign_matrices:
        exp = np.linalg.svd(rgd.kron_power(A, n).values.astype(float), compute_uv=False)[0]
        assert abs(rgd.kron_sigma(A, n) - exp) <= 1e-6 * exp


def test_kron_sigma_non_binary_base():
    A = rgd.SignMatrix([[1, 1, 1], [1, -1, 1], [1, 1, -1]])
    exp = np.linalg.svd(rgd.kron_power(A, 3).values.astype(float), compute_uv=False)[0]
    assert rgd.kron_sigma(A, 3) == pytest.approx(exp, rel=1e-6)


def test_sigma_lt_q_check(h1):
    sigma1, strict = rgd.sigma_lt_q_check(h1)
    assert strict
    assert sigma1 == pytest.approx(math.sqrt(2))


def test_sigma_lt_q_check_rank_one():
    sigma1, strict = rgd.sigma_lt_q_check(rgd.named_matrix("ones3"))
    assert not strict
    assert sigma1 == pytest.approx(3.0)


########## distance matrix spectrum ##########
@pytest.mark.parametrize("n", range(2, 13))
def test_distance_spectrum_matches_dense(n):
    dense = np.linalg.eigvalsh(rgd.distance_matrix(n).values.astype(float))
    obs = distance_spectrum(n)
    assert np.allclose(np.sort(dense), obs, atol=1e-8)


@pytest.mark.parametrize("n", range(1, 15))
def test_distance_eigenvalues_direct(n):
    assert distance_eigenvalues_direct(n) == rgd.distance_eigenvalues(n)


@pytest.mark.parametrize("n", range(1, 25))
def test_distance_trace_identity(n):
    eig = rgd.distance_eigenvalues(n)
    obs = sum(math.comb(n, j) * eig[j] for j in range(n + 1))
    assert obs == 2**n


@pytest.mark.parametrize("n", range(4, 21))
def test_hamming_sigma_scaling(n):
    assert rgd.hamming_sigma(n) * math.sqrt(n) / 2**n <= 3


@pytest.mark.parametrize("n", range(1, 11))
def test_hamming_sigma_matches_power_iteration(n):
    exp = rgd.largest_singular_value(rgd.distance_matrix(n)).sigma1
    assert abs(rgd.hamming_sigma(n) - exp) <= 1e-8 * max(1.0, exp)


@pytest.mark.parametrize("y", range(8))
def test_distance_eigenvectors(y):
    M = rgd.distance_matrix(3).values
    x = np.arange(8)
    v = np.array([(-1) ** bin(int(xi) & y).count("1") for xi in x])
    lam = rgd.distance_eigenvalues(3)[bin(y).count("1")]
    assert np.array_equal(M @ v, lam * v)


def test_distance_eigenvalues_too_large():
    with pytest.raises(AssertionError, match="at most 24"):
        rgd.distance_eigenvalues(25)


########## rigidity lower bounds ##########
def test_thm1_bound_rank_zero(h1):
    rep = rgd.thm1_bound(h1, 0, 3)
    assert rep.rtilde == 1
    assert rep.bound == pytest.approx(4 * (0.5 - math.sqrt(2) / 4))
    assert rep.positive


def test_thm1_bound_vacuous_at_desk_scale(h3):
    rep = rgd.thm1_bound(h3, 1, 3)
    assert rep.rtilde == 28
    assert not rep.positive


def test_walsh_hadamard_bound_agrees_with_thm1():
    H = rgd.walsh_hadamard(4)
    exp = rgd.thm1_bound(H, 1, 2).bound
    obs = rgd.walsh_hadamard_bound(4, 1, 2).bound
    assert obs == pytest.approx(exp, rel=1e-9)


def test_walsh_hadamard_bound_becomes_positive():
    assert not rgd.walsh_hadamard_bound(20, 1, 2).positive
    assert rgd.walsh_hadamard_bound(40, 1, 2).positive


def test_distance_bound_uses_closed_form():
    rep = rgd.distance_bound(6, 0, 3)
    assert rep.sigma1 == rgd.hamming_sigma(6)
    assert rep.N == 64


def test_kron_lb_constants(h1):
    c1, c2 = rgd.kron_lb_constants(h1, 3)
    assert c1 > 0 and c2 <= 1 - 1e-6
    # c1 is the largest value on its grid
    log_c = 2 * math.log(rgd.entry_bound_base(3)) + math.log(28)
    denom = round(1 / c1) if c1 < 1 / 64 else 64
    assert math.exp((c1 + 1 / denom) * log_c) * math.sqrt(2) / 2 > 1 - 1e-6


def test_kron_lb_constants_rank_one():
    with pytest.raises(PreconditionError, match="rank-1"):
        rgd.kron_lb_constants(rgd.named_matrix("ones2"), 3)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_thm1_bound_non_increasing_in_rank(p):
    H = rgd.walsh_hadamard(2)
    bounds = [rgd.thm1_bound(H, r, p).bound for r in range(4)]
    assert all(a >= b for a, b in zip(bounds, bounds[1:]))


def test_kron_lb_constants_are_sound(h1):
    c1, c2 = rgd.kron_lb_constants(h1, 3)
    n = 2
    lower = 2 ** (2 * n) * (0.5 - c2**n)
    exact = rgd.exact_boolean_rigidity(rgd.kron_power(h1, n), math.floor(c1 * n), 3)
    assert lower <= exact.value


def test_kron_lb_constants_sigma_near_q(h1, monkeypatch):
    monkeypatch.setattr(spectral, "sigma_lt_q_check", lambda A: (A.rows - 1e-8, True))
    with pytest.raises(PreconditionError, match="no positive c1"):
        rgd.kron_lb_constants(h1, 3)
