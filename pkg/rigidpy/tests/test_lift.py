import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

import rigidpy as rgd
from rigidpy.core.exceptions import CapExceededError, DegenerateModulusError
from rigidpy.core.lift import lifted_rank, pow_mod, rescaled_g


def _random_instances(p, r, N, count):
    rng = np.random.default_rng(1000 * p + 100 * r + N)
    return [rgd.LowRankFp.random(r, N, p, rng) for _ in range(count)]


########## expansion ##########
@pytest.mark.parametrize("p", [2, 3, 5])
def test_build_F_reproduces_booleanization(p):
    F = rgd.build_F(p, 1)
    assert len(F) == lifted_rank(p, 1)
    for u, v in itertools.product(range(p), repeat=2):
        exp = 1 if (u * v) % p == 1 else -1
        assert F.evaluate([u * v]) == exp


def test_build_F_two_variables():
    p = 3
    F = rgd.build_F(p, 2)
    for u1, u2, v1, v2 in itertools.product(range(p), repeat=4):
        exp = 1 if (u1 * v1 + u2 * v2) % p == 1 else -1
        assert F.evaluate([u1 * v1, u2 * v2]) == exp


def test_build_F_is_cached():
    assert rgd.build_F(3, 1) is rgd.build_F(3, 1)


def test_build_F_cap():
    with pytest.raises(CapExceededError, match="784 exceeds the cap of 100"):
        rgd.build_F(3, 2, cap=100)


def test_build_F_zero_rank():
    with pytest.raises(AssertionError, match="The rank must be positive"):
        rgd.build_F(3, 0)


def test_rescaled_g_nodes():
    p = 3
    g = rgd.interpolate_g(p)
    gh = rescaled_g(p)
    s = p - 1
    for u, v in itertools.product(range(p), repeat=2):
        assert gh(Fraction(u * v, s**2)) == g(u * v)


def test_entry_bound_base_grows_with_p():
    assert rgd.entry_bound_base(2) < rgd.entry_bound_base(3) < rgd.entry_bound_base(5)


########## lift_to_c ##########
@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_lift_exactness(p, r, N):
    bound = rgd.entry_bound_base(p) ** r + 1e-6
    for L in _random_instances(p, r, N, 10):
        lifted = rgd.lift_to_c(L)
        assert lifted.rtilde == (p**3 + 1) ** r
        assert lifted.matches_booleanization()
        assert lifted.max_entry_magnitude() <= bound


def test_lift_numerical_rank():
    L = _random_instances(3, 1, 6, 1)[0]
    lifted = rgd.lift_to_c(L)
    obs = np.linalg.matrix_rank(lifted.to_complex(), tol=1e-8)
    assert obs <= lifted.rtilde
    target = rgd.booleanize(L.materialize()).values.astype(float)
    assert np.allclose(lifted.to_complex(), target, atol=1e-9)


def test_lift_factor_entries_reproduce_product():
    ones = rgd.FpMatrix([[1, 2]], 3)
    lifted = rgd.lift_to_c(rgd.LowRankFp(ones, ones))
    for i, j in itertools.product(range(2), repeat=2):
        assert lifted.product_entry(i, j) == lifted.product()[i][j]


def test_lift_vtilde_in_unit_interval():
    L = _random_instances(3, 1, 4, 1)[0]
    lifted = rgd.lift_to_c(L)
    for t in range(lifted.rtilde):
        for j in range(4):
            v = rgd.complex_embed(lifted.vtilde(t, j))
            assert 0 <= v.real <= 1 and v.imag == 0


def test_lift_of_rank_zero():
    L = rgd.LowRankFp.from_matrix(rgd.FpMatrix.zeros(3, 3, 3))
    lifted = rgd.lift_to_c(L)
    assert lifted.matches_booleanization()
    assert all(e == -1 for row in lifted.product() for e in row)


def test_lift_rejects_dense_matrix():
    with pytest.raises(TypeError, match="LowRankFp"):
        rgd.lift_to_c(rgd.FpMatrix.identity(2, 3))


def test_lift_cap():
    L = _random_instances(3, 2, 6, 1)[0]
    with pytest.raises(CapExceededError):
        rgd.lift_to_c(L, cap=1000)


########## Boolean to regular ##########
@pytest.mark.parametrize("r, p, exp", [(1, 3, 3), (2, 3, 6), (1, 5, 5), (2, 5, 15)])
def test_boolean_to_regular_rank(r, p, exp):
    assert rgd.boolean_to_regular_rank(r, p) == exp


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("N", [2, 4, 6])
def test_booleanize_lowrank_fp(p, r, N):
    for L in _random_instances(p, r, N, 5):
        reg = rgd.booleanize_lowrank_fp(L)
        M = reg.materialize()
        assert reg.r == math.comb(r + p - 1, p - 1)
        assert rgd.fp_rank(M) <= rgd.boolean_to_regular_rank(r, p)
        assert rgd.booleanize(M) == rgd.booleanize(L.materialize())
        # entries are exact sign residues
        assert set(np.unique(M.values)) <= {1, p - 1}


def test_booleanize_lowrank_fp_rejects_f2():
    L = rgd.LowRankFp(rgd.FpMatrix([[1, 0]], 2), rgd.FpMatrix([[1, 1]], 2))
    with pytest.raises(DegenerateModulusError, match="p >= 3"):
        rgd.booleanize_lowrank_fp(L)


def test_pow_mod():
    x = np.array([0, 1, 2, 3, 4])
    assert pow_mod(x, 4, 5).tolist() == [0, 1, 1, 1, 1]
    assert pow_mod(x, 0, 5).tolist() == [1, 1, 1, 1, 1]
