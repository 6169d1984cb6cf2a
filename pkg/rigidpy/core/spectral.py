"""
Largest singular values, the closed-form spectrum of the distance matrix, and
rigidity lower bounds derived from the largest singular value.
"""
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

import rigidpy.core.validate_inputs as val
from rigidpy.core.exceptions import PreconditionError
from rigidpy.core.lift import entry_bound_base, lifted_rank
from rigidpy.core.matrices import SignMatrix, bit_count64

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10**4
MAX_DISTANCE_N = 24
MAX_DIRECT_N = 14
# largest N whose Gram spectrum is computed to check power iteration
EXACT_GRAM_MAX = 512
CROSS_CHECK_RTOL = 1e-9
RANDOM_START_SEED = 0
MAX_C1_DENOMINATOR = 2**60


@dataclass(frozen=True)
class SpectralReport:
    """
    Largest singular value with the diagnostics of the method that produced it.

    `method` is "power-iteration", or "exact-gram" when the exact Gram
    spectrum corrected the iteration. For power iteration `residual` is the
    relative change of the Rayleigh quotient at the last step.
    """

    sigma1: float
    method: str
    iterations: int = 0
    residual: float = 0.0
    converged: bool = True


@dataclass(frozen=True)
class BoundReport:
    """
    Evaluated rigidity lower bound N^2 (1/2 - sigma1 C^(2r) rtilde / (2N)).
    """

    r: int
    p: int
    C: float
    rtilde: int
    sigma1: float
    N: int
    bound: float
    positive: bool


def _as_float_matrix(A):
    if isinstance(A, SignMatrix):
        return A.values.astype(np.float64)
    return np.asarray(A, dtype=np.float64)


def _gram_power(M, x0, tol, max_iter):
    x = x0 / np.linalg.norm(x0)
    lam, resid = 0.0, np.inf
    for it in range(1, max_iter + 1):
        z = M.T @ (M @ x)
        znorm = np.linalg.norm(z)
        if znorm == 0:
            return 0.0, it, 0.0, True
        new = float(x @ z)
        resid = abs(new - lam) / new
        x = z / znorm
        lam = new
        if resid <= tol:
            return lam, it, resid, True
    return lam, max_iter, resid, False


def largest_singular_value(A, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """
    Largest singular value by power iteration on the Gram matrix A^T A.

    The iteration runs from the all-ones vector and again from a seeded random
    vector, and the larger Rayleigh quotient wins. The all-ones vector can lie
    in a lower eigenspace (for M_n with n odd it is in the kernel), where the
    quotient converges to the wrong eigenvalue. For N <= 512 the result is
    checked against the exact Gram spectrum; if that is larger, it is
    reported with method "exact-gram".

    Parameters
    ----------
    A : SignMatrix or array-like
    tol : float, default 1e-12
        Relative change of the Rayleigh quotient that counts as converged.
    max_iter : int, default 10**4

    Returns
    -------
    SpectralReport

    Examples
    --------
    >>> rep = rgd.largest_singular_value(rgd.walsh_hadamard(1))
    >>> round(rep.sigma1 ** 2, 9), rep.converged
    (2.0, True)
    """
    M = _as_float_matrix(A)
    cols = M.shape[1]
    lam, its, resid, ok = _gram_power(M, np.ones(cols), tol, max_iter)
    start = np.random.default_rng(RANDOM_START_SEED).standard_normal(cols)
    lam2, its2, resid2, ok2 = _gram_power(M, start, tol, max_iter)
    its += its2
    if lam2 > lam:
        lam, resid, ok = lam2, resid2, ok2

    if cols <= EXACT_GRAM_MAX:
        exact = float(np.linalg.eigvalsh(M.T @ M)[-1])
        if exact > lam * (1 + CROSS_CHECK_RTOL) + CROSS_CHECK_RTOL:
            log.debug("power iteration gave %.12g, exact Gram spectrum %.12g", lam, exact)
            return SpectralReport(math.sqrt(max(exact, 0.0)), "exact-gram", its, 0.0, True)

    if not ok:
        warnings.filterwarnings("always")
        warnings.warn(
            "Power iteration did not converge after {0} iterations (residual {1:.3g})".format(
                its, resid
            )
        )
    log.debug("power iteration: %d iterations, residual %.3g", its, resid)
    return SpectralReport(math.sqrt(max(lam, 0.0)), "power-iteration", its, resid, ok)


def kron_sigma(A, n):
    """
    Largest singular value of the Kronecker power A^n, as sigma1(A)^n.

    Examples
    --------
    >>> round(rgd.kron_sigma(rgd.walsh_hadamard(1), 4), 9)
    4.0
    >>> rgd.kron_sigma(rgd.walsh_hadamard(1), 0)
    1.0
    """
    n = val.nonneg_int(n, "The power")
    if n == 0:
        return 1.0
    return largest_singular_value(A).sigma1**n


def sigma_lt_q_check(A):
    """
    Check that sigma1 of a q x q sign matrix is strictly below q.

    Returns
    -------
    tuple of (float, bool)
        sigma1 and whether sigma1 < q - 1e-9, which holds iff rank(A) > 1.
    """
    assert A.rows == A.cols, "The matrix must be square"
    q = A.rows
    sigma1 = largest_singular_value(A).sigma1
    strict = sigma1 < q - 1e-9
    rank = np.linalg.matrix_rank(A.values.astype(np.float64))
    assert strict == (rank > 1), "sigma1 < q must hold exactly when rank > 1"
    return sigma1, strict


# ----------------------------------------------------------------------
# spectrum of the distance matrix


def _krawtchouk(n, w, j):
    return sum(
        (-1) ** i * math.comb(j, i) * math.comb(n - j, w - i) for i in range(min(j, w) + 1)
    )


def distance_eigenvalues(n):
    """
    Eigenvalues of the distance matrix M_n, keyed by the Hamming weight of y.

    The eigenvector for y is v_y[x] = (-1)^<y, x>, with eigenvalue
    sum_w s_w K_w(|y|), where s_w = +1 for w <= n/2 and -1 otherwise and K_w
    is the Krawtchouk character sum over weight-w strings.

    Examples
    --------
    >>> rgd.distance_eigenvalues(2)
    {0: 2, 1: 2, 2: -2}
    """
    n = val.positive_int(n, "The dimension")
    assert n <= MAX_DISTANCE_N, "The dimension must be at most {0}".format(MAX_DISTANCE_N)
    signs = [1 if 2 * w <= n else -1 for w in range(n + 1)]
    return {
        j: sum(s * _krawtchouk(n, w, j) for w, s in enumerate(signs)) for j in range(n + 1)
    }


def distance_eigenvalues_direct(n):
    """
    The same eigenvalues by summing over all 2^n strings z (n <= 14).
    """
    n = val.positive_int(n, "The dimension")
    assert n <= MAX_DIRECT_N, "Direct summation supports dimensions up to {0}".format(
        MAX_DIRECT_N
    )
    z = np.arange(2**n, dtype=np.uint64)
    s = np.where(2 * bit_count64(z) <= n, 1, -1)
    out = {}
    for j in range(n + 1):
        y = np.uint64((1 << j) - 1)
        chars = 1 - 2 * (bit_count64(z & y) % 2)
        out[j] = int((s * chars).sum())
    return out


def distance_spectrum(n):
    """
    Full sorted eigenvalue multiset of M_n (weight j repeated binom(n, j) times).
    """
    eig = distance_eigenvalues(n)
    return np.sort(np.repeat([eig[j] for j in range(n + 1)], [math.comb(n, j) for j in range(n + 1)]))


def hamming_sigma(n):
    """
    Largest singular value of M_n from its closed-form spectrum.

    Checks the central-binomial bounds on each eigenvalue along the way.

    Examples
    --------
    >>> rgd.hamming_sigma(2)
    2.0
    """
    eig = distance_eigenvalues(n)
    assert abs(eig[0]) <= math.comb(n, n // 2), "Eigenvalue at y = 0 exceeds its bound"
    central = sum(
        math.comb(n, w) for w in range(n + 1) if n / 2 - 1 <= w <= n / 2 + 1
    )
    assert all(abs(eig[j]) <= central for j in range(1, n + 1)), (
        "Eigenvalue at y != 0 exceeds its bound"
    )
    return float(max(abs(v) for v in eig.values()))


# ----------------------------------------------------------------------
# rigidity lower bounds


def _bound(N, sigma1, r, p):
    C = entry_bound_base(p)
    rtilde = lifted_rank(p, r)
    log_term = (
        math.log(sigma1) + 2 * r * math.log(C) + math.log(rtilde) - math.log(2 * N)
        if sigma1 > 0
        else -math.inf
    )
    # beyond exp(700) the bound is vacuous anyway
    term = math.exp(log_term) if log_term < 700 else math.inf
    bound = N * N * (0.5 - term)
    return BoundReport(r, p, C, rtilde, sigma1, N, bound, bound > 0)


def thm1_bound(A, r, p, sigma1=None):
    """
    Rigidity lower bound N^2 (1/2 - sigma1 C^(2r) rtilde / (2N)) for an N x N sign matrix.

    C is `entry_bound_base(p)` and rtilde = (p^3 + 1)^r. A non-positive bound is
    vacuous and flagged with positive=False.

    Parameters
    ----------
    A : SignMatrix
    r : int
        Rank.
    p : int
        Prime modulus.
    sigma1 : float, optional
        Precomputed largest singular value of A.

    Examples
    --------
    >>> rep = rgd.thm1_bound(rgd.walsh_hadamard(1), 0, 3)
    >>> round(rep.bound, 3), rep.positive
    (0.586, True)
    """
    p = val.prime(p)
    r = val.nonneg_int(r, "The rank")
    assert A.rows == A.cols, "The matrix must be square"
    if sigma1 is None:
        sigma1 = largest_singular_value(A).sigma1
    return _bound(A.rows, sigma1, r, p)


def walsh_hadamard_bound(n, r, p):
    """
    The same bound for H_n, with sigma1 = 2^(n/2) and N = 2^n, without building H_n.
    """
    p = val.prime(p)
    r = val.nonneg_int(r, "The rank")
    return _bound(2**n, 2 ** (n / 2), r, p)


def distance_bound(n, r, p):
    """
    The same bound for M_n, with sigma1 from the closed-form spectrum.
    """
    p = val.prime(p)
    r = val.nonneg_int(r, "The rank")
    return _bound(2**n, hamming_sigma(n), r, p)


def kron_lb_constants(A, p):
    """
    Constants (c1, c2) of the Kronecker-power rigidity bound for a base matrix A.

    With c = C^2 (p^3 + 1), c1 is the largest k/64 (k >= 1) such that
    c2 = c^c1 sigma1 / q <= 1 - 1e-6. When no k >= 1 works the search continues
    on the dyadic grid 1/128, 1/256, ...

    Returns
    -------
    tuple of (float, float)

    Examples
    --------
    >>> c1, c2 = rgd.kron_lb_constants(rgd.walsh_hadamard(1), 3)
    >>> c1 > 0 and c2 < 1
    True
    """
    p = val.prime(p)
    sigma1, strict = sigma_lt_q_check(A)
    if not strict:
        raise PreconditionError("sigma1 = q, no valid c1 exists for a rank-1 base")
    q = A.rows
    log_c = 2 * math.log(entry_bound_base(p)) + math.log(p**3 + 1)
    limit = (math.log(1 - 1e-6) + math.log(q) - math.log(sigma1)) / log_c
    if limit <= 0:
        raise PreconditionError(
            "sigma1 = {0:.9g} is within 1e-6 of q = {1}, no positive c1 exists".format(sigma1, q)
        )
    denom = 64
    while denom <= MAX_C1_DENOMINATOR:
        k = math.floor(limit * denom)
        while k >= 1 and math.exp(k / denom * log_c) * sigma1 / q > 1 - 1e-6:
            k -= 1
        if k >= 1:
            c1 = k / denom
            return c1, math.exp(c1 * log_c) * sigma1 / q
        denom *= 2
    raise PreconditionError("No c1 >= 1/{0} satisfies c2 <= 1 - 1e-6".format(MAX_C1_DENOMINATOR))
