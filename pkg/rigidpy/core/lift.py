"""
Low-rank lifts: a rank-r matrix over F_p becomes a bounded-entry decomposition
over Q(w_p) of its Booleanization, and a Boolean approximation becomes a regular
one through the polynomial 1 - 2 (x - 1)^(p-1).
"""
import functools
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

import rigidpy.core.validate_inputs as val
from rigidpy.core.exceptions import CapExceededError, DegenerateModulusError
from rigidpy.core.field import (
    CycloElement,
    CycloPolynomial,
    complex_embed,
    interpolate_f,
    interpolate_g,
    l1_norm,
)
from rigidpy.core.matrices import FpMatrix, LowRankFp, booleanize

log = logging.getLogger(__name__)

# default cap on the number of monomials of an expansion
DEFAULT_TERM_CAP = 10**6


def lifted_rank(p, r):
    """
    Size (p^3 + 1)^r of the exponent set of the lift.

    Examples
    --------
    >>> rgd.core.lift.lifted_rank(2, 1), rgd.core.lift.lifted_rank(3, 2)
    (9, 784)
    """
    return (p**3 + 1) ** r


@functools.lru_cache(maxsize=None)
def rescaled_g(p):
    """
    g evaluated on a rescaled variable, x -> g((p-1)^2 x).

    Its nodes are the products u v / (p-1)^2 of normalized residues, which keeps
    the right factor of the lift bounded by 1.
    """
    return interpolate_g(p).rescale_variable((p - 1) ** 2)


@functools.lru_cache(maxsize=None)
def entry_bound_base(p):
    """
    The base C with every lifted factor entry bounded by C^r in magnitude.

    C = l1(f) * l1(g_hat)^p where g_hat is the rescaled interpolation polynomial.

    Examples
    --------
    >>> round(rgd.entry_bound_base(2), 6)
    225.0
    """
    p = val.prime(p)
    return l1_norm(interpolate_f(p)) * l1_norm(rescaled_g(p)) ** p


# ----------------------------------------------------------------------
# monomial expansion of F = f o G


@dataclass(frozen=True, eq=False)
class MonomialExpansion:
    """
    Monomial expansion of F(z_1, ..., z_r) = f(g(z_1) ... g(z_r)).

    Exponent vectors run over [p^3 + 1]^r in lexicographic order; `coeffs[t]`
    is the exact coefficient of z^exponents[t].
    """

    p: int
    r: int
    exponents: np.ndarray = field(repr=False)
    coeffs: tuple = field(repr=False)

    def __len__(self):
        return len(self.coeffs)

    @property
    def term_count(self):
        return len(self.coeffs)

    @functools.cached_property
    def _integer_form(self):
        # common denominator and integer numerators over the nonzero support
        support = [t for t, c in enumerate(self.coeffs) if not c.is_zero]
        denom = 1
        for t in support:
            for c in self.coeffs[t].coeffs:
                denom = math.lcm(denom, c.denominator)
        nums = np.empty((len(support), self.p), dtype=object)
        for row, t in enumerate(support):
            nums[row] = [int(c * denom) for c in self.coeffs[t].coeffs]
        return denom, np.array(support, dtype=np.int64), nums

    def evaluate(self, z):
        """
        Exact value of sum_alpha C_alpha z^alpha at an integer point z.
        """
        return self.evaluate_many([z])[0]

    def evaluate_many(self, points):
        """
        Exact values at a list of integer points, sharing one big-integer product.
        """
        denom, support, nums = self._integer_form
        exps = self.exponents[support]
        top = self.exponents.max() if len(self.exponents) else 0
        weights = np.empty((len(points), len(support)), dtype=object)
        for row, z in enumerate(points):
            assert len(z) == self.r, "Points must have one coordinate per variable"
            w = np.ones(len(support), dtype=object)
            for k, zk in enumerate(z):
                powers = np.array([int(zk) ** e for e in range(top + 1)], dtype=object)
                w = w * powers[exps[:, k]]
            weights[row] = w
        sums = weights.dot(nums) if len(support) else np.zeros((len(points), self.p), dtype=object)
        return [
            CycloElement([Fraction(int(s), denom) for s in row], self.p) for row in sums
        ]


@functools.lru_cache(maxsize=None)
def _expand_F(p, r):
    f = interpolate_f(p)
    g = interpolate_g(p)
    powers = [CycloPolynomial([1], p)]
    for _ in range(1, p):
        powers.append(powers[-1] * g)
    width = p**3 + 1
    exponents = np.array(list(itertools.product(range(width), repeat=r)), dtype=np.int64)
    zero = CycloElement.zero(p)
    coeffs = []
    for alpha in exponents:
        c = zero
        for m, h in enumerate(powers):
            fm = f.coefficient(m)
            if fm.is_zero or any(a > h.degree for a in alpha):
                continue
            term = fm
            for a in alpha:
                term = term * h.coefficient(int(a))
                if term.is_zero:
                    break
            c = c + term
        coeffs.append(c)
    log.debug("expanded F for p=%d, r=%d into %d monomials", p, r, len(coeffs))
    exponents.setflags(write=False)
    return MonomialExpansion(p, r, exponents, tuple(coeffs))


def build_F(p, r, cap=DEFAULT_TERM_CAP):
    """
    Expand F = f o G, G(z) = g(z_1) ... g(z_r), into monomials with exact coefficients.

    For all u, v in [p]^r, F(u_1 v_1, ..., u_r v_r) = bool(<u, v> mod p).
    Expansions are cached per (p, r).

    Parameters
    ----------
    p : int
        Prime modulus.
    r : int
        Number of variables (the rank being lifted).
    cap : int, default 10**6
        Largest allowed number of monomials.

    Examples
    --------
    >>> F = rgd.build_F(2, 1)
    >>> len(F)
    9
    >>> [F.evaluate([u * v]) == (1 if u * v % 2 == 1 else -1) for u in (0, 1) for v in (0, 1)]
    [True, True, True, True]
    """
    p = val.prime(p)
    r = val.positive_int(r, "The rank")
    terms = lifted_rank(p, r)
    if terms > cap:
        raise CapExceededError(terms, cap, "Monomial expansion too large")
    return _expand_F(p, r)


# ----------------------------------------------------------------------
# lift to Q(w)


class LowRankCyclo:
    """
    Decomposition Utilde^T Vtilde over Q(w_p) of bool(U^T V), from a source LowRankFp.

    With s = p - 1 and S(alpha) = s^|alpha|, the factors are
    Utilde[alpha, i] = C_alpha S(alpha) u_i^alpha and
    Vtilde[alpha, j] = v_j^alpha / S(alpha), so every Vtilde entry lies in [0, 1]
    and every Utilde entry is bounded by a coefficient of the rescaled expansion.
    """

    def __init__(self, expansion, origin):
        self._expansion = expansion
        self._origin = origin
        self._s = origin.p - 1

    # ----------------------------------------------------------------------
    # Properties

    @property
    def origin(self):
        return self._origin

    @property
    def expansion(self):
        return self._expansion

    @property
    def rtilde(self):
        return len(self._expansion)

    @property
    def p(self):
        return self._origin.p

    @property
    def shape(self):
        return self._origin.shape

    def _alpha(self, t):
        return self._expansion.exponents[t]

    def utilde(self, t, i):
        """Entry Utilde[t, i] as an exact cyclotomic element."""
        alpha = self._alpha(t)
        u = self._origin.U.values[:, i]
        mono = math.prod(int(uk) ** int(a) for uk, a in zip(u, alpha))
        return self._expansion.coeffs[t].scale(mono * self._s ** int(alpha.sum()))

    def vtilde(self, t, j):
        """Entry Vtilde[t, j] as an exact cyclotomic (rational) element."""
        alpha = self._alpha(t)
        v = self._origin.V.values[:, j]
        mono = math.prod(int(vk) ** int(a) for vk, a in zip(v, alpha))
        return CycloElement.constant(Fraction(mono, self._s ** int(alpha.sum())), self.p)

    def product_entry(self, i, j):
        """Entry (i, j) of Utilde^T Vtilde, summed term by term."""
        total = CycloElement.zero(self.p)
        for t in range(self.rtilde):
            total = total + self.utilde(t, i) * self.vtilde(t, j)
        return total

    def product(self):
        """
        Exact product Utilde^T Vtilde as a nested list of CycloElement.

        The scale factors S(alpha) cancel termwise, so entry (i, j) is the
        expansion evaluated at z = (u_ik v_jk)_k; entries sharing z are computed once.
        """
        U, V = self._origin.U.values, self._origin.V.values
        rows, cols = self.shape
        points = {}
        for i in range(rows):
            for j in range(cols):
                points.setdefault(tuple(int(x) for x in U[:, i] * V[:, j]), []).append((i, j))
        keys = list(points)
        values = self._expansion.evaluate_many(keys)
        out = [[None] * cols for _ in range(rows)]
        for key, value in zip(keys, values):
            for i, j in points[key]:
                out[i][j] = value
        return out

    def matches_booleanization(self):
        """True iff the exact product equals bool(U^T V) entrywise."""
        target = booleanize(self._origin.materialize()).values
        prod = self.product()
        return all(
            prod[i][j] == int(target[i, j])
            for i in range(target.shape[0])
            for j in range(target.shape[1])
        )

    def to_complex(self):
        """The exact product embedded into a complex matrix."""
        return np.array([[complex_embed(e) for e in row] for row in self.product()])

    @np.errstate(divide="ignore", invalid="ignore")
    def max_entry_magnitude(self):
        """
        Largest embedded magnitude over all entries of Utilde and Vtilde.
        """
        exps = self._expansion.exponents.astype(float)
        log_s = math.log(self._s) if self._s > 1 else 0.0
        mags = np.array([abs(complex_embed(c)) for c in self._expansion.coeffs])
        live = mags > 0
        log_u = np.log(self._origin.U.values.T.astype(float))
        log_v = np.log(self._origin.V.values.T.astype(float))

        def log_monomials(log_x):
            # entry (t, i) of sum_k alpha_k log x_ik, with 0^0 = 1
            terms = np.where(exps[:, None, :] > 0, exps[:, None, :] * log_x[None, :, :], 0.0)
            return terms.sum(axis=2)

        scale = exps.sum(axis=1) * log_s
        best_u = -np.inf
        if live.any():
            log_mags = np.log(mags[live])
            best_u = np.max(log_mags[:, None] + scale[live, None] + log_monomials(log_u)[live])
        best_v = np.max(log_monomials(log_v) - scale[:, None])
        return float(math.exp(max(best_u, best_v)))


def lift_to_c(L, cap=DEFAULT_TERM_CAP):
    """
    Lift a rank-r decomposition over F_p to a decomposition of bool(L) over Q(w_p).

    The result has (p^3 + 1)^r terms and entries bounded by
    `entry_bound_base(p) ** r` in magnitude.

    Parameters
    ----------
    L : LowRankFp
    cap : int, default 10**6
        Largest allowed number of terms times columns.

    Examples
    --------
    >>> ones = rgd.FpMatrix([[1, 1, 1]], 3)
    >>> lifted = rgd.lift_to_c(rgd.LowRankFp(ones, ones))
    >>> lifted.rtilde, lifted.matches_booleanization()
    (28, True)
    """
    if not isinstance(L, LowRankFp):
        raise TypeError("Please enter the matrix as a LowRankFp decomposition")
    r = max(L.r, 1)
    if L.r == 0:
        L = LowRankFp(FpMatrix.zeros(1, L.shape[0], L.p), FpMatrix.zeros(1, L.shape[1], L.p))
    size = lifted_rank(L.p, r) * max(L.shape)
    if size > cap:
        raise CapExceededError(size, cap, "Lifted decomposition too large")
    return LowRankCyclo(build_F(L.p, r, cap=cap), L)


# ----------------------------------------------------------------------
# Boolean to regular rank


def boolean_to_regular_rank(r, p):
    """
    Rank bound binom(r + p - 1, p - 1) of the regular matrix built from a rank-r Boolean one.

    Examples
    --------
    >>> rgd.boolean_to_regular_rank(1, 3), rgd.boolean_to_regular_rank(2, 5)
    (3, 15)
    """
    return math.comb(r + p - 1, p - 1)


def booleanize_lowrank_fp(L, cap=DEFAULT_TERM_CAP):
    """
    Decomposition of the matrix with entries bool(L[i, j]) read in F_p (+1 -> 1, -1 -> p-1).

    Uses bool(x) = 1 - 2 (x - 1)^(p-1). Writing L[i, j] - 1 as the inner product of
    u'_i = (u_i, p-1) and v'_j = (v_j, 1) and expanding the power gives one term per
    exponent vector on r + 1 variables of total degree p - 1.

    Parameters
    ----------
    L : LowRankFp
        Decomposition over F_p, p >= 3.

    Returns
    -------
    LowRankFp
        Decomposition with binom(r + p - 1, p - 1) rows.

    Examples
    --------
    >>> U = rgd.FpMatrix([[1, 2, 0]], 3)
    >>> lifted = rgd.booleanize_lowrank_fp(rgd.LowRankFp(U, U))
    >>> lifted.r
    3
    >>> rgd.booleanize(lifted.materialize()) == rgd.booleanize(rgd.LowRankFp(U, U).materialize())
    True
    """
    p = L.p
    if p == 2:
        raise DegenerateModulusError(
            "The Boolean-to-regular lift needs p >= 3; signs are degenerate over F_2"
        )
    terms = boolean_to_regular_rank(L.r, p)
    if terms > cap:
        raise CapExceededError(terms, cap, "Polynomial-method expansion too large")
    U = np.vstack([L.U.values, np.full((1, L.shape[0]), p - 1)])
    V = np.vstack([L.V.values, np.ones((1, L.shape[1]), dtype=np.int64)])
    nvars = L.r + 1
    alphas = [
        a for a in itertools.product(range(p), repeat=nvars) if sum(a) == p - 1
    ]
    fact = math.factorial(p - 1)
    Ut = np.empty((len(alphas), U.shape[1]), dtype=np.int64)
    Vt = np.empty((len(alphas), V.shape[1]), dtype=np.int64)
    for row, alpha in enumerate(alphas):
        multinom = fact // math.prod(math.factorial(a) for a in alpha)
        coeff = -2 * multinom
        if alpha[-1] == p - 1:
            # this monomial is the constant (p-1)^(p-1) = 1; fold in the leading 1
            coeff += 1
        mono_u = np.ones(U.shape[1], dtype=np.int64)
        mono_v = np.ones(V.shape[1], dtype=np.int64)
        for k, a in enumerate(alpha):
            mono_u = mono_u * pow_mod(U[k], a, p) % p
            mono_v = mono_v * pow_mod(V[k], a, p) % p
        Ut[row] = (coeff * mono_u) % p
        Vt[row] = mono_v
    return LowRankFp(FpMatrix(Ut, p), FpMatrix(Vt, p))


def pow_mod(x, e, p):
    """Entrywise x**e mod p for an integer array."""
    out = np.ones_like(x)
    for _ in range(e):
        out = (out * x) % p
    return out
