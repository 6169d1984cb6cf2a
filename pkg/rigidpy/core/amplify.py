"""
Rigidity upper bounds by amplification.

Kronecker powers are approximated by feeding the entries of a low-rank base
approximation through the seeded affine form pi_a(z) = 1 + sum_i a_i (z_i - 1)
over F_p. Majority powers are approximated by reading only a length-k prefix
of each index. Both come with exact error formulas to compare against.
"""
import concurrent.futures
import itertools
import logging
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from tqdm import tqdm

import rigidpy.core.validate_inputs as val
from rigidpy.core.exceptions import (
    BudgetExceededError,
    CapExceededError,
    FieldMismatchError,
    PreconditionError,
)
from rigidpy.core.field import FpScalar
from rigidpy.core.matrices import (
    DEFAULT_CAP,
    FpMatrix,
    LowRankFp,
    SignMatrix,
    _digits,
    boolean_preimage,
    fp_rank,
    kron_power_entries,
    maj_power_entries,
)

log = logging.getLogger(__name__)

# largest q^(2n) counted entry by entry
EXHAUSTIVE_ENTRY_CAP = 10**8
# largest p^n scanned seed by seed
EXHAUSTIVE_SEED_CAP = 10**6
DEFAULT_SAMPLES = 10**6
DEFAULT_SEED_SAMPLES = 10**4
SEED_BUDGET = 10**10
# rows of a power counted per block
ROW_BLOCK = 256


# ----------------------------------------------------------------------
# the seeded affine form


def pi_tilde_eval(a, z, p):
    """
    Evaluate 1 + sum_i a_i (z_i - 1) mod p.

    Parameters
    ----------
    a : sequence of int
        Seed in F_p^n.
    z : sequence of int
        Point in F_p^n.
    p : int
        Prime modulus.

    Returns
    -------
    FpScalar

    Examples
    --------
    >>> rgd.pi_tilde_eval([1], [2], 3)
    FpScalar(value=2, p=3)
    >>> rgd.pi_tilde_eval([2, 1], [1, 1], 3).value
    1
    """
    p = val.prime(p)
    a = val.residues(a, p, "seed")
    z = val.residues(z, p, "point")
    if len(a) != len(z):
        raise ValueError(
            "The seed has length {0} but the point has length {1}".format(len(a), len(z))
        )
    return FpScalar((1 + sum(ai * (zi - 1) for ai, zi in zip(a, z))) % p, p)


def _all_seeds(p, n):
    return np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64).reshape(
        p**n, n
    )


def seed_success_prob(z, p):
    """
    Probability over a uniform seed that bool(pi_a(z)) = +1.

    It is 1 when z is all ones and 1/p otherwise. Small cases are also counted
    over every seed and checked against that.

    Examples
    --------
    >>> rgd.seed_success_prob([1, 1, 1], 3)
    Fraction(1, 1)
    >>> rgd.seed_success_prob([2, 1], 3)
    Fraction(1, 3)
    """
    p = val.prime(p)
    z = val.residues(z, p, "point")
    closed = Fraction(1) if all(zi == 1 for zi in z) else Fraction(1, p)
    n = len(z)
    if p**n <= EXHAUSTIVE_SEED_CAP:
        seeds = _all_seeds(p, n)
        values = (1 + seeds @ (np.array(z, dtype=np.int64) - 1)) % p
        counted = Fraction(int(np.count_nonzero(values == 1)), p**n)
        assert counted == closed, "Seed enumeration disagrees with the closed form"
    return closed


# ----------------------------------------------------------------------
# Kronecker amplification


class KronApproximant:
    """
    Implicit approximation of a Kronecker power from a low-rank base approximation.

    Entry (x, y) is pi_a(L[x_1, y_1], ..., L[x_n, y_n]) with x_i, y_i the
    base-q digits of x and y.

    Parameters
    ----------
    base : LowRankFp
        q x q approximation, rank r.
    seed : tuple of int
        The seed a in F_p^n.
    n : int
        Power.
    """

    def __init__(self, base, seed, n):
        assert base.shape[0] == base.shape[1], "The base approximation must be square"
        self._base = base
        self._n = val.nonneg_int(n, "The power")
        self._seed = val.residues(seed, base.p, "seed")
        assert len(self._seed) == self._n, "The seed must have one entry per power"
        self._table = base.materialize().values

    # ----------------------------------------------------------------------
    # Properties

    @property
    def base(self):
        return self._base

    @property
    def seed(self):
        return self._seed

    @property
    def n(self):
        return self._n

    @property
    def p(self):
        return self._base.p

    @property
    def q(self):
        return self._base.shape[0]

    @property
    def size(self):
        return self.q**self._n

    @property
    def rank_bound(self):
        """n r + 1."""
        return self._n * self._base.r + 1

    # ----------------------------------------------------------------------
    # Methods

    def entries(self, xs, ys):
        """Residues of the approximation at index arrays (xs, ys)."""
        shape = np.broadcast(np.asarray(xs), np.asarray(ys)).shape
        total = np.ones(shape, dtype=np.int64)
        for ai, dx, dy in zip(self._seed, _digits(xs, self.q, self._n), _digits(ys, self.q, self._n)):
            if ai:
                total = total + ai * (self._table[dx, dy] - 1)
        return total % self.p

    def materialize(self, cap=DEFAULT_CAP):
        N = self.size
        if N * N > cap:
            raise CapExceededError(N * N, cap, "Approximant too large; use entries()")
        idx = np.arange(N)
        return FpMatrix(self.entries(idx[:, None], idx[None, :]), self.p)

    def low_rank(self):
        """
        Explicit factors of rank n r + 1.

        One block of r rows per coordinate i carries a_i L[x_i, y_i]; a last
        row carries the constant 1 - sum_i a_i.
        """
        p, q, n = self.p, self.q, self._n
        U0, V0 = self._base.U.values, self._base.V.values
        idx = np.arange(self.size)
        digits = _digits(idx, q, n)
        u_rows, v_rows = [], []
        for ai, d in zip(self._seed, digits):
            u_rows.append((ai * U0[:, d]) % p)
            v_rows.append(V0[:, d])
        const = (1 - sum(self._seed)) % p
        u_rows.append(np.full((1, self.size), const, dtype=np.int64))
        v_rows.append(np.ones((1, self.size), dtype=np.int64))
        return LowRankFp(FpMatrix(np.vstack(u_rows), p), FpMatrix(np.vstack(v_rows), p))

    def __repr__(self):
        return "KronApproximant(q={0}, n={1}, p={2}, seed={3})".format(
            self.q, self._n, self.p, self._seed
        )


def _as_low_rank(L):
    if isinstance(L, LowRankFp):
        return L
    if isinstance(L, FpMatrix):
        return LowRankFp.from_matrix(L)
    raise TypeError("Please enter the base approximation as a LowRankFp or FpMatrix")


def build_kron_approximant(L, a, n):
    """
    Approximant of A^n from an approximation L of A and a seed a in F_p^n.

    Examples
    --------
    >>> L = rgd.FpMatrix([[1, 1], [1, 2]], 3)
    >>> K = rgd.build_kron_approximant(L, (0, 0), 2)
    >>> K.materialize().values.tolist()[0]
    [1, 1, 1, 1]
    """
    return KronApproximant(_as_low_rank(L), tuple(a), n)


@dataclass(frozen=True)
class ErrorCount:
    """
    Fraction of entries where an approximation disagrees with its target.

    When `exhaustive` is False the error is estimated from `samples` uniformly
    drawn entries using the numpy generator seeded with `seed`.
    """

    error: Fraction
    exhaustive: bool
    samples: int
    seed: int = 0


def _block_count(rows, N, count_block, workers):
    blocks = [(start, min(start + ROW_BLOCK, N)) for start in range(0, rows, ROW_BLOCK)]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return sum(executor.map(count_block, blocks))


def kron_error_exact(
    A,
    approx,
    cap=EXHAUSTIVE_ENTRY_CAP,
    samples=DEFAULT_SAMPLES,
    seed=0,
    workers=1,
):
    """
    Fraction of entries (x, y) with bool(approx[x, y]) != A^n[x, y].

    Every entry is counted when q^(2n) <= cap; otherwise `samples` entries are
    drawn with numpy's default generator seeded with `seed` and a warning is
    issued.

    Returns
    -------
    ErrorCount

    Examples
    --------
    >>> H3 = rgd.walsh_hadamard(3)
    >>> K = rgd.build_kron_approximant(rgd.sign_to_fp(H3, 3), (1,), 1)
    >>> rgd.kron_error_exact(H3, K).error
    Fraction(0, 1)
    """
    if A.shape != (approx.q, approx.q):
        raise ValueError("The base matrix and the approximant base differ in shape")
    N, n = approx.size, approx.n
    if N * N <= cap:

        def count_block(block):
            xs = np.arange(*block)[:, None]
            ys = np.arange(N)[None, :]
            pred = np.where(approx.entries(xs, ys) == 1, 1, -1)
            return int(np.count_nonzero(pred != kron_power_entries(A, n, xs, ys)))

        wrong = _block_count(N, N, count_block, workers)
        return ErrorCount(Fraction(wrong, N * N), True, N * N)

    warnings.filterwarnings("always")
    warnings.warn(
        "{0} entries exceed the exhaustive cap; estimating from {1} samples (seed {2})".format(
            N * N, samples, seed
        )
    )
    rng = np.random.default_rng(seed)
    xs = rng.integers(0, N, size=samples)
    ys = rng.integers(0, N, size=samples)
    pred = np.where(approx.entries(xs, ys) == 1, 1, -1)
    wrong = int(np.count_nonzero(pred != kron_power_entries(A, n, xs, ys)))
    return ErrorCount(Fraction(wrong, samples), False, samples, seed)


def entry_marginals(A, L):
    """
    Exact entry statistics of a base matrix and its approximation.

    Returns
    -------
    tuple of Fraction
        (p1, pm1, d1, dm1): the fractions of +1 and -1 entries of A, and the
        fractions of those entries where bool(L) disagrees. A conditional
        fraction over an empty set is 0.

    Examples
    --------
    >>> H3 = rgd.walsh_hadamard(3)
    >>> rgd.entry_marginals(H3, rgd.sign_to_fp(H3, 3))
    (Fraction(9, 16), Fraction(7, 16), Fraction(0, 1), Fraction(0, 1))
    """
    assert A.shape == L.shape, "Both matrices must have the same shape"
    a = A.values
    b = np.where(L.values == 1, 1, -1)
    total = a.size
    pos, neg = int(np.count_nonzero(a == 1)), int(np.count_nonzero(a == -1))
    wrong_pos = int(np.count_nonzero((a == 1) & (b == -1)))
    wrong_neg = int(np.count_nonzero((a == -1) & (b == 1)))
    d1 = Fraction(wrong_pos, pos) if pos else Fraction(0)
    dm1 = Fraction(wrong_neg, neg) if neg else Fraction(0)
    return Fraction(pos, total), Fraction(neg, total), d1, dm1


def kron_theorem_bound(A, L, n):
    """
    Guaranteed best-seed error 1/2 - (1/2) (1/2 - alpha - delta)^n.

    alpha = |p1 - pm1| is the sign imbalance of A and delta the fraction of
    entries where bool(L) disagrees with A. Requires 2 alpha + delta < 1/2.

    Examples
    --------
    >>> H3 = rgd.walsh_hadamard(3)
    >>> rgd.kron_theorem_bound(H3, rgd.sign_to_fp(H3, 3), 2)
    Fraction(55, 128)
    """
    if isinstance(L, LowRankFp):
        L = L.materialize()
    p1, pm1, d1, dm1 = entry_marginals(A, L)
    alpha = abs(p1 - pm1)
    delta = p1 * d1 + pm1 * dm1
    if not 2 * alpha + delta < Fraction(1, 2):
        raise PreconditionError(
            "Amplification needs 2 alpha + delta < 1/2, got alpha = {0}, delta = {1}".format(
                alpha, delta
            )
        )
    return Fraction(1, 2) - Fraction(1, 2) * (Fraction(1, 2) - alpha - delta) ** n


def kron_error_expected(p, p1, pm1, d1, dm1, n):
    """
    Exact error probability of the seeded affine form on independent noisy inputs.

    The inputs (A_i, L_i) are i.i.d. with Pr[A_i = 1] = p1 and
    Pr[bool(L_i) != A_i | A_i = j] = d_j; the seed is uniform on F_p^n. The
    probability that bool(pi_a(L)) differs from prod_i A_i is

        1/2 - (2-p)/(2p) (p1 - pm1)^n - (p-1)/p (p1 (1 - d1) - pm1 dm1)^n.

    Examples
    --------
    >>> rgd.kron_error_expected(3, 0.5, 0.5, 0, 0, 1)
    Fraction(1, 6)
    """
    p = val.prime(p)
    p1, pm1 = val.distribution(p1, pm1)
    d1 = val.probability(d1, "d1")
    dm1 = val.probability(dm1, "dm1")
    n = val.nonneg_int(n, "The power")
    return (
        Fraction(1, 2)
        - Fraction(2 - p, 2 * p) * (p1 - pm1) ** n
        - Fraction(p - 1, p) * (p1 * (1 - d1) - pm1 * dm1) ** n
    )


def kron_error_enumerated(p, p1, pm1, d1, dm1, n):
    """
    The same error probability by summing over every (A, L, seed) outcome.

    A wrong L_i is spread uniformly over the p - 1 residues other than 1.
    """
    p = val.prime(p)
    p1, pm1 = val.distribution(p1, pm1)
    d1 = val.probability(d1, "d1")
    dm1 = val.probability(dm1, "dm1")
    n = val.nonneg_int(n, "The power")
    # Pr[L_i = v | A_i = s]
    cond = {
        1: [(1 - d1) if v == 1 else d1 / (p - 1) for v in range(p)],
        -1: [dm1 if v == 1 else (1 - dm1) / (p - 1) for v in range(p)],
    }
    law = {1: p1, -1: pm1}
    seeds = _all_seeds(p, n)
    total = Fraction(0)
    for z in itertools.product(range(p), repeat=n):
        values = (1 + seeds @ (np.array(z, dtype=np.int64) - 1)) % p
        # fraction of seeds where bool(pi_a(z)) = +1
        plus = Fraction(int(np.count_nonzero(values == 1)), p**n)
        for signs in itertools.product((1, -1), repeat=n):
            weight = Fraction(1)
            for s, v in zip(signs, z):
                weight *= law[s] * cond[s][v]
            if weight:
                target = math.prod(signs)
                total += weight * ((1 - plus) if target == 1 else plus)
    return total


def simulate_kron_error(p, p1, d1, dm1, n, samples, seed=0):
    """
    Monte Carlo estimate of `kron_error_expected`.

    Returns
    -------
    tuple of (float, float)
        The mean error and its standard error.
    """
    p = val.prime(p)
    p1 = float(val.probability(p1, "p1"))
    d1 = float(val.probability(d1, "d1"))
    dm1 = float(val.probability(dm1, "dm1"))
    rng = np.random.default_rng(seed)
    A = np.where(rng.random((samples, n)) < p1, 1, -1)
    keep_one = np.where(A == 1, rng.random((samples, n)) >= d1, rng.random((samples, n)) < dm1)
    other = rng.integers(0, p - 1, size=(samples, n))
    # uniform over the residues other than 1
    other = other + (other >= 1)
    L = np.where(keep_one, 1, other)
    a = rng.integers(0, p, size=(samples, n))
    pred = np.where((1 + (a * (L - 1)).sum(axis=1)) % p == 1, 1, -1)
    wrong = (pred != A.prod(axis=1)).astype(np.float64)
    return float(wrong.mean()), float(wrong.std(ddof=1) / math.sqrt(samples))


@dataclass(frozen=True)
class SeedSearchResult:
    seed: tuple
    error: Fraction
    mean_error: Fraction
    seeds_evaluated: int
    exhaustive: bool


def _coordinate_states(A, table):
    # (residue, sign, count) for every (x_i, y_i) pair of the base
    states = {}
    for v, s in zip(table.ravel().tolist(), A.values.ravel().tolist()):
        states[(v, s)] = states.get((v, s), 0) + 1
    return sorted((v, s, c) for (v, s), c in states.items())


def best_seed_search(
    A,
    L,
    n,
    mode="exhaustive",
    samples=DEFAULT_SEED_SAMPLES,
    rng_seed=0,
    budget=SEED_BUDGET,
    progress=False,
):
    """
    Seed a in F_p^n with the fewest disagreements between bool(L~_a) and A^n.

    The error of a seed depends on an entry (x, y) only through the residues
    L[x_i, y_i] and the signs A[x_i, y_i], so the q^(2n) entries are grouped
    into at most (2p)^n joint states with integer multiplicities.

    Parameters
    ----------
    A : SignMatrix
        q x q base.
    L : LowRankFp or FpMatrix
        q x q approximation of A.
    n : int
    mode : {"exhaustive", "sampled"}
        "exhaustive" scans F_p^n lexicographically (p^n <= 10**6); "sampled"
        draws `samples` seeds from numpy's default generator seeded with `rng_seed`.
    budget : int
        Largest states-times-seeds product to evaluate.

    Returns
    -------
    SeedSearchResult
        Ties go to the lexicographically smallest seed.

    Examples
    --------
    >>> H3 = rgd.walsh_hadamard(3)
    >>> res = rgd.best_seed_search(H3, rgd.sign_to_fp(H3, 3), 2)
    >>> res.error <= rgd.kron_theorem_bound(H3, rgd.sign_to_fp(H3, 3), 2)
    True
    """
    assert mode in ("exhaustive", "sampled"), "The mode must be 'exhaustive' or 'sampled'"
    L = _as_low_rank(L)
    p = L.p
    n = val.positive_int(n, "The power")
    if A.shape != L.shape:
        raise ValueError("The base matrix and its approximation differ in shape")
    if mode == "exhaustive":
        assert p**n <= EXHAUSTIVE_SEED_CAP, "Exhaustive seed search needs p^n <= {0}".format(
            EXHAUSTIVE_SEED_CAP
        )
        seeds = _all_seeds(p, n)
    else:
        rng = np.random.default_rng(rng_seed)
        seeds = rng.integers(0, p, size=(samples, n))
        log.info("sampling %d seeds with rng seed %d", samples, rng_seed)

    states = _coordinate_states(A, L.materialize().values)
    n_states = len(states) ** n
    if n_states * len(seeds) > budget:
        raise BudgetExceededError(n_states * len(seeds), budget, "Seed search exceeds the work budget")
    Z = np.array(
        [[st[0] for st in combo] for combo in itertools.product(states, repeat=n)], dtype=np.int64
    )
    target = np.array([math.prod(st[1] for st in combo) for combo in itertools.product(states, repeat=n)])
    weight = np.array(
        [math.prod(st[2] for st in combo) for combo in itertools.product(states, repeat=n)],
        dtype=np.int64,
    )
    errors = np.empty(len(seeds), dtype=np.int64)
    step = max(1, 2**22 // max(len(Z), 1))
    for start in tqdm(range(0, len(seeds), step), disable=not progress):
        block = seeds[start : start + step]
        pred = np.where((1 + block @ (Z - 1).T) % p == 1, 1, -1)
        errors[start : start + step] = ((pred != target[None, :]) * weight[None, :]).sum(axis=1)

    codes = seeds @ (p ** np.arange(n - 1, -1, -1, dtype=np.int64))
    k = int(np.lexsort((codes, errors))[0])
    entries = A.rows ** (2 * n)
    mean = Fraction(int(errors.sum()), entries * len(seeds))
    log.debug("best seed %s with %d wrong entries", seeds[k].tolist(), errors[k])
    return SeedSearchResult(
        tuple(int(v) for v in seeds[k]),
        Fraction(int(errors[k]), entries),
        mean,
        len(seeds),
        mode == "exhaustive",
    )


# ----------------------------------------------------------------------
# Majority amplification


class PrefixApproximant:
    """
    Implicit approximation of a Majority power that reads only index prefixes.

    Entry (x, y) is L[x_pre, y_pre], where x_pre is the index formed by the
    first k of the n base-q digits of x.

    Parameters
    ----------
    base : FpMatrix
        q^k x q^k approximation.
    q : int
    k : int
    n : int
    """

    def __init__(self, base, q, k, n):
        self._base = base
        self._q, self._k, self._n = q, k, n

    # ----------------------------------------------------------------------
    # Properties

    @property
    def base(self):
        return self._base

    @property
    def q(self):
        return self._q

    @property
    def k(self):
        return self._k

    @property
    def n(self):
        return self._n

    @property
    def p(self):
        return self._base.p

    @property
    def size(self):
        return self._q**self._n

    # ----------------------------------------------------------------------
    # Methods

    def entries(self, xs, ys):
        shift = self._q ** (self._n - self._k)
        return self._base.values[np.asarray(xs) // shift, np.asarray(ys) // shift]

    def materialize(self, cap=DEFAULT_CAP):
        N = self.size
        if N * N > cap:
            raise CapExceededError(N * N, cap, "Approximant too large; use entries()")
        idx = np.arange(N)
        return FpMatrix(self.entries(idx[:, None], idx[None, :]), self.p)

    def rank(self):
        return fp_rank(self._base)


def build_prefix_approximant(L, k, n, q=2):
    """
    Approximant of a Majority n-th power from an approximation L of the k-th power.

    Examples
    --------
    >>> L = rgd.boolean_preimage(rgd.distance_matrix(1), 3)
    >>> rgd.build_prefix_approximant(L, 1, 1).materialize() == L
    True
    """
    if not isinstance(L, FpMatrix):
        raise TypeError("Please enter the base approximation as an FpMatrix")
    k = val.positive_int(k, "The prefix length")
    n = val.positive_int(n, "The power")
    if k > n:
        raise PreconditionError("The prefix length {0} exceeds the power {1}".format(k, n))
    assert L.rows == L.cols == q**k, "The base approximation must be q^k x q^k"
    return PrefixApproximant(L, q, k, n)


def prefix_error_exact(A, approx, cap=EXHAUSTIVE_ENTRY_CAP, workers=1):
    """
    Exact fraction of entries where bool(approx) differs from the Majority n-th power of A.
    """
    assert A.shape == (approx.q, approx.q), "The base matrix must be q x q"
    N = approx.size
    if N * N > cap:
        raise CapExceededError(N * N, cap, "Too many entries to count exhaustively")

    def count_block(block):
        xs = np.arange(*block)[:, None]
        ys = np.arange(N)[None, :]
        pred = np.where(approx.entries(xs, ys) == 1, 1, -1)
        return int(np.count_nonzero(pred != maj_power_entries(A, approx.n, xs, ys)))

    return Fraction(_block_count(N, N, count_block, workers), N * N)


def majority_agreement_prob(k, n):
    """
    Pr[Maj(X_1..X_k) = Maj(X_1..X_n)] for uniform +-1 variables, ties to +1.

    Examples
    --------
    >>> rgd.majority_agreement_prob(1, 3)
    Fraction(3, 4)
    >>> rgd.majority_agreement_prob(5, 5)
    Fraction(1, 1)
    """
    k = val.positive_int(k, "k")
    n = val.positive_int(n, "n")
    assert k <= n <= 64, "Need 1 <= k <= n <= 64"
    agree = 0
    for j in range(k + 1):
        head = 2 * j - k
        for m in range(n - k + 1):
            tail = 2 * m - (n - k)
            if (head >= 0) == (head + tail >= 0):
                agree += math.comb(k, j) * math.comb(n - k, m)
    return Fraction(agree, 2**n)


def binomial_tail(n, a):
    """
    Pr[X_1 + ... + X_n >= a] for uniform +-1 variables.

    Examples
    --------
    >>> rgd.binomial_tail(4, 1)
    Fraction(5, 16)
    """
    n = val.positive_int(n, "n")
    assert abs(a) <= n, "The threshold must satisfy |a| <= n"
    return Fraction(sum(math.comb(n, j) for j in range(n + 1) if 2 * j - n >= a), 2**n)


def maj_amplified_error(k, n, delta):
    """
    Error (1 - P) + (2P - 1) delta of the prefix construction, P = majority_agreement_prob(k, n).

    Examples
    --------
    >>> rgd.maj_amplified_error(1, 3, 0)
    Fraction(1, 4)
    >>> rgd.maj_amplified_error(2, 9, 0.5)
    Fraction(1, 2)
    """
    delta = val.probability(delta, "delta")
    assert delta <= Fraction(1, 2), "delta must be at most 1/2"
    P = majority_agreement_prob(k, n)
    err = (1 - P) + (2 * P - 1) * delta
    assert err <= Fraction(1, 2) - (P - Fraction(1, 2)) * (1 - 2 * delta)
    return err


def fit_majority_constant(ks=(1, 2, 4), ns=(8, 16, 32)):
    """
    Largest c with majority_agreement_prob(k, n) - 1/2 >= c sqrt(k / n) on the grid.

    Examples
    --------
    >>> rgd.fit_majority_constant() > 0
    True
    """
    c = min(
        float(majority_agreement_prob(k, n) - Fraction(1, 2)) / math.sqrt(k / n)
        for k in ks
        for n in ns
        if k <= n
    )
    assert c > 0, "No positive constant fits the grid"
    return c


# ----------------------------------------------------------------------
# probabilistic approximations


class Ensemble:
    """
    A finite distribution over approximations of one matrix.

    Parameters
    ----------
    members : list of (weight, matrix)
        Positive rational weights summing to 1; matrices are FpMatrix or
        LowRankFp of a common shape and field.
    """

    def __init__(self, members):
        members = [(val.probability(w, "weight"), m) for w, m in members]
        assert members, "An ensemble needs at least one member"
        assert all(w > 0 for w, _ in members), "Ensemble weights must be positive"
        assert sum(w for w, _ in members) == 1, "Ensemble weights must sum to 1"
        shape, p = members[0][1].shape, members[0][1].p
        assert all(m.shape == shape for _, m in members), "Ensemble members differ in shape"
        if any(m.p != p for _, m in members):
            raise FieldMismatchError("Ensemble members are defined over different fields")
        self._members = members

    @property
    def members(self):
        return list(self._members)

    @property
    def shape(self):
        return self._members[0][1].shape

    @property
    def p(self):
        return self._members[0][1].p

    def __len__(self):
        return len(self._members)


def _dense(M):
    return M.materialize() if isinstance(M, LowRankFp) else M


def ensemble_max_error(E, target):
    """
    Largest per-entry probability that a member's Booleanization misses the target.

    Returns
    -------
    tuple of (Fraction, int)
        The maximum error and the largest member rank.

    Examples
    --------
    >>> H1 = rgd.walsh_hadamard(1)
    >>> exact = rgd.core.matrices.boolean_preimage(H1, 3)
    >>> rgd.ensemble_max_error(rgd.Ensemble([(1, exact)]), H1)
    (Fraction(0, 1), 2)
    """
    if E.shape != target.shape:
        raise ValueError("The ensemble and the target differ in shape")
    denom = math.lcm(*(w.denominator for w, _ in E.members))
    wrong = np.zeros(target.shape, dtype=np.int64)
    ranks = []
    for w, M in E.members:
        dense = _dense(M)
        miss = np.where(dense.values == 1, 1, -1) != target.values
        wrong += int(w * denom) * miss
        ranks.append(fp_rank(dense))
    return Fraction(int(wrong.max()), denom), max(ranks)


def flip_noise_ensemble(target, delta, samples, p, seed=0):
    """
    Uniform ensemble of Boolean preimages of `target`, each entry flipped
    independently with probability delta.
    """
    delta = float(val.probability(delta, "delta"))
    samples = val.positive_int(samples, "The sample count")
    rng = np.random.default_rng(seed)
    members = []
    for _ in range(samples):
        flips = rng.random(target.shape) < delta
        noisy = SignMatrix(np.where(flips, -target.values, target.values))
        members.append((Fraction(1, samples), boolean_preimage(noisy, p)))
    return Ensemble(members)


def prefix_ensemble_error(E, A, k, n):
    """
    Average over an ensemble for the k-th Majority power of the prefix error against the n-th.
    """
    q = A.rows
    return sum(
        (w * prefix_error_exact(A, build_prefix_approximant(_dense(M), k, n, q)) for w, M in E.members),
        Fraction(0),
    )
