"""
Exact Boolean and regular rigidity of small matrices, a brute-force oracle and
a bit-packed rank-1 upper-bound search.

The exact solvers enumerate column spaces instead of factor pairs (U, V): for a
fixed span each column of A independently takes its closest span vector.
"""
import concurrent.futures
import itertools
import logging
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

import rigidpy.core.validate_inputs as val
from rigidpy.core.exceptions import BudgetExceededError, FieldMismatchError
from rigidpy.core.matrices import (
    FpMatrix,
    LowRankFp,
    SignMatrix,
    bit_count64,
    boolean_distance,
    boolean_preimage,
    hamming_disagreement,
    sign_to_fp,
)

log = logging.getLogger(__name__)

# work budgets, in popcount-equivalent operations
DEFAULT_BUDGET = 10**10
DEFAULT_ORACLE_BUDGET = 10**8
# echelon bases processed per vectorized block
BLOCK = 2**12

MODES = ("boolean", "regular")


@dataclass(frozen=True)
class RigidityResult:
    """
    Outcome of a rigidity computation.

    `value` is the number of entries the witness disagrees with A on (Boolean
    or exact disagreement by `mode`); `exhaustive` tells whether the search
    covered every candidate, i.e. whether `value` is the exact rigidity or an
    upper bound.
    """

    value: int
    witness: LowRankFp
    mode: str
    rank: int
    p: int
    exhaustive: bool

    def distance_to(self, A):
        """Re-measure the witness against A in this result's mode."""
        L = self.witness.materialize()
        if self.mode == "boolean":
            return boolean_distance(A, L)
        return hamming_disagreement(A, L)


def gaussian_binomial(n, k, p):
    """
    Number of k-dimensional subspaces of F_p^n.

    Examples
    --------
    >>> rgd.core.solver.gaussian_binomial(2, 1, 3)
    4
    """
    if k < 0 or k > n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def _agreement_table(A, p, mode):
    # table[i * p + v, j] = 1 if residue v in row i agrees with A[i, j]
    vals = A.values.astype(np.int64)
    residues = np.arange(p)
    if mode == "boolean":
        signs = np.where(residues == 1, 1, -1)
        table = signs[None, :, None] == vals[:, None, :]
    else:
        table = residues[None, :, None] == vals[:, None, :]
    return table.reshape(vals.shape[0] * p, vals.shape[1]).astype(np.int32)


def _echelon_tasks(N, r, p):
    tasks = []
    for d in range(min(r, N) + 1):
        for pivots in itertools.combinations(range(N), d):
            free = [
                (t, j) for t, pv in enumerate(pivots) for j in range(pv + 1, N) if j not in pivots
            ]
            tasks.append((d, pivots, free))
    return tasks


def _solve_pivot_pattern(task, table, N, cols, p):
    """
    Best column-space of one pivot pattern, scanned in lexicographic order of its
    free entries; returns (value, filling index, basis, coefficient choice).
    """
    d, pivots, free = task
    coeffs = np.array(list(itertools.product(range(p), repeat=d)), dtype=np.int64).reshape(
        p**d, d
    )
    total = p ** len(free)
    place = p ** np.arange(len(free) - 1, -1, -1, dtype=np.int64)
    rows_idx = np.array([t for t, _ in free], dtype=np.int64)
    cols_idx = np.array([j for _, j in free], dtype=np.int64)
    best = None
    for start in range(0, total, BLOCK):
        codes = np.arange(start, min(start + BLOCK, total), dtype=np.int64)
        basis = np.zeros((len(codes), d, N), dtype=np.int64)
        for t, pv in enumerate(pivots):
            basis[:, t, pv] = 1
        if free:
            digits = (codes[:, None] // place[None, :]) % p
            basis[:, rows_idx, cols_idx] = digits
        span = np.einsum("cd,bdn->bcn", coeffs, basis) % p
        onehot = (span[..., None] == np.arange(p)).reshape(len(codes), p**d, N * p)
        dis = N - onehot.astype(np.int32) @ table
        per_col = dis.min(axis=1)
        values = per_col.sum(axis=1)
        k = int(np.argmin(values))
        if best is None or values[k] < best[0]:
            choice = dis[k].argmin(axis=0)
            best = (int(values[k]), start + k, basis[k].copy(), coeffs[choice].T.copy())
    return best


def _tie_key(result):
    # value, then the row-major flattened echelon basis
    return result[0], tuple(result[2].ravel().tolist())


def _column_space_search(A, r, p, mode, budget, workers, progress):
    N, cols = A.shape
    work = sum(gaussian_binomial(N, d, p) * p**d for d in range(min(r, N) + 1)) * N * cols
    if work > budget:
        raise BudgetExceededError(work, budget, "Exact rigidity search exceeds the work budget")
    table = _agreement_table(A, p, mode)
    tasks = _echelon_tasks(N, r, p)
    log.debug("enumerating %d pivot patterns (%.3g operations)", len(tasks), work)

    def run(task):
        return _solve_pivot_pattern(task, table, N, cols, p)

    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        # map keeps task order, so the reduction below is independent of thread count
        results = list(tqdm(executor.map(run, tasks), total=len(tasks), disable=not progress))

    value, _, basis, choice = min(results, key=_tie_key)
    witness = LowRankFp(FpMatrix(basis, p), FpMatrix(choice, p))
    return value, witness


def exact_boolean_rigidity(A, r, p, budget=DEFAULT_BUDGET, workers=1, progress=False):
    """
    Exact Boolean rigidity: the fewest entries of A disagreeing with bool(L), rank(L) <= r.

    All column spaces of dimension 0..r are enumerated through their reduced
    echelon bases. Among optima the lexicographically smallest basis (rows
    flattened in order) is returned, and each column takes the first span
    vector (by coefficient index) that is closest to it.

    Parameters
    ----------
    A : SignMatrix
    r : int
        Rank.
    p : int
        Prime modulus.
    budget : int, default 10**10
        Largest number of operations the search may use.
    workers : int, default 1
        Threads used to scan pivot patterns.
    progress : bool, default False
        Show a progress bar.

    Returns
    -------
    RigidityResult

    Examples
    --------
    >>> rgd.exact_boolean_rigidity(rgd.walsh_hadamard(1), 1, 3).value
    1
    >>> rgd.exact_boolean_rigidity(rgd.walsh_hadamard(1), 0, 3).value
    3
    """
    if not isinstance(A, SignMatrix):
        raise TypeError("Please enter the matrix as a SignMatrix")
    p = val.prime(p)
    r = val.nonneg_int(r, "The rank")
    if r >= min(A.shape):
        return RigidityResult(0, LowRankFp.from_matrix(boolean_preimage(A, p)), "boolean", r, p, True)
    value, witness = _column_space_search(A, r, p, "boolean", budget, workers, progress)
    return RigidityResult(value, witness, "boolean", r, p, True)


def exact_regular_rigidity(A, r, budget=DEFAULT_BUDGET, workers=1, progress=False):
    """
    Exact rigidity over F_p: the fewest entries of A to change to reach rank <= r.

    Uses the same column-space enumeration as `exact_boolean_rigidity`.

    Examples
    --------
    >>> rgd.exact_regular_rigidity(rgd.FpMatrix.identity(3, 2), 2).value
    1
    """
    if not isinstance(A, FpMatrix):
        raise TypeError("Please enter the matrix as an FpMatrix")
    r = val.nonneg_int(r, "The rank")
    if r >= min(A.shape):
        return RigidityResult(0, LowRankFp.from_matrix(A), "regular", r, A.p, True)
    value, witness = _column_space_search(A, r, A.p, "regular", budget, workers, progress)
    return RigidityResult(value, witness, "regular", r, A.p, True)


def bruteforce_oracle(A, r, p, mode, budget=DEFAULT_ORACLE_BUDGET):
    """
    Rigidity by trying every factor pair (U, V) in F_p^(r x N) x F_p^(r x N).

    An independent check on the column-space solvers, for tiny inputs only.
    In regular mode a SignMatrix is first embedded with `sign_to_fp`.

    Examples
    --------
    >>> rgd.bruteforce_oracle(rgd.walsh_hadamard(1), 1, 3, "boolean")
    1
    """
    assert mode in MODES, "The mode must be one of {0}".format(MODES)
    p = val.prime(p)
    r = val.nonneg_int(r, "The rank")
    if mode == "regular" and isinstance(A, SignMatrix):
        A = sign_to_fp(A, p)
    if isinstance(A, FpMatrix) and A.p != p:
        raise FieldMismatchError("The matrix is defined over a different field")
    N, cols = A.shape
    work = p ** (r * (N + cols)) * N * cols
    if work > budget:
        raise BudgetExceededError(work, budget, "Brute-force oracle exceeds the work budget")
    target = A.values.astype(np.int64)
    all_V = np.array(list(itertools.product(range(p), repeat=r * cols)), dtype=np.int64)
    all_V = all_V.reshape(p ** (r * cols), r, cols)
    best = N * cols
    for u in itertools.product(range(p), repeat=r * N):
        U = np.array(u, dtype=np.int64).reshape(r, N)
        L = np.einsum("rn,brc->bnc", U, all_V) % p
        if mode == "boolean":
            L = np.where(L == 1, 1, -1)
        dis = (L != target[None]).sum(axis=(1, 2))
        best = min(best, int(dis.min()))
    return best


# ----------------------------------------------------------------------
# rank-1 upper bounds


def trivial_rank1_bound(A):
    """
    min(#(+1), #(-1)): the all-(+1) or all-(-1) matrix already achieves it.

    Examples
    --------
    >>> rgd.trivial_rank1_bound(rgd.walsh_hadamard(3))
    28
    """
    return min(A.count_positive(), A.count_negative())


def _canonical_mask(digits, p):
    # first nonzero coordinate equal to 1
    nonzero = digits != 0
    has = nonzero.any(axis=1)
    first = np.argmax(nonzero, axis=1)
    return has & (digits[np.arange(len(digits)), first] == 1)


def rank1_search(A, p, budget=DEFAULT_BUDGET, progress=False):
    """
    Best Boolean rank-1 approximation u c^T found by scanning u up to scalars.

    For each u in F_p^N with first nonzero entry 1, every column j picks the
    scalar c_j minimizing the disagreement between column j of A and bool(c_j u);
    disagreements are popcounts of XORed column words. The all-ones u is
    tried first, so the trivial bound always holds.

    Parameters
    ----------
    A : SignMatrix
        At most 16 rows.
    p : int
        2 or 3.
    budget : int, default 10**10
        Operation budget; the scan stops early when it runs out.

    Returns
    -------
    RigidityResult
        `exhaustive` is True iff every scalar class of u was visited.
    """
    p = val.prime(p)
    assert A.rows <= 16, "rank1_search supports at most 16 rows"
    assert p <= 3, "rank1_search supports p <= 3"
    N, cols = A.shape
    col_words = A.column_words()
    weights = np.uint64(1) << np.arange(N, dtype=np.uint64)
    place = p ** np.arange(N - 1, -1, -1, dtype=np.int64)
    cost = p * cols
    allowed = max(budget // cost, 1)

    def score(U):
        dis = []
        for c in range(p):
            neg = ((c * U) % p != 1).astype(np.uint64)
            masks = (neg * weights).sum(axis=1, dtype=np.uint64)
            dis.append(bit_count64(masks[:, None] ^ col_words[None, :]))
        dis = np.stack(dis)
        return dis.min(axis=0).sum(axis=1), dis.argmin(axis=0)

    ones = np.ones((1, N), dtype=np.int64)
    totals, choice = score(ones)
    best = (int(totals[0]), ones[0], choice[0])
    visited = 1
    total_codes = p**N
    exhaustive = True
    with tqdm(total=total_codes, disable=not progress) as bar:
        for start in range(0, total_codes, BLOCK * 4):
            codes = np.arange(start, min(start + BLOCK * 4, total_codes), dtype=np.int64)
            digits = (codes[:, None] // place[None, :]) % p
            U = digits[_canonical_mask(digits, p)]
            if visited + len(U) > allowed:
                U = U[: max(allowed - visited, 0)]
                exhaustive = False
            if len(U):
                totals, choice = score(U)
                k = int(np.argmin(totals))
                if totals[k] < best[0]:
                    best = (int(totals[k]), U[k], choice[k])
                visited += len(U)
            bar.update(len(codes))
            if not exhaustive:
                break
    log.debug("rank-1 search visited %d vectors, exhaustive=%s", visited, exhaustive)
    value, u, c = best
    witness = LowRankFp(FpMatrix(u[None, :], p), FpMatrix(np.asarray(c)[None, :], p))
    return RigidityResult(value, witness, "boolean", 1, p, exhaustive)
