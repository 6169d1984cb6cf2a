"""
Dense matrices over F_p and over {-1, +1}, ranks, Booleanization and the
Kronecker / Majority power generators.

Row and column indices of a power A^n encode base-q digit strings big-endian:
index x stands for (x_1, ..., x_n) with x_1 the most significant digit.
"""
import logging
import re

import numpy as np

import rigidpy.core.validate_inputs as val
from rigidpy.core.exceptions import CapExceededError, ExperimentIOError, FieldMismatchError
from rigidpy.core.field import prime_field

log = logging.getLogger(__name__)

# default materialization cap, in entries
DEFAULT_CAP = 2**26

_S55 = np.uint64(0x5555555555555555)
_S33 = np.uint64(0x3333333333333333)
_S0F = np.uint64(0x0F0F0F0F0F0F0F0F)
_S01 = np.uint64(0x0101010101010101)


def bit_count64(arr):
    """
    Popcount of every word of a uint64 array (SWAR, no hardware popcount needed).

    Examples
    --------
    >>> import numpy as np
    >>> rgd.core.matrices.bit_count64(np.array([0, 1, 7, 2**63], dtype=np.uint64)).tolist()
    [0, 1, 3, 1]
    """
    arr = np.asarray(arr, dtype=np.uint64)
    arr = arr - ((arr >> np.uint64(1)) & _S55)
    arr = (arr & _S33) + ((arr >> np.uint64(2)) & _S33)
    arr = (arr + (arr >> np.uint64(4))) & _S0F
    return ((arr * _S01) >> np.uint64(56)).astype(np.int64)


def _check_cap(entries, cap):
    if entries > cap:
        raise CapExceededError(entries, cap, "Matrix too large; use implicit evaluation")


# ----------------------------------------------------------------------
# matrix types


class FpMatrix:
    """
    Dense matrix of residues mod p, immutable after construction.

    Parameters
    ----------
    entries : array-like of int, 2-D
        Residues in [0, p). Zero-row matrices are allowed so that rank-0
        factors can be represented.
    p : int
        Prime modulus.

    Examples
    --------
    >>> M = rgd.FpMatrix([[1, 1], [1, 2]], 3)
    >>> M.shape, M.p
    ((2, 2), 3)
    """

    def __init__(self, entries, p):
        self._p = val.prime(p)
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim != 2:
            raise TypeError("Please enter the matrix entries as a 2-D array")
        assert arr.size == 0 or (arr.min() >= 0 and arr.max() < self._p), (
            "Matrix entries must be residues in [0, {0})".format(self._p)
        )
        arr.setflags(write=False)
        self._values = arr

    @classmethod
    def reduce(cls, entries, p):
        """Build a matrix from arbitrary integers, reducing them mod p."""
        return cls(np.mod(np.asarray(entries, dtype=np.int64), p), p)

    @classmethod
    def identity(cls, n, p):
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def zeros(cls, rows, cols, p):
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    # ----------------------------------------------------------------------
    # Properties

    @property
    def p(self):
        return self._p

    @property
    def values(self):
        """Read-only int64 array of residues."""
        return self._values

    @property
    def rows(self):
        return self._values.shape[0]

    @property
    def cols(self):
        return self._values.shape[1]

    @property
    def shape(self):
        return self._values.shape

    @property
    def T(self):
        return FpMatrix(self._values.T, self._p)

    def to_galois(self):
        """The matrix as a galois FieldArray over GF(p)."""
        return prime_field(self._p)(self._values)

    def __matmul__(self, other):
        if other.p != self._p:
            raise FieldMismatchError("Cannot multiply matrices over different fields")
        return FpMatrix((self._values @ other.values) % self._p, self._p)

    def __eq__(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self._p == other.p and np.array_equal(self._values, other.values)

    def __hash__(self):
        return hash((self._p, self.shape, self._values.tobytes()))

    def __repr__(self):
        return "FpMatrix(p={0}, shape={1})".format(self._p, self.shape)


class SignMatrix:
    """
    Dense +-1 matrix stored with one bit per entry (+1 -> 0, -1 -> 1).

    Parameters
    ----------
    entries : array-like, 2-D
        Every entry must be exactly -1 or +1.

    Examples
    --------
    >>> S = rgd.SignMatrix([[1, 1], [1, -1]])
    >>> S.count_negative()
    1
    >>> S.values.tolist()
    [[1, 1], [1, -1]]
    """

    def __init__(self, entries):
        arr = np.asarray(entries)
        if arr.ndim != 2:
            raise TypeError("Please enter the matrix entries as a 2-D array")
        assert np.all((arr == 1) | (arr == -1)), "Sign matrix entries must be -1 or +1"
        self._shape = arr.shape
        self._bits = np.packbits(arr == -1, axis=1)
        self._bits.setflags(write=False)
        self._values = None

    # ----------------------------------------------------------------------
    # Properties

    @property
    def shape(self):
        return self._shape

    @property
    def rows(self):
        return self._shape[0]

    @property
    def cols(self):
        return self._shape[1]

    @property
    def bits(self):
        """Row-packed bit storage, one bit per entry, set where the entry is -1."""
        return self._bits

    @property
    def values(self):
        """Read-only int8 array of the +-1 entries."""
        if self._values is None:
            neg = np.unpackbits(self._bits, axis=1, count=self._shape[1])
            vals = (1 - 2 * neg.astype(np.int8)).astype(np.int8)
            vals.setflags(write=False)
            self._values = vals
        return self._values

    def count_negative(self):
        """Number of -1 entries, by popcount over the packed storage."""
        return int(np.unpackbits(self._bits).sum())

    def count_positive(self):
        return self._shape[0] * self._shape[1] - self.count_negative()

    def column_words(self):
        """
        One uint64 word per column, bit i set where row i holds -1 (rows <= 64).
        """
        assert self._shape[0] <= 64, "Column words need at most 64 rows"
        neg = (self.values == -1).astype(np.uint64)
        weights = np.uint64(1) << np.arange(self._shape[0], dtype=np.uint64)
        return (neg * weights[:, None]).sum(axis=0, dtype=np.uint64)

    def __eq__(self, other):
        if not isinstance(other, SignMatrix):
            return NotImplemented
        return self._shape == other.shape and np.array_equal(self._bits, other.bits)

    def __hash__(self):
        return hash((self._shape, self._bits.tobytes()))

    def __repr__(self):
        return "SignMatrix(shape={0})".format(self._shape)


class LowRankFp:
    """
    Explicit decomposition L = U^T V over F_p.

    Parameters
    ----------
    U : FpMatrix
        r x N factor.
    V : FpMatrix
        r x M factor, over the same field and with the same r.

    Examples
    --------
    >>> U = rgd.FpMatrix([[1, 1, 1]], 3)
    >>> L = rgd.LowRankFp(U, U)
    >>> L.r, rgd.fp_rank(L.materialize())
    (1, 1)
    """

    def __init__(self, U, V):
        if not isinstance(U, FpMatrix) or not isinstance(V, FpMatrix):
            raise TypeError("Please enter both factors as FpMatrix objects")
        if U.p != V.p:
            raise FieldMismatchError("Both factors must be defined over the same field")
        assert U.rows == V.rows, "Both factors must have the same number of rows"
        self._U = U
        self._V = V

    @classmethod
    def from_matrix(cls, M):
        """
        Minimal rank factorization of M from its reduced row echelon form.

        With R the nonzero rows of rref(M) and P its pivot columns,
        M = M[:, P] R, so U = M[:, P]^T and V = R.
        """
        rank = fp_rank(M)
        if rank == 0:
            return cls(FpMatrix.zeros(0, M.rows, M.p), FpMatrix.zeros(0, M.cols, M.p))
        R = M.to_galois().row_reduce().view(np.ndarray).astype(np.int64)[:rank]
        pivots = [int(np.flatnonzero(row)[0]) for row in R]
        return cls(FpMatrix(M.values[:, pivots].T, M.p), FpMatrix(R, M.p))

    @classmethod
    def random(cls, r, N, p, rng):
        """Uniformly random factors of shape r x N, drawn from a numpy Generator."""
        return cls(
            FpMatrix(rng.integers(0, p, size=(r, N)), p),
            FpMatrix(rng.integers(0, p, size=(r, N)), p),
        )

    # ----------------------------------------------------------------------
    # Properties

    @property
    def U(self):
        return self._U

    @property
    def V(self):
        return self._V

    @property
    def r(self):
        return self._U.rows

    @property
    def p(self):
        return self._U.p

    @property
    def shape(self):
        return (self._U.cols, self._V.cols)

    def materialize(self):
        """The product U^T V as an FpMatrix."""
        return FpMatrix((self._U.values.T @ self._V.values) % self.p, self.p)

    def __repr__(self):
        return "LowRankFp(r={0}, shape={1}, p={2})".format(self.r, self.shape, self.p)


# ----------------------------------------------------------------------
# rank and Booleanization


def fp_rank(M):
    """
    Rank of an FpMatrix over F_p, by Gaussian elimination.

    Examples
    --------
    >>> rgd.fp_rank(rgd.FpMatrix([[1, 1], [1, 2]], 3))
    2
    >>> rgd.fp_rank(rgd.FpMatrix([[1, 1], [1, 1]], 5))
    1
    """
    if M.values.size == 0:
        return 0
    return int(np.linalg.matrix_rank(M.to_galois()))


def booleanize(M):
    """
    Entrywise Booleanization: residue 1 maps to +1, everything else to -1.

    Examples
    --------
    >>> rgd.booleanize(rgd.FpMatrix.identity(2, 3)).values.tolist()
    [[1, -1], [-1, 1]]
    """
    return SignMatrix(np.where(M.values == 1, 1, -1))


def sign_to_fp(S, p):
    """
    Embed signs into F_p: +1 -> 1 and -1 -> p-1.

    Faithful for p >= 3. Over F_2 both signs land on residue 1 and a warning is raised.

    Examples
    --------
    >>> rgd.sign_to_fp(rgd.SignMatrix([[1, -1]]), 3).values.tolist()
    [[1, 2]]
    """
    p = val.prime(p)
    val.sign_embedding(p)
    return FpMatrix(np.where(S.values == 1, 1, p - 1), p)


def boolean_preimage(S, p):
    """
    Embed signs into F_p as +1 -> 1 and -1 -> 0, a Boolean preimage for every p.
    """
    return FpMatrix(np.where(S.values == 1, 1, 0), p)


def boolean_distance(A, L):
    """
    Number of entries where A differs from bool(L).

    Examples
    --------
    >>> H1 = rgd.walsh_hadamard(1)
    >>> rgd.boolean_distance(H1, rgd.FpMatrix([[1, 1], [1, 1]], 3))
    1
    """
    assert A.shape == L.shape, "Both matrices must have the same shape"
    return int(np.count_nonzero(A.values != np.where(L.values == 1, 1, -1)))


def hamming_disagreement(A, L):
    """
    Number of entries where two FpMatrix objects differ (regular rigidity distance).
    """
    assert A.shape == L.shape, "Both matrices must have the same shape"
    if A.p != L.p:
        raise FieldMismatchError("Both matrices must be defined over the same field")
    return int(np.count_nonzero(A.values != L.values))


# ----------------------------------------------------------------------
# generators


H1 = ((1, 1), (1, -1))
M1 = ((1, -1), (-1, 1))


def _square_base(A):
    assert A.rows == A.cols, "The base matrix must be square"
    return A.values.astype(np.int64)


def kron_power(A, n, cap=DEFAULT_CAP):
    """
    The Kronecker power A^n, with A^n[x, y] = prod_i A[x_i, y_i].

    Examples
    --------
    >>> H2 = rgd.kron_power(rgd.walsh_hadamard(1), 2)
    >>> int(H2.values[1, 3])
    -1
    """
    base = _square_base(A)
    n = val.nonneg_int(n, "The power")
    _check_cap(base.shape[0] ** (2 * n), cap)
    out = np.ones((1, 1), dtype=np.int64)
    for _ in range(n):
        out = np.kron(out, base)
    return SignMatrix(out)


def maj_power(A, n, cap=DEFAULT_CAP):
    """
    The Majority power, entrywise Maj(A[x_1, y_1], ..., A[x_n, y_n]) with ties to +1.
    """
    base = _square_base(A)
    n = val.positive_int(n, "The power")
    q = base.shape[0]
    _check_cap(q ** (2 * n), cap)
    sums = np.zeros((1, 1), dtype=np.int64)
    ones = np.ones((q, q), dtype=np.int64)
    for _ in range(n):
        sums = np.kron(sums, ones) + np.kron(np.ones_like(sums), base)
    return SignMatrix(np.where(sums >= 0, 1, -1))


def _digits(idx, q, n):
    idx = np.asarray(idx, dtype=np.int64)
    return [(idx // q ** (n - 1 - i)) % q for i in range(n)]


def kron_power_entries(A, n, xs, ys):
    """
    Entries of A^n at index arrays (xs, ys) without materializing the power.
    """
    base = _square_base(A)
    q = base.shape[0]
    out = np.ones(np.broadcast(np.asarray(xs), np.asarray(ys)).shape, dtype=np.int64)
    for dx, dy in zip(_digits(xs, q, n), _digits(ys, q, n)):
        out = out * base[dx, dy]
    return out


def maj_power_entries(A, n, xs, ys):
    """
    Entries of the Majority power at index arrays (xs, ys), ties to +1.
    """
    base = _square_base(A)
    q = base.shape[0]
    total = np.zeros(np.broadcast(np.asarray(xs), np.asarray(ys)).shape, dtype=np.int64)
    for dx, dy in zip(_digits(xs, q, n), _digits(ys, q, n)):
        total = total + base[dx, dy]
    return np.where(total >= 0, 1, -1)


def walsh_hadamard(n, cap=DEFAULT_CAP):
    """
    The Walsh-Hadamard matrix H_n, the n-th Kronecker power of [[1, 1], [1, -1]].

    Examples
    --------
    >>> rgd.walsh_hadamard(1).values.tolist()
    [[1, 1], [1, -1]]
    >>> rgd.walsh_hadamard(3).count_negative()
    28
    """
    return kron_power(SignMatrix(H1), n, cap=cap)


def distance_matrix(n, cap=DEFAULT_CAP):
    """
    M_n[x, y] = +1 iff the Hamming distance of the n-bit strings x, y is at most n/2.

    Examples
    --------
    >>> rgd.distance_matrix(2).values.tolist()
    [[1, 1, 1, -1], [1, 1, -1, 1], [1, -1, 1, 1], [-1, 1, 1, 1]]
    """
    n = val.positive_int(n, "The dimension")
    _check_cap(4**n, cap)
    x = np.arange(2**n, dtype=np.uint64)
    dist = bit_count64(x[:, None] ^ x[None, :])
    return SignMatrix(np.where(2 * dist <= n, 1, -1))


def named_matrix(name, cap=DEFAULT_CAP):
    """
    Build a sign matrix from a short name: "h<n>" (Walsh-Hadamard H_n),
    "m<n>" (distance matrix M_n) or "ones<q>" (all-ones q x q).

    Examples
    --------
    >>> rgd.named_matrix("h2").shape
    (4, 4)
    """
    match = re.fullmatch(r"(h|m|ones)(\d+)", name.strip().lower())
    if match is None:
        raise ValueError("Unknown matrix name {0!r}".format(name))
    kind, size = match.group(1), int(match.group(2))
    if kind == "h":
        return walsh_hadamard(size, cap=cap)
    if kind == "m":
        return distance_matrix(size, cap=cap)
    return SignMatrix(np.ones((size, size), dtype=np.int8))


# ----------------------------------------------------------------------
# text format


def format_matrix(M):
    """
    Render a matrix in the text format: a header line then one line per row.

    Examples
    --------
    >>> print(rgd.core.matrices.format_matrix(rgd.walsh_hadamard(1)), end="")
    sign 2 2
    1 1
    1 -1
    """
    if isinstance(M, FpMatrix):
        header = "fp {0} {1} {2}".format(M.p, M.rows, M.cols)
    elif isinstance(M, SignMatrix):
        header = "sign {0} {1}".format(M.rows, M.cols)
    else:
        raise TypeError("Please enter an FpMatrix or SignMatrix")
    lines = [header] + [" ".join(str(int(v)) for v in row) for row in M.values]
    return "\n".join(lines) + "\n"


def parse_matrix(text):
    """
    Parse the text format written by `format_matrix`; whitespace-tolerant.
    """
    lines = [line.split() for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("Empty matrix text")
    header, body = lines[0], [tok for line in lines[1:] for tok in line]
    kind = header[0].lower()
    if kind == "fp" and len(header) == 4:
        p, rows, cols = (int(h) for h in header[1:])
    elif kind == "sign" and len(header) == 3:
        p, rows, cols = None, int(header[1]), int(header[2])
    else:
        raise ValueError("Malformed matrix header {0!r}".format(" ".join(header)))
    if len(body) != rows * cols:
        raise ValueError(
            "Expected {0} entries but found {1}".format(rows * cols, len(body))
        )
    entries = np.array([int(tok) for tok in body], dtype=np.int64).reshape(rows, cols)
    return SignMatrix(entries) if p is None else FpMatrix(entries, p)


def read_matrix(path):
    """Read a matrix file."""
    try:
        with open(path, "r") as f:
            return parse_matrix(f.read())
    except OSError as err:
        raise ExperimentIOError("Could not read matrix file ({0})".format(err.strerror), path)


def write_matrix(M, path):
    """Write a matrix file."""
    try:
        with open(path, "w") as f:
            f.write(format_matrix(M))
    except OSError as err:
        raise ExperimentIOError("Could not write matrix file ({0})".format(err.strerror), path)
