"""
Exact arithmetic over F_p and the cyclotomic field Q(w), w = exp(2 pi i / p),
plus the two interpolation polynomials used by the low-rank lift.
"""
import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import galois
import numpy as np

import rigidpy.core.validate_inputs as val
from rigidpy.core.exceptions import FieldMismatchError, NonInvertibleError

log = logging.getLogger(__name__)


@functools.lru_cache(maxsize=None)
def prime_field(p):
    """
    Return the galois field class GF(p), cached per modulus.
    """
    return galois.GF(val.prime(p))


def bool_residue(x, p):
    """
    Booleanize a residue: +1 if x is congruent to 1 mod p, -1 otherwise.

    Examples
    --------
    >>> rgd.core.field.bool_residue(1, 3), rgd.core.field.bool_residue(4, 3)
    (1, 1)
    >>> rgd.core.field.bool_residue(0, 5)
    -1
    """
    return 1 if x % p == 1 else -1


# ----------------------------------------------------------------------
# F_p scalars


@dataclass(frozen=True)
class FpScalar:
    """
    A residue mod a small prime.

    Parameters
    ----------
    value : int
        Residue in [0, p).
    p : int
        Prime modulus, 2 <= p <= 13.

    Examples
    --------
    >>> rgd.FpScalar(2, 3) * rgd.FpScalar(2, 3)
    FpScalar(value=1, p=3)
    """

    value: int
    p: int

    def __post_init__(self):
        p = val.prime(self.p)
        value = val.nonneg_int(self.value, "The residue")
        assert value < p, "The residue must be smaller than the modulus"
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "p", p)

    def _coerce(self, other):
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise FieldMismatchError(
                    "Cannot combine residues mod {0} and mod {1}".format(self.p, other.p)
                )
            return other.value
        return int(other) % self.p

    def __add__(self, other):
        return FpScalar((self.value + self._coerce(other)) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpScalar((self.value - self._coerce(other)) % self.p, self.p)

    def __mul__(self, other):
        return FpScalar((self.value * self._coerce(other)) % self.p, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar((-self.value) % self.p, self.p)

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    @property
    def sign(self):
        """The Booleanization of this residue, +1 or -1."""
        return bool_residue(self.value, self.p)


def fp_inverse(x):
    """
    Multiplicative inverse of a nonzero residue.

    Parameters
    ----------
    x : FpScalar
        Residue to invert.

    Returns
    -------
    FpScalar

    Examples
    --------
    >>> rgd.fp_inverse(rgd.FpScalar(4, 7))
    FpScalar(value=2, p=7)
    >>> rgd.fp_inverse(rgd.FpScalar(0, 3))
    Traceback (most recent call last):
    ...
    rigidpy.core.exceptions.NonInvertibleError: 0 is non-invertible mod 3
    """
    if not isinstance(x, FpScalar):
        raise TypeError("Please enter the residue as an FpScalar")
    if x.value == 0:
        raise NonInvertibleError("0 is non-invertible mod {0}".format(x.p))
    GF = prime_field(x.p)
    return FpScalar(int(GF(x.value) ** -1), x.p)


# ----------------------------------------------------------------------
# cyclotomic field Q(w_p)


def _as_fraction(c):
    if isinstance(c, bool) or not isinstance(c, (Rational, int, np.integer)):
        raise TypeError("Please enter cyclotomic coefficients as rationals")
    return Fraction(int(c)) if isinstance(c, np.integer) else Fraction(c)


class CycloElement:
    """
    An exact element c_0 + c_1 w + ... + c_{p-1} w^{p-1} of Q(w), w = exp(2 pi i / p).

    The stored form is canonical: the coefficient of w^{p-1} is eliminated with
    1 + w + ... + w^{p-1} = 0, so two elements are equal iff their stored
    coefficients are.

    Parameters
    ----------
    coeffs : sequence of rationals
        Coefficients of w^0, w^1, ...; shorter sequences are zero-padded and
        longer ones are folded with w^p = 1.
    p : int
        Prime order of the root of unity.

    Examples
    --------
    >>> w = rgd.CycloElement.omega(3)
    >>> (1 + w) ** 2 == w
    True
    >>> w * w ** 2 == 1
    True
    """

    __slots__ = ("_coeffs", "_p")

    def __init__(self, coeffs, p):
        p = val.prime(p)
        folded = [Fraction(0)] * p
        for k, c in enumerate(coeffs):
            folded[k % p] += _as_fraction(c)
        self._p = p
        self._coeffs = self._canonical(folded)

    @staticmethod
    def _canonical(coeffs):
        top = coeffs[-1]
        if top:
            coeffs = [c - top for c in coeffs]
        return tuple(coeffs)

    @classmethod
    def _from_canonical(cls, coeffs, p):
        obj = cls.__new__(cls)
        obj._p = p
        obj._coeffs = tuple(coeffs)
        return obj

    @classmethod
    def constant(cls, value, p):
        """The rational constant `value` as an element of Q(w_p)."""
        return cls([value], p)

    @classmethod
    def zero(cls, p):
        return cls.constant(0, p)

    @classmethod
    def one(cls, p):
        return cls.constant(1, p)

    @classmethod
    def omega(cls, p, k=1):
        """
        The root of unity w^k.

        Examples
        --------
        >>> rgd.CycloElement.omega(2) == -1
        True
        """
        coeffs = [0] * p
        coeffs[k % p] = 1
        return cls(coeffs, p)

    # ----------------------------------------------------------------------
    # Properties

    @property
    def p(self):
        return self._p

    @property
    def coeffs(self):
        """
        Canonical coefficient tuple (last entry is always zero).
        """
        return self._coeffs

    @property
    def is_zero(self):
        return not any(self._coeffs)

    @property
    def is_rational(self):
        """True when the element lies in Q, i.e. only the constant term survives."""
        return not any(self._coeffs[1:])

    # ----------------------------------------------------------------------
    # Arithmetic

    def _coerce(self, other):
        if isinstance(other, CycloElement):
            if other._p != self._p:
                raise FieldMismatchError(
                    "Cannot combine elements of Q(w_{0}) and Q(w_{1})".format(
                        self._p, other._p
                    )
                )
            return other
        if isinstance(other, (Rational, int, np.integer)) and not isinstance(
            other, bool
        ):
            return CycloElement.constant(other, self._p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElement._from_canonical(
            (a + b for a, b in zip(self._coeffs, other._coeffs)), self._p
        )

    __radd__ = __add__

    def __neg__(self):
        return CycloElement._from_canonical((-c for c in self._coeffs), self._p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        """Multiply by a rational scalar."""
        c = Fraction(c)
        return CycloElement._from_canonical((c * a for a in self._coeffs), self._p)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_rational:
            return self.scale(other._coeffs[0])
        if self.is_rational:
            return other.scale(self._coeffs[0])
        p = self._p
        prod = [Fraction(0)] * p
        for i, a in enumerate(self._coeffs):
            if not a:
                continue
            for j, b in enumerate(other._coeffs):
                if b:
                    prod[(i + j) % p] += a * b
        return CycloElement._from_canonical(self._canonical(prod), p)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycloElement.one(self._p)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def automorphism(self, t):
        """
        Apply the Galois automorphism w -> w^t (t coprime to p).
        """
        assert t % self._p != 0, "The automorphism exponent must be coprime to p"
        return self._automorphism(t)

    def _automorphism(self, t):
        p = self._p
        permuted = [Fraction(0)] * p
        for k, c in enumerate(self._coeffs):
            permuted[(t * k) % p] += c
        return CycloElement._from_canonical(self._canonical(permuted), p)

    def inverse(self):
        """
        Exact inverse, computed as the product of the Galois conjugates over the norm.

        Examples
        --------
        >>> w = rgd.CycloElement.omega(5)
        >>> (1 + w) * (1 + w).inverse() == 1
        True
        """
        if self.is_zero:
            raise NonInvertibleError("The zero element of Q(w) is non-invertible")
        if self.is_rational:
            return CycloElement.constant(1 / self._coeffs[0], self._p)
        conj = CycloElement.one(self._p)
        for t in range(2, self._p):
            conj = conj * self._automorphism(t)
        norm = self * conj
        assert norm.is_rational, "The field norm must be rational"
        return conj.scale(1 / norm._coeffs[0])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self._p, self._coeffs))

    def __repr__(self):
        return "CycloElement({0}, p={1})".format(
            [str(c) for c in self._coeffs], self._p
        )


def cyclo_mul(a, b):
    """
    Exact product of two cyclotomic elements in canonical form.

    Examples
    --------
    >>> w = rgd.CycloElement.omega(3)
    >>> rgd.cyclo_mul(w, w ** 2) == 1
    True
    """
    if not isinstance(a, CycloElement) or not isinstance(b, CycloElement):
        raise TypeError("Please enter two CycloElement objects")
    if a.p != b.p:
        raise FieldMismatchError(
            "Cannot multiply elements of Q(w_{0}) and Q(w_{1})".format(a.p, b.p)
        )
    return a * b


@functools.lru_cache(maxsize=None)
def _roots_of_unity(p):
    return np.exp(2j * np.pi * np.arange(p) / p)


def complex_embed(a):
    """
    Embed a cyclotomic element into C at double precision.

    Examples
    --------
    >>> z = rgd.complex_embed(rgd.CycloElement.omega(3))
    >>> bool(abs(z - complex(-0.5, 3 ** 0.5 / 2)) < 1e-12)
    True
    """
    coeffs = np.array([float(c) for c in a.coeffs])
    return complex(coeffs @ _roots_of_unity(a.p))


# ----------------------------------------------------------------------
# univariate polynomials over Q(w_p)


class CycloPolynomial:
    """
    A univariate polynomial with coefficients in Q(w_p), index = degree.

    Trailing zero coefficients are dropped, so the leading coefficient of a
    nonzero polynomial is nonzero; the zero polynomial has degree -1.

    Parameters
    ----------
    coeffs : sequence of CycloElement or rationals
    p : int
    """

    def __init__(self, coeffs, p):
        p = val.prime(p)
        elems = [
            c if isinstance(c, CycloElement) else CycloElement.constant(c, p)
            for c in coeffs
        ]
        for c in elems:
            if c.p != p:
                raise FieldMismatchError("Every coefficient must lie in Q(w_{0})".format(p))
        while elems and elems[-1].is_zero:
            elems.pop()
        self._coeffs = tuple(elems)
        self._p = p

    @property
    def p(self):
        return self._p

    @property
    def coeffs(self):
        return self._coeffs

    @property
    def degree(self):
        return len(self._coeffs) - 1

    def coefficient(self, m):
        """Coefficient of x^m, zero beyond the degree."""
        if 0 <= m < len(self._coeffs):
            return self._coeffs[m]
        return CycloElement.zero(self._p)

    def __call__(self, x):
        """
        Evaluate by Horner's rule at a cyclotomic element or rational.
        """
        acc = CycloElement.zero(self._p)
        for c in reversed(self._coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        n = max(len(self._coeffs), len(other.coeffs))
        return CycloPolynomial(
            [self.coefficient(m) + other.coefficient(m) for m in range(n)], self._p
        )

    def __mul__(self, other):
        if not self._coeffs or not other.coeffs:
            return CycloPolynomial([], self._p)
        prod = [CycloElement.zero(self._p)] * (len(self._coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero:
                    prod[i + j] = prod[i + j] + a * b
        return CycloPolynomial(prod, self._p)

    def __pow__(self, m):
        result = CycloPolynomial([1], self._p)
        for _ in range(m):
            result = result * self
        return result

    def rescale_variable(self, s):
        """
        Return the polynomial x -> self(s * x) for a rational s.
        """
        s = Fraction(s)
        return CycloPolynomial(
            [c.scale(s**m) for m, c in enumerate(self._coeffs)], self._p
        )

    def __eq__(self, other):
        if not isinstance(other, CycloPolynomial):
            return NotImplemented
        return self._p == other.p and self._coeffs == other.coeffs

    def __repr__(self):
        return "CycloPolynomial(degree={0}, p={1})".format(self.degree, self._p)


def _solve_exact(matrix, rhs):
    """
    Solve a square linear system over Q(w) by Gaussian elimination with exact arithmetic.
    """
    n = len(matrix)
    rows = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if not rows[i][col].is_zero), None)
        if pivot is None:
            raise NonInvertibleError("The interpolation system is singular")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = rows[col][col].inverse()
        rows[col] = [inv * e for e in rows[col]]
        for i in range(n):
            if i != col and not rows[i][col].is_zero:
                factor = rows[i][col]
                rows[i] = [e - factor * pe for e, pe in zip(rows[i], rows[col])]
    return [row[-1] for row in rows]


def interpolate(nodes, values, p):
    """
    The unique polynomial of degree < len(nodes) through (nodes[i], values[i]).

    Solves the Vandermonde system exactly over Q(w_p).
    """
    nodes = [n if isinstance(n, CycloElement) else CycloElement.constant(n, p) for n in nodes]
    values = [v if isinstance(v, CycloElement) else CycloElement.constant(v, p) for v in values]
    vander = [[node**m for m in range(len(nodes))] for node in nodes]
    log.debug("solving a %d x %d Vandermonde system over Q(w_%d)", len(nodes), len(nodes), p)
    return CycloPolynomial(_solve_exact(vander, values), p)


@functools.lru_cache(maxsize=None)
def interpolate_f(p):
    """
    Polynomial f of degree <= p-1 with f(w^k) = bool(k) for every k in [p].

    Examples
    --------
    >>> f = rgd.interpolate_f(2)
    >>> f == rgd.CycloPolynomial([0, -1], 2)
    True
    """
    p = val.prime(p)
    nodes = [CycloElement.omega(p, k) for k in range(p)]
    return interpolate(nodes, [bool_residue(k, p) for k in range(p)], p)


@functools.lru_cache(maxsize=None)
def interpolate_g(p):
    """
    Polynomial g of degree <= p^2-1 with g(k) = w^k for every integer k in [p^2].

    Examples
    --------
    >>> g = rgd.interpolate_g(2)
    >>> g(2) == 1 and g(3) == -1
    True
    """
    p = val.prime(p)
    nodes = list(range(p * p))
    return interpolate(nodes, [CycloElement.omega(p, k) for k in nodes], p)


def l1_norm(f):
    """
    Sum of the complex magnitudes of the coefficients of a polynomial.

    Examples
    --------
    >>> rgd.l1_norm(rgd.CycloPolynomial([0, -1], 3))
    1.0
    >>> rgd.l1_norm(rgd.CycloPolynomial([], 3))
    0.0
    """
    return math.fsum(abs(complex_embed(c)) for c in f.coeffs)
