"""Dual-mode scalars plus the two product symbols used throughout.

A :class:`Scalar` is either an exact rational (backed by ``gmpy2.mpq``) or a
binary float carrying an explicit precision in bits (backed by ``gmpy2.mpfr``).
Precision travels with the value, never with ambient state: combining two
floats widens to the larger precision, and mixing exact with float converts
the exact operand at the float operand's precision.  Exact arithmetic is
error free and totally ordered; division by zero raises in every mode.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpfr, mpq

from .errors import ValidationError

MIN_PRECISION = 64

#: Sentinel accepted by :func:`q_pochhammer` for the infinite product.
INFINITY = math.inf

_MPQ_TYPE = type(mpq())

ScalarLike = Union["Scalar", int, str, Fraction]


def _context(bits: int) -> gmpy2.context:
    return gmpy2.context(precision=bits)


class Scalar:
    """A number that is exactly rational or floating at a known precision."""

    __slots__ = ("_val", "_prec")

    def __init__(self, value, precision_bits=None):
        # Internal constructor; use Scalar.exact / Scalar.floating instead.
        self._val = value
        self._prec = precision_bits

    # -- construction -----------------------------------------------------

    @classmethod
    def exact(cls, value) -> "Scalar":
        """Exact rational scalar.

        Accepts ints, Fractions, gmpy2 rationals, other Scalars, binary
        floats (converted losslessly), and strings: ``"p/q"``, integer
        literals, or decimal literals such as ``"1.25"`` and ``"-3e-2"``
        (decimals convert losslessly as well).
        """
        if isinstance(value, Scalar):
            return value if value._prec is None else cls(mpq(value._val), None)
        try:
            return cls(mpq(value), None)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"not an exact rational: {value!r}") from exc

    @classmethod
    def floating(cls, value, precision_bits: int) -> "Scalar":
        """Floating scalar rounded once to ``precision_bits`` (>= 64)."""
        if precision_bits < MIN_PRECISION:
            raise ValidationError(
                f"precision_bits must be >= {MIN_PRECISION}, got {precision_bits}"
            )
        if isinstance(value, Scalar):
            value = value._val
        return cls(mpfr(value, precision_bits), precision_bits)

    # -- inspection --------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self._prec is None

    @property
    def precision_bits(self):
        """Precision in bits, or ``None`` for exact values."""
        return self._prec

    @property
    def raw(self):
        """The underlying gmpy2 number (mpq or mpfr)."""
        return self._val

    def is_zero(self) -> bool:
        return self._val == 0

    def sign(self) -> int:
        return gmpy2.sign(self._val)

    def as_fraction(self) -> Fraction:
        """Exact value as a Fraction (lossless in both modes)."""
        q = self._val if self._prec is None else mpq(self._val)
        return Fraction(int(q.numerator), int(q.denominator))

    @property
    def numerator(self) -> int:
        if self._prec is not None:
            raise ValidationError("numerator is defined for exact scalars only")
        return int(self._val.numerator)

    @property
    def denominator(self) -> int:
        if self._prec is not None:
            raise ValidationError("denominator is defined for exact scalars only")
        return int(self._val.denominator)

    # -- conversion --------------------------------------------------------

    def to_exact(self) -> "Scalar":
        """Exact rational equal to this value (binary floats are rational)."""
        if self._prec is None:
            return self
        return Scalar(mpq(self._val), None)

    def to_floating(self, precision_bits: int) -> "Scalar":
        """Round to a float of the given precision."""
        return Scalar.floating(self._val, precision_bits)

    def __float__(self) -> float:
        return float(self._val)

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction, _MPQ_TYPE)):
            return Scalar(mpq(other), None)
        return None

    def _pair(self, other):
        """Promote self/other to a common mode; returns (a, b, bits|None)."""
        if self._prec is None and other._prec is None:
            return self._val, other._val, None
        bits = max(p for p in (self._prec, other._prec) if p is not None)
        a = self._val if self._prec is not None else mpfr(self._val, bits)
        b = other._val if other._prec is not None else mpfr(other._val, bits)
        return a, b, bits

    def _binop(self, other, exact_op, ctx_name):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, bits = self._pair(o)
        if bits is None:
            return Scalar(exact_op(a, b), None)
        result = getattr(_context(bits), ctx_name)(a, b)
        return Scalar(result, bits)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b, "add")

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b, "sub")

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o.__sub__(self)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b, "mul")

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("scalar division by zero")
        return self._binop(o, lambda a, b: a / b, "div")

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o.__truediv__(self)

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0 and self.is_zero():
            raise ZeroDivisionError("zero scalar raised to a negative power")
        if self._prec is None:
            return Scalar(self._val ** exponent, None)
        return Scalar(_context(self._prec).pow(self._val, exponent), self._prec)

    def __neg__(self):
        return Scalar(-self._val, self._prec)

    def __pos__(self):
        return self

    def __abs__(self):
        return Scalar(abs(self._val), self._prec)

    # -- float-mode elementary functions ------------------------------------

    def _require_float(self, what):
        if self._prec is None:
            raise ValidationError(f"{what} requires a floating scalar")
        return self._prec

    def exp(self) -> "Scalar":
        bits = self._require_float("exp")
        return Scalar(_context(bits).exp(self._val), bits)

    def log(self) -> "Scalar":
        bits = self._require_float("log")
        if self._val <= 0:
            raise ValidationError("log requires a positive scalar")
        return Scalar(_context(bits).log(self._val), bits)

    def pow_real(self, exponent: "Scalar") -> "Scalar":
        """Real power with a possibly non-integer exponent (float mode)."""
        e = self._coerce(exponent)
        bits = max(self._prec or 0, e._prec or 0)
        if bits == 0:
            raise ValidationError("pow_real requires at least one floating operand")
        a = mpfr(self._val, bits)
        b = mpfr(e._val, bits)
        return Scalar(_context(bits).pow(a, b), bits)

    # -- comparisons ---------------------------------------------------------

    def _cmp_val(self, other):
        o = self._coerce(other)
        return None if o is None else o._val

    def __eq__(self, other):
        v = self._cmp_val(other)
        return NotImplemented if v is None else self._val == v

    def __lt__(self, other):
        v = self._cmp_val(other)
        return NotImplemented if v is None else self._val < v

    def __le__(self, other):
        v = self._cmp_val(other)
        return NotImplemented if v is None else self._val <= v

    def __gt__(self, other):
        v = self._cmp_val(other)
        return NotImplemented if v is None else self._val > v

    def __ge__(self, other):
        v = self._cmp_val(other)
        return NotImplemented if v is None else self._val >= v

    def __hash__(self):
        return hash(self._val)

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self._prec is None:
            return f"Scalar('{self._val}')"
        return f"Scalar('{self._val}', precision_bits={self._prec})"

    def __str__(self):
        return str(self._val)


ZERO = Scalar.exact(0)
ONE = Scalar.exact(1)


def as_scalar(value) -> Scalar:
    """Coerce ints, Fractions, strings, and Scalars to Scalar (exact for non-Scalars)."""
    if isinstance(value, Scalar):
        return value
    return Scalar.exact(value)


def pochhammer(z, k: int) -> Scalar:
    """Rising factorial: the product of ``z + i`` for ``i`` in ``range(k)``.

    Exact when ``z`` is exact.  ``k`` must be a nonnegative integer;
    ``k == 0`` gives 1.
    """
    if not isinstance(k, int) or k < 0:
        raise ValidationError(f"pochhammer index must be a nonnegative integer, got {k!r}")
    z = as_scalar(z)
    acc = ONE
    for i in range(k):
        acc = acc * (z + i)
    return acc


def q_pochhammer(z, q, k) -> Scalar:
    """q-shifted factorial: the product of ``1 - q**i * z`` for ``i`` in ``range(k)``.

    ``k`` may be :data:`INFINITY`, in which case ``0 < q < 1`` is required and
    at least one of ``z``, ``q`` must be floating (the infinite product has no
    exact value).  The infinite product is truncated once ``|q**i * z|`` drops
    below ``2**(-precision/2)``; past that point the remaining factors perturb
    the logarithm of the product by at most ``2*|q**i*z|/(1-q)``, see
    :func:`q_pochhammer_tail_bound`.
    """
    z = as_scalar(z)
    q = as_scalar(q)
    if isinstance(k, float) and math.isinf(k) and k > 0:
        return _q_pochhammer_infinite(z, q)
    if not isinstance(k, int) or k < 0:
        raise ValidationError(
            f"q_pochhammer index must be a nonnegative integer or INFINITY, got {k!r}"
        )
    acc = ONE
    power = ONE
    for _ in range(k):
        acc = acc * (ONE - power * z)
        if acc.is_zero():
            return acc
        power = power * q
    return acc


def _q_pochhammer_infinite(z: Scalar, q: Scalar) -> Scalar:
    if not (Scalar.exact(0) < q < Scalar.exact(1)):
        raise ValidationError("infinite q-product requires 0 < q < 1")
    bits = max(z.precision_bits or 0, q.precision_bits or 0)
    if bits == 0:
        raise ValidationError("infinite q-product is not available in exact mode")
    z = z.to_floating(bits)
    q = q.to_floating(bits)
    eps = Scalar.floating(1, bits) / Scalar.exact(2) ** (bits // 2)
    half = Scalar.exact(1) / 2
    acc = Scalar.floating(1, bits)
    term = z
    while not (abs(term) < eps and abs(term) <= half):
        factor = 1 - term
        if factor.is_zero():
            return factor
        acc = acc * factor
        term = term * q
    return acc


def q_pochhammer_tail_bound(z, q, depth: int) -> Scalar:
    """Bound on ``|log(tail)|`` after truncating the infinite q-product at ``depth``.

    Valid once ``|q**depth * z| <= 1/2``; the bound is ``2*|z|*q**depth/(1-q)``.
    """
    z = as_scalar(z)
    q = as_scalar(q)
    if not (Scalar.exact(0) < q < Scalar.exact(1)):
        raise ValidationError("tail bound requires 0 < q < 1")
    head = abs(z) * q ** depth
    if not head <= Scalar.exact(1) / 2:
        raise ValidationError("tail bound is valid only once |q**depth * z| <= 1/2")
    return 2 * head / (1 - q)
