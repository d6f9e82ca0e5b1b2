"""Dense univariate polynomials over Scalar, with certified real-root isolation.

Coefficients are stored densely by ascending power; the empty tuple is the
zero polynomial.  Root isolation runs on the square-free part with exact
rational arithmetic only: a Sturm chain counts distinct real roots and
bisection splits the Cauchy bound interval until every piece holds exactly
one root.  Every isolating interval has rational endpoints that are not
roots themselves, so the sign change across it certifies the root.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import gmpy2
from gmpy2 import mpq

from .errors import ValidationError
from .scalar import ONE, ZERO, Scalar, as_scalar


class Polynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_scalar(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        prec = max((c.precision_bits or 0 for c in cs), default=0)
        if prec:
            cs = [c.to_floating(prec) for c in cs]
        self.coeffs: Tuple[Scalar, ...] = tuple(cs)

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(())

    @classmethod
    def one(cls) -> "Polynomial":
        return cls((ONE,))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((ZERO, ONE))

    @classmethod
    def from_roots(cls, roots: Sequence) -> "Polynomial":
        """Monic polynomial with exactly the given multiset of roots."""
        p = cls.one()
        for r in roots:
            p = p * cls((-as_scalar(r), ONE))
        return p

    # -- basic queries -------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Scalar:
        if not self.coeffs:
            raise ValidationError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_exact(self) -> bool:
        return all(c.is_exact for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial([{', '.join(str(c) for c in self.coeffs)}])"

    # -- ring operations -------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero() or other.is_zero():
                return Polynomial.zero()
            out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
            return Polynomial(out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, factor) -> "Polynomial":
        f = as_scalar(factor)
        return Polynomial([c * f for c in self.coeffs])

    def evaluate(self, x) -> Scalar:
        """Horner evaluation; exact when inputs are exact."""
        x = as_scalar(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """The polynomial self(inner(x))."""
        acc = Polynomial.zero()
        for c in reversed(self.coeffs):
            acc = acc * inner + Polynomial((c,))
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial([c * i for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, divisor: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        """Euclidean quotient and remainder."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = divisor.degree
        lead = divisor.leading
        quot = [ZERO] * max(len(rem) - dd, 0)
        for i in range(len(rem) - dd - 1, -1, -1):
            factor = rem[i + dd] / lead
            if factor.is_zero():
                continue
            quot[i] = factor
            for j, c in enumerate(divisor.coeffs):
                rem[i + j] = rem[i + j] - factor * c
        return Polynomial(quot), Polynomial(rem[:dd])

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[1]

    def _require_exact(self, what: str) -> None:
        if not self.is_exact:
            raise ValidationError(f"{what} requires exact-mode coefficients")

    def primitive(self) -> "Polynomial":
        """Divide by the positive rational content; sign is preserved."""
        self._require_exact("primitive part")
        if self.is_zero():
            return self
        nums = [c.raw.numerator for c in self.coeffs]
        dens = [c.raw.denominator for c in self.coeffs]
        g = gmpy2.mpz(0)
        for n in nums:
            g = gmpy2.gcd(g, n)
        l = gmpy2.mpz(1)
        for d in dens:
            l = gmpy2.lcm(l, d)
        content = Scalar.exact(mpq(g, l))
        return Polynomial([c / content for c in self.coeffs])

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(ONE / self.leading)


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic greatest common divisor over the rationals (exact mode only)."""
    p._require_exact("polynomial gcd")
    q._require_exact("polynomial gcd")
    a, b = p, q
    while not b.is_zero():
        r = a % b
        a, b = b, (r.primitive() if not r.is_zero() else r)
    return a.monic() if not a.is_zero() else a


def square_free_part(p: Polynomial) -> Polynomial:
    """p divided by gcd(p, p'): the same distinct roots, all simple."""
    if p.is_zero():
        raise ValidationError("square-free part of the zero polynomial")
    p._require_exact("square-free part")
    if p.degree == 0:
        return Polynomial.one()
    g = gcd(p, p.derivative())
    return (p // g).primitive()


# -- Sturm machinery ----------------------------------------------------------


def sturm_chain(p: Polynomial) -> list[Polynomial]:
    """Sturm chain of a square-free polynomial, content-normalized per step."""
    p._require_exact("Sturm chain")
    chain = [p.primitive(), p.derivative().primitive()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        rem = chain[-2] % chain[-1]
        if rem.is_zero():
            break
        chain.append((-rem).primitive())
    return [c for c in chain if not c.is_zero()]


def _variations(values: Sequence[Scalar]) -> int:
    signs = [v.sign() for v in values if not v.is_zero()]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def variations_at(chain: Sequence[Polynomial], x: Scalar) -> int:
    return _variations([c.evaluate(x) for c in chain])


def _variations_at_inf(chain: Sequence[Polynomial], positive: bool) -> int:
    if positive:
        return _variations([c.leading for c in chain])
    return _variations(
        [c.leading if c.degree % 2 == 0 else -c.leading for c in chain]
    )


def count_roots(chain: Sequence[Polynomial], lo: Optional[Scalar], hi: Optional[Scalar]) -> int:
    """Distinct real roots in the half-open interval (lo, hi]; None means infinite."""
    va = variations_at(chain, lo) if lo is not None else _variations_at_inf(chain, False)
    vb = variations_at(chain, hi) if hi is not None else _variations_at_inf(chain, True)
    return va - vb


def cauchy_root_bound(p: Polynomial) -> Scalar:
    """Exact B with every real root of p strictly inside (-B, B)."""
    if p.is_zero():
        raise ValidationError("root bound of the zero polynomial")
    lead = abs(p.leading)
    worst = ZERO
    for c in p.coeffs[:-1]:
        ratio = abs(c) / lead
        if ratio > worst:
            worst = ratio
    return worst + 1


@dataclass(frozen=True)
class RootSet:
    """Disjoint open rational intervals, each holding exactly one distinct real root."""

    intervals: Tuple[Tuple[Scalar, Scalar], ...]
    real_count: int


def isolate_real_roots(p: Polynomial) -> RootSet:
    """Certified isolation of the distinct real roots of ``p`` (exact mode only)."""
    if p.is_zero():
        raise ValidationError("cannot isolate roots of the zero polynomial")
    p._require_exact("root isolation")
    s = square_free_part(p)
    if s.degree == 0:
        return RootSet((), 0)
    chain = sturm_chain(s)
    bound = cauchy_root_bound(s)
    out: list[Tuple[Scalar, Scalar]] = []
    _split(s, chain, -bound, bound, out)
    out.sort(key=lambda iv: iv[0].as_fraction())
    return RootSet(tuple(out), len(out))


def _split(s, chain, lo, hi, out):
    count = count_roots(chain, lo, hi)
    if count == 0:
        return
    if count == 1:
        out.append((lo, hi))
        return
    mid = (lo + hi) / 2
    if s.evaluate(mid).is_zero():
        # mid is itself a root; carve out a certified interval around it
        delta = (hi - lo) / 4
        while True:
            a, b = mid - delta, mid + delta
            if (
                not s.evaluate(a).is_zero()
                and not s.evaluate(b).is_zero()
                and count_roots(chain, a, b) == 1
            ):
                break
            delta = delta / 2
        out.append((a, b))
        _split(s, chain, lo, a, out)
        _split(s, chain, b, hi, out)
    else:
        _split(s, chain, lo, mid, out)
        _split(s, chain, mid, hi, out)


def refine_root(
    p: Polynomial, interval: Tuple[Scalar, Scalar], tol
) -> Tuple[Scalar, Scalar]:
    """Bisect a certified single-root interval until its width is <= tol.

    The interval must exhibit a sign change of ``p``; the sign change is
    maintained through every step, so the root can never escape.
    """
    tol = as_scalar(tol)
    if not tol > ZERO:
        raise ValidationError("tolerance must be positive")
    lo, hi = as_scalar(interval[0]), as_scalar(interval[1])
    flo, fhi = p.evaluate(lo), p.evaluate(hi)
    if flo.is_zero() or fhi.is_zero() or flo.sign() == fhi.sign():
        raise ValidationError("interval does not exhibit a sign change")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        fmid = p.evaluate(mid)
        if fmid.is_zero():
            # the root is exactly mid; return a symmetric certified interval
            delta = tol / 2
            while mid - delta <= lo or mid + delta >= hi:
                delta = delta / 2
            return (mid - delta, mid + delta)
        if fmid.sign() == flo.sign():
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    return (lo, hi)


def _root_position(s, interval, lo, hi, lo_closed, hi_closed) -> bool:
    """Whether the single root of s inside ``interval`` lies in the target range."""
    a, b = interval
    for bound, closed in ((lo, lo_closed), (hi, hi_closed)):
        if bound is not None and a < bound < b and s.evaluate(bound).is_zero():
            return closed
    while (lo is not None and a < lo < b) or (hi is not None and a < hi < b):
        mid = (a + b) / 2
        fmid = s.evaluate(mid)
        if fmid.is_zero():
            ok_lo = lo is None or mid > lo or (lo_closed and mid == lo)
            ok_hi = hi is None or mid < hi or (hi_closed and mid == hi)
            return ok_lo and ok_hi
        if fmid.sign() == s.evaluate(a).sign():
            a = mid
        else:
            b = mid
    ok_lo = lo is None or a >= lo
    ok_hi = hi is None or b <= hi
    return ok_lo and ok_hi


def all_roots_in(
    p: Polynomial,
    lo: Optional[Scalar],
    hi: Optional[Scalar],
    lo_closed: bool = False,
    hi_closed: bool = False,
) -> bool:
    """True iff every root of ``p`` is real and lies in the given interval.

    ``lo``/``hi`` of None stand for the infinite endpoints.  Reality of all
    roots is certified by comparing the Sturm count of the square-free part
    with its degree; conjugate pairs always show up as a deficit there.
    """
    if p.is_zero():
        raise ValidationError("root location of the zero polynomial")
    p._require_exact("root location")
    if p.degree == 0:
        return True
    lo = as_scalar(lo) if lo is not None else None
    hi = as_scalar(hi) if hi is not None else None
    s = square_free_part(p)
    roots = isolate_real_roots(s)
    if roots.real_count < s.degree:
        return False
    return all(
        _root_position(s, iv, lo, hi, lo_closed, hi_closed)
        for iv in roots.intervals
    )
