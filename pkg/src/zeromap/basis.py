"""Product bases and the zero-mapping transform between them.

Two bases drive everything here.  A Newton basis is the cumulative product
of linear factors ``x - sigma_k``.  A mixed basis is indexed by a list of
affine pairs ``(g_k, h_k)``: its element ``B_k`` multiplies the first ``k``
of the ``g``'s with the remaining ``h``'s.  The transform decomposes a
polynomial in the mixed basis and reassembles the coefficients in the
Newton basis; when the pairs and shifts come from an admissible catalog
family, this carries all roots from the source interval into the target.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Union

from .errors import DegenerateBasisError, SingularMatrixError, ValidationError
from .linalg import solve
from .poly import Polynomial
from .scalar import ONE, Scalar, as_scalar


@dataclass(frozen=True)
class AffinePair:
    """One (g, h) pair with g(x) = alpha + beta*x and h(x) = gamma + delta*x."""

    alpha: Scalar
    beta: Scalar
    gamma: Scalar
    delta: Scalar

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))
        if self.alpha.is_zero() and self.beta.is_zero():
            raise ValidationError("affine pair has identically zero numerator")
        if self.gamma.is_zero() and self.delta.is_zero():
            raise ValidationError("affine pair has identically zero denominator")

    def g(self) -> Polynomial:
        return Polynomial((self.alpha, self.beta))

    def h(self) -> Polynomial:
        return Polynomial((self.gamma, self.delta))

    def g_at(self, x) -> Scalar:
        return self.alpha + self.beta * as_scalar(x)

    def h_at(self, x) -> Scalar:
        return self.gamma + self.delta * as_scalar(x)


def nondegeneracy(pair: AffinePair) -> Scalar:
    """alpha*delta - beta*gamma: the constant Wronskian of (g, h) up to sign.

    Admissible pairs must make this nonzero; only nonvanishing matters, the
    sign convention is not load bearing.
    """
    return pair.alpha * pair.delta - pair.beta * pair.gamma


class NewtonBasis:
    """Cumulative-product basis rho_k(x) = prod_{i=1..k} (x - sigma_i).

    ``sigmas`` is either a sequence or a callable on 1-based indices;
    expanded polynomials are cached as they are materialized.
    """

    def __init__(self, sigmas: Union[Sequence, Callable[[int], Scalar]]):
        if callable(sigmas):
            self._sigma_fn = sigmas
        else:
            materialized = [as_scalar(s) for s in sigmas]

            def from_list(k: int) -> Scalar:
                if k > len(materialized):
                    raise ValidationError(
                        f"newton basis has only {len(materialized)} shifts, index {k} requested"
                    )
                return materialized[k - 1]

            self._sigma_fn = from_list
        self._cache: List[Polynomial] = [Polynomial.one()]

    def sigma(self, k: int) -> Scalar:
        """The k-th shift, 1-based."""
        if k < 1:
            raise ValidationError("shift indices are 1-based")
        return as_scalar(self._sigma_fn(k))

    def polynomial(self, k: int) -> Polynomial:
        """Monomial expansion of the degree-k basis element."""
        if k < 0:
            raise ValidationError("basis degree must be nonnegative")
        while len(self._cache) <= k:
            i = len(self._cache)
            factor = Polynomial((-self.sigma(i), ONE))
            self._cache.append(self._cache[-1] * factor)
        return self._cache[k]


def newton_expand(basis: NewtonBasis, k: int) -> Polynomial:
    return basis.polynomial(k)


def newton_synthesize(coefficients: Sequence, basis: NewtonBasis) -> Polynomial:
    """Sum of coefficients[k] * rho_k in monomial form."""
    acc = Polynomial.zero()
    for k, d in enumerate(coefficients):
        acc = acc + basis.polynomial(k).scale(as_scalar(d))
    return acc


def mixed_basis(pairs: Sequence[AffinePair], m: int) -> List[Polynomial]:
    """The m+1 products B_k = g_0 .. g_{k-1} * h_k .. h_{m-1}."""
    if m < 0:
        raise ValidationError("basis length must be nonnegative")
    if len(pairs) < m:
        raise ValidationError(f"need at least {m} pairs, got {len(pairs)}")
    g_prefix = [Polynomial.one()]
    for pair in pairs[:m]:
        g_prefix.append(g_prefix[-1] * pair.g())
    h_suffix = [Polynomial.one()]
    for pair in reversed(pairs[:m]):
        h_suffix.append(h_suffix[-1] * pair.h())
    h_suffix.reverse()
    return [g_prefix[k] * h_suffix[k] for k in range(m + 1)]


def decompose_mixed(
    p: Polynomial, pairs: Sequence[AffinePair], m: Optional[int] = None
) -> List[Scalar]:
    """Coefficients d with p = sum d_k B_k over the mixed basis of length m.

    The basis depends on m, so embedding a polynomial of lower degree
    requires passing m explicitly.  Exact inputs are solved exactly.
    """
    if p.is_zero() and m is None:
        raise ValidationError("the zero polynomial needs an explicit basis length m")
    if m is None:
        m = p.degree
    if p.degree > m:
        raise ValidationError(f"degree {p.degree} exceeds basis length {m}")
    elements = mixed_basis(pairs, m)
    matrix = [
        [
            elements[k].coeffs[row] if row <= elements[k].degree else Scalar.exact(0)
            for k in range(m + 1)
        ]
        for row in range(m + 1)
    ]
    rhs = [
        p.coeffs[row] if row <= p.degree else Scalar.exact(0) for row in range(m + 1)
    ]
    try:
        return solve(matrix, rhs)
    except SingularMatrixError as exc:
        raise DegenerateBasisError("degenerate mixed basis") from exc


def apply_zero_map(p: Polynomial, spec, m: Optional[int] = None) -> Polynomial:
    """Map p through a transform spec: decompose in its mixed basis, then
    synthesize the coefficients in its Newton basis.

    ``spec`` must supply ``pairs(m)`` and ``sigma(k)``; catalog transform
    specs do.  A degree-m input uses basis length m unless m is given.
    """
    if m is None:
        if p.is_zero():
            raise ValidationError("the zero polynomial needs an explicit basis length m")
        m = p.degree
    d = decompose_mixed(p, spec.pairs(m), m)
    return newton_synthesize(d, NewtonBasis(spec.sigma))
