"""The catalog of zero-mapping transform families.

Each family fixes a generator of affine pairs ``(g_k, h_k)``, a shift
sequence for the Newton basis, a source interval for the roots of admissible
inputs, and a target interval that will contain every root of the image.
The attached measure (quadrature weight or atomic jumps, see
:mod:`zeromap.moments`) realizes the family's moment ratios, which is what
grounds the zero-mapping guarantee.

Families and their parameter constraints:

``laguerre``      alpha0 >= 0 (after dividing by beta0 > 0); gamma-type weight
                  on (0, inf); maps (0, inf) into (0, inf).
``jacobi``        0 < alpha0 < gamma0 (after normalizing beta0); beta-type
                  weight on (0, 1); maps (0, inf) into (0, 1).
``charlier``      alpha0 < 0, optional sigma1; atomic measure on
                  sigma1 - j for j >= 0; maps (0, inf) into (-inf, sigma1].
``meixner``       beta0 < 0, gamma0 < 0, optional block schedule; atomic
                  measure on the nonnegative integers; maps (0, |gamma0|)
                  into (0, inf).
``krawtchouk``    N >= 1 integer, gamma0 > 0, optional block schedule; the
                  same atomic family truncated at N; maps (0, inf) into
                  (0, N); the transform is defined up to degree N.
``wall``          beta0 < 0, delta0 > beta0, q in (0, 1); atomic measure
                  on the powers q^l; maps (0, 1/|beta0|) into (0, 1).
``q_krawtchouk``  beta0 > 0, N >= 1 integer, q in (0, 1), delta0 fixed to
                  beta0 * q^-N; N + 1 atoms; maps (0, inf) into (q^N, 1);
                  like krawtchouk, the transform is defined up to degree N
                  (the atom count bounds the rank of the mixed basis).
``wall0``         delta0 > 0, q in (0, 1); the beta0 -> 0 limit of wall;
                  maps [0, inf) into (0, 1].  The closed endpoints pair up:
                  the image evaluated at 1 equals the input evaluated at 0,
                  so a root at 0 lands exactly on 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, List, Mapping, Optional, Sequence, Tuple, Union

from .basis import AffinePair, NewtonBasis
from .errors import ValidationError
from .poly import Polynomial
from .scalar import ONE, ZERO, Scalar, as_scalar


class Family(str, enum.Enum):
    LAGUERRE = "laguerre"
    JACOBI = "jacobi"
    CHARLIER = "charlier"
    MEIXNER = "meixner"
    KRAWTCHOUK = "krawtchouk"
    WALL = "wall"
    QKRAWTCHOUK = "q_krawtchouk"
    WALL0 = "wall0"


#: Families whose measures are supported on powers of q.
Q_FAMILIES = (Family.WALL, Family.QKRAWTCHOUK, Family.WALL0)
#: Families with an atomic measure indexed by the nonnegative integers.
DISCRETE_FAMILIES = (Family.CHARLIER, Family.MEIXNER, Family.KRAWTCHOUK)
#: Families with an absolutely continuous measure (quadrature oracle).
CONTINUOUS_FAMILIES = (Family.LAGUERRE, Family.JACOBI)


@dataclass(frozen=True)
class Interval:
    """A real interval with optional infinite endpoints and closure flags."""

    lo: Optional[Scalar]
    hi: Optional[Scalar]
    lo_closed: bool = False
    hi_closed: bool = False

    def contains(self, x) -> bool:
        x = as_scalar(x)
        if self.lo is not None:
            if x < self.lo or (x == self.lo and not self.lo_closed):
                return False
        if self.hi is not None:
            if x > self.hi or (x == self.hi and not self.hi_closed):
                return False
        return True

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        lo = str(self.lo) if self.lo is not None else "-inf"
        hi = str(self.hi) if self.hi is not None else "inf"
        return f"{left}{lo}, {hi}{right}"


@dataclass(frozen=True)
class Schedule:
    """Interleaving pattern of the two discrete-family parameter blocks.

    ``breaks`` lists strictly increasing block boundaries starting at 0; the
    final boundary opens an unbounded terminal block.  Blocks alternate
    between the "mu" pattern (numerator proportional to mu) and the "const"
    pattern (constant numerator), starting with "mu".  The default
    ``Schedule()`` is the trivial all-"mu" schedule.
    """

    breaks: Tuple[int, ...] = (0,)

    def __post_init__(self):
        if not self.breaks or self.breaks[0] != 0:
            raise ValidationError("schedule breakpoints must start at 0")
        if any(not isinstance(b, int) for b in self.breaks):
            raise ValidationError("schedule breakpoints must be integers")
        # A leading empty block is allowed (a schedule that opens with the
        # "const" pattern); interior blocks must be nonempty.
        body = self.breaks[1:] if self.breaks[:2] == (0, 0) else self.breaks
        if any(a >= b for a, b in zip(body, body[1:])):
            raise ValidationError("schedule breakpoints must be strictly increasing")

    def block_of(self, k: int) -> Tuple[str, int]:
        """The (kind, block_number) pair covering index k."""
        if k < 0:
            raise ValidationError("schedule indices are nonnegative")
        idx = len(self.breaks) - 1
        for i in range(len(self.breaks) - 1):
            if k < self.breaks[i + 1]:
                idx = i
                break
        kind = "mu" if idx % 2 == 0 else "const"
        return kind, idx // 2

    def lower_sum(self, ell: int) -> int:
        """Sum of the first ell+1 "mu"-block openings (m_0 + ... + m_ell)."""
        return sum(self.breaks[0 : 2 * ell + 1 : 2])

    def upper_sum(self, ell: int) -> int:
        """Sum of the first ell+1 "const"-block openings; -1 gives 0."""
        if ell < 0:
            return 0
        return sum(self.breaks[1 : 2 * ell + 2 : 2])


TRIVIAL_SCHEDULE = Schedule()


def pairs_for_schedule(
    beta0, gamma0, schedule: Schedule, k: int
) -> Tuple[AffinePair, Scalar]:
    """Affine pair and Newton shift for index k of a scheduled discrete family.

    Returns ``(pair_k, shift)`` where ``shift`` is the Newton-basis shift
    attached to index k (the (k+1)-th shift of the basis).
    """
    beta0 = as_scalar(beta0)
    gamma0 = as_scalar(gamma0)
    kind, ell = schedule.block_of(k)
    if kind == "mu":
        pair = AffinePair(ZERO, beta0 - k, gamma0, ONE)
        shift = Scalar.exact(schedule.upper_sum(ell - 1) - schedule.lower_sum(ell) + k)
    else:
        pair = AffinePair((Scalar.exact(k) - beta0) * gamma0, ZERO, gamma0, ONE)
        shift = beta0 + Scalar.exact(schedule.upper_sum(ell) - schedule.lower_sum(ell) - k)
    return pair, shift


@dataclass(frozen=True)
class TransformSpec:
    """A fully instantiated transform family.

    ``pair_gen`` yields the affine pair at index k >= 0 and ``sigma_gen`` the
    Newton shift at 1-based index k.  The two caps reflect how the finite
    families degenerate: ``pair_cap`` bounds usable pair indices (the
    krawtchouk numerator dies at index N), while ``degree_cap`` bounds the
    transformable degree (a measure with N+1 atoms supports a mixed basis of
    rank at most N+1, so both finite families stop at degree N).
    """

    family: Family
    params: Mapping[str, Scalar]
    source: Interval
    target: Interval
    pair_gen: Callable[[int], AffinePair] = field(repr=False)
    sigma_gen: Callable[[int], Scalar] = field(repr=False)
    schedule: Optional[Schedule] = None
    degree_cap: Optional[int] = None
    pair_cap: Optional[int] = None

    def pair(self, k: int) -> AffinePair:
        if k < 0:
            raise ValidationError("pair indices are nonnegative")
        if self.pair_cap is not None and k >= self.pair_cap:
            raise ValidationError(
                f"{self.family.value} pairs are defined for k < {self.pair_cap}"
            )
        return self.pair_gen(k)

    def pairs(self, m: int) -> List[AffinePair]:
        if self.degree_cap is not None and m > self.degree_cap:
            raise ValidationError(
                f"{self.family.value} transforms degrees up to {self.degree_cap}"
            )
        return [self.pair(k) for k in range(m)]

    def sigma(self, k: int) -> Scalar:
        """The k-th Newton shift, 1-based."""
        if k < 1:
            raise ValidationError("shift indices are 1-based")
        return self.sigma_gen(k)

    def newton_basis(self) -> NewtonBasis:
        return NewtonBasis(self.sigma)

    def __str__(self):
        ps = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.family.value}({ps}): {self.source} -> {self.target}"


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValidationError(message)


def _as_int(value, name: str) -> int:
    s = as_scalar(value)
    if not s.is_exact or s.denominator != 1:
        raise ValidationError(f"{name} must be an integer, got {s}")
    return s.numerator


def _coerce_params(params, kwargs) -> dict:
    merged = dict(params or {})
    merged.update(kwargs)
    return merged


def make_transform(
    family: Union[Family, str],
    params: Optional[Mapping] = None,
    schedule: Union[Schedule, Sequence[int], None] = None,
    **kwargs,
) -> TransformSpec:
    """Instantiate a catalog family after validating its parameter constraints.

    ``params`` (or keyword arguments) hold the family parameters as exact
    rationals (ints, Fractions, or strings like "1/2").  ``schedule`` applies
    to the meixner and krawtchouk families only; it may also be passed inside
    ``params`` as a list of breakpoints.
    """
    family = Family(family)
    raw = _coerce_params(params, kwargs)
    if "schedule" in raw:
        if schedule is not None:
            raise ValidationError("schedule given twice")
        schedule = raw.pop("schedule")
    if schedule is not None and not isinstance(schedule, Schedule):
        schedule = Schedule(tuple(schedule))

    builder = _BUILDERS[family]
    if family in (Family.MEIXNER, Family.KRAWTCHOUK):
        return builder(raw, schedule or TRIVIAL_SCHEDULE)
    if schedule is not None:
        raise ValidationError(f"{family.value} does not take a schedule")
    return builder(raw)


def _take(raw: dict, family: str, names: dict) -> dict:
    unknown = set(raw) - set(names)
    if unknown:
        raise ValidationError(f"{family} got unknown parameters: {sorted(unknown)}")
    out = {}
    for name, default in names.items():
        if name in raw:
            out[name] = raw[name]
        elif default is None:
            raise ValidationError(f"{family} requires parameter {name}")
        else:
            out[name] = default
    return out


def _build_laguerre(raw: dict) -> TransformSpec:
    p = _take(raw, "laguerre", {"alpha0": 0, "beta0": 1})
    alpha0, beta0 = as_scalar(p["alpha0"]), as_scalar(p["beta0"])
    _require(beta0 > ZERO, f"laguerre requires beta0 > 0, got {beta0}")
    a = alpha0 / beta0
    _require(a >= ZERO, f"laguerre requires alpha0/beta0 >= 0, got {a}")
    return TransformSpec(
        family=Family.LAGUERRE,
        params={"alpha0": alpha0, "beta0": beta0},
        source=Interval(ZERO, None),
        target=Interval(ZERO, None),
        pair_gen=lambda k: AffinePair(a + k, ONE, ONE, ZERO),
        sigma_gen=lambda k: ZERO,
    )


def _build_jacobi(raw: dict) -> TransformSpec:
    p = _take(raw, "jacobi", {"alpha0": None, "beta0": 1, "gamma0": None})
    alpha0, beta0 = as_scalar(p["alpha0"]), as_scalar(p["beta0"])
    gamma0 = as_scalar(p["gamma0"])
    _require(beta0 > ZERO, f"jacobi requires beta0 > 0, got {beta0}")
    a = alpha0 / beta0
    _require(a > ZERO, f"jacobi requires alpha0/beta0 > 0, got {a}")
    _require(gamma0 > a, f"jacobi requires gamma0 > alpha0/beta0, got {gamma0} <= {a}")
    return TransformSpec(
        family=Family.JACOBI,
        params={"alpha0": alpha0, "beta0": beta0, "gamma0": gamma0},
        source=Interval(ZERO, None),
        target=Interval(ZERO, ONE),
        pair_gen=lambda k: AffinePair(a + k, ONE, gamma0 + k, ONE),
        sigma_gen=lambda k: ZERO,
    )


def _build_charlier(raw: dict) -> TransformSpec:
    p = _take(raw, "charlier", {"alpha0": None, "sigma1": 0})
    alpha0, sigma1 = as_scalar(p["alpha0"]), as_scalar(p["sigma1"])
    _require(alpha0 < ZERO, f"charlier requires alpha0 < 0, got {alpha0}")
    return TransformSpec(
        family=Family.CHARLIER,
        params={"alpha0": alpha0, "sigma1": sigma1},
        source=Interval(ZERO, None),
        target=Interval(None, sigma1, hi_closed=True),
        pair_gen=lambda k: AffinePair(alpha0, ZERO, ZERO, ONE),
        sigma_gen=lambda k: sigma1 - (k - 1),
    )


def _build_meixner(raw: dict, schedule: Schedule) -> TransformSpec:
    p = _take(raw, "meixner", {"beta0": None, "gamma0": None})
    beta0, gamma0 = as_scalar(p["beta0"]), as_scalar(p["gamma0"])
    _require(beta0 < ZERO, f"meixner requires beta0 < 0, got {beta0}")
    _require(gamma0 < ZERO, f"meixner requires gamma0 < 0, got {gamma0}")
    return TransformSpec(
        family=Family.MEIXNER,
        params={"beta0": beta0, "gamma0": gamma0},
        source=Interval(ZERO, abs(gamma0)),
        target=Interval(ZERO, None),
        pair_gen=lambda k: pairs_for_schedule(beta0, gamma0, schedule, k)[0],
        sigma_gen=lambda k: pairs_for_schedule(beta0, gamma0, schedule, k - 1)[1],
        schedule=schedule,
    )


def _build_krawtchouk(raw: dict, schedule: Schedule) -> TransformSpec:
    p = _take(raw, "krawtchouk", {"N": None, "gamma0": None})
    n = _as_int(p["N"], "N")
    gamma0 = as_scalar(p["gamma0"])
    _require(n >= 1, f"krawtchouk requires N >= 1, got {n}")
    _require(gamma0 > ZERO, f"krawtchouk requires gamma0 > 0, got {gamma0}")
    beta0 = Scalar.exact(n)
    return TransformSpec(
        family=Family.KRAWTCHOUK,
        params={"N": beta0, "gamma0": gamma0},
        source=Interval(ZERO, None),
        target=Interval(ZERO, beta0),
        pair_gen=lambda k: pairs_for_schedule(beta0, gamma0, schedule, k)[0],
        sigma_gen=lambda k: pairs_for_schedule(beta0, gamma0, schedule, k - 1)[1],
        schedule=schedule,
        degree_cap=n,
        pair_cap=n,
    )


def _build_wall(raw: dict) -> TransformSpec:
    p = _take(raw, "wall", {"beta0": None, "delta0": None, "q": None})
    beta0, delta0, q = (as_scalar(p[k]) for k in ("beta0", "delta0", "q"))
    _require(ZERO < q < ONE, f"wall requires 0 < q < 1, got {q}")
    _require(beta0 < ZERO, f"wall requires beta0 < 0, got {beta0}")
    _require(delta0 > beta0, f"wall requires delta0 > beta0, got {delta0} <= {beta0}")
    return TransformSpec(
        family=Family.WALL,
        params={"beta0": beta0, "delta0": delta0, "q": q},
        source=Interval(ZERO, ONE / abs(beta0)),
        target=Interval(ZERO, ONE),
        pair_gen=lambda k: AffinePair(ONE, q**k * beta0, ONE, q**k * delta0),
        sigma_gen=lambda k: ZERO,
    )


def _build_qkrawtchouk(raw: dict) -> TransformSpec:
    p = _take(raw, "q_krawtchouk", {"beta0": None, "N": None, "q": None})
    beta0, q = as_scalar(p["beta0"]), as_scalar(p["q"])
    n = _as_int(p["N"], "N")
    _require(ZERO < q < ONE, f"q_krawtchouk requires 0 < q < 1, got {q}")
    _require(beta0 > ZERO, f"q_krawtchouk requires beta0 > 0, got {beta0}")
    _require(n >= 1, f"q_krawtchouk requires N >= 1, got {n}")
    delta0 = beta0 * q**-n
    return TransformSpec(
        family=Family.QKRAWTCHOUK,
        params={"beta0": beta0, "N": Scalar.exact(n), "q": q, "delta0": delta0},
        source=Interval(ZERO, None),
        target=Interval(q**n, ONE),
        pair_gen=lambda k: AffinePair(ONE, q**k * beta0, ONE, q**k * delta0),
        sigma_gen=lambda k: ZERO,
        degree_cap=n,
    )


def _build_wall0(raw: dict) -> TransformSpec:
    p = _take(raw, "wall0", {"delta0": None, "q": None})
    delta0, q = as_scalar(p["delta0"]), as_scalar(p["q"])
    _require(ZERO < q < ONE, f"wall0 requires 0 < q < 1, got {q}")
    _require(delta0 > ZERO, f"wall0 requires delta0 > 0, got {delta0}")
    return TransformSpec(
        family=Family.WALL0,
        params={"delta0": delta0, "q": q},
        source=Interval(ZERO, None, lo_closed=True),
        target=Interval(ZERO, ONE, hi_closed=True),
        pair_gen=lambda k: AffinePair(ONE, ZERO, ONE, q**k * delta0),
        sigma_gen=lambda k: ZERO,
    )


_BUILDERS = {
    Family.LAGUERRE: _build_laguerre,
    Family.JACOBI: _build_jacobi,
    Family.CHARLIER: _build_charlier,
    Family.MEIXNER: _build_meixner,
    Family.KRAWTCHOUK: _build_krawtchouk,
    Family.WALL: _build_wall,
    Family.QKRAWTCHOUK: _build_qkrawtchouk,
    Family.WALL0: _build_wall0,
}


# -- classical coefficientwise transforms -------------------------------------


class ClassicalKind(str, enum.Enum):
    DERIVATIVE_MULTIPLIER = "derivative_multiplier"
    INVERSE_FACTORIAL = "inverse_factorial"
    CHEBYSHEV_EXPAND = "chebyshev_expand"


_chebyshev_cache: List[Polynomial] = [Polynomial.one(), Polynomial.x()]


def chebyshev_polynomial(k: int) -> Polynomial:
    """First-kind Chebyshev polynomial via the three-term recurrence."""
    if k < 0:
        raise ValidationError("chebyshev index must be nonnegative")
    while len(_chebyshev_cache) <= k:
        t1, t0 = _chebyshev_cache[-1], _chebyshev_cache[-2]
        _chebyshev_cache.append(Polynomial.x() * t1 * 2 - t0)
    return _chebyshev_cache[k]


@dataclass(frozen=True)
class ClassicalTransform:
    kind: ClassicalKind

    def apply(self, p: Polynomial) -> Polynomial:
        if self.kind is ClassicalKind.DERIVATIVE_MULTIPLIER:
            return Polynomial([c * k for k, c in enumerate(p.coeffs)])
        if self.kind is ClassicalKind.INVERSE_FACTORIAL:
            factorial = 1
            out = []
            for k, c in enumerate(p.coeffs):
                factorial *= max(k, 1)
                out.append(c / factorial)
            return Polynomial(out)
        acc = Polynomial.zero()
        for k, c in enumerate(p.coeffs):
            acc = acc + chebyshev_polynomial(k).scale(c)
        return acc


def make_classical(which: Union[ClassicalKind, str]) -> ClassicalTransform:
    """One of the simple coefficientwise transforms usable by the same harness."""
    return ClassicalTransform(ClassicalKind(which))
