"""Generalized moments: closed-form ratio products and independent oracles.

For every catalog family the moment at index ``k`` is defined against the
family's Newton basis element of degree ``k``.  This module computes those
moments along two deliberately separate routes:

* closed form: the telescoped product of the family's affine ratios, with
  index 0 normalized to 1 (ratios are normalization invariant);
* measure oracle: direct integration against the family's measure, via
  adaptive high-precision quadrature for the continuous families and
  certified series summation for the atomic ones.  Oracle sums never reuse
  the closed-form ratios, so agreement between the two routes is evidence,
  not bookkeeping.

Atomic oracle moments are normalized by dividing by the index-0 sum, which
cancels the mu-dependent normalizing prefactor of the printed jumps; the
prefactor itself is exposed separately for cross-checking.

The recurrence and functional-equation checks at the bottom run on
normalized moments.  Dividing a moment family by its index-0 member changes
those identities by one extra term (the index-0 identity divides through),
so each check subtracts that term explicitly; residuals are exact zeros in
exact mode wherever the catalog is coherent.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import mpmath
from gmpy2 import mpq

from .catalog import (
    CONTINUOUS_FAMILIES,
    DISCRETE_FAMILIES,
    Q_FAMILIES,
    Family,
    TransformSpec,
)
from .errors import OracleError, PoleError, ValidationError
from .scalar import INFINITY, ONE, ZERO, Scalar, as_scalar, pochhammer, q_pochhammer

_GUARD_BITS = 64
_CONSECUTIVE_SMALL = 6
_MAX_TERMS = 200_000

_local = threading.local()


def _mp_ctx(bits: int):
    cache = getattr(_local, "contexts", None)
    if cache is None:
        cache = _local.contexts = {}
    ctx = cache.get(bits)
    if ctx is None:
        ctx = mpmath.mp.clone()
        ctx.prec = bits
        cache[bits] = ctx
    return ctx


def _to_mp(ctx, s: Scalar):
    q = mpq(s.raw)
    return ctx.mpf(int(q.numerator)) / ctx.mpf(int(q.denominator))


def _from_mp(value, bits: int) -> Scalar:
    sign, man, exp, _ = value._mpf_
    r = mpq(int(man)) * mpq(2) ** int(exp)
    return Scalar.floating(-r if sign else r, bits)


def _require_family(spec: TransformSpec, allowed, what: str) -> None:
    if spec.family not in allowed:
        names = ", ".join(f.value for f in allowed)
        raise ValidationError(f"{what} applies to {names}; got {spec.family.value}")


def _require_admissible(spec: TransformSpec, mu: Scalar) -> None:
    if not spec.source.contains(mu):
        raise ValidationError(
            f"mu = {mu} is outside the admissible interval {spec.source}"
        )


# -- closed forms --------------------------------------------------------------


def ratio(spec: TransformSpec, k: int, mu) -> Scalar:
    """The affine ratio g_k(mu) / h_k(mu) of consecutive moments."""
    mu = as_scalar(mu)
    _require_admissible(spec, mu)
    pair = spec.pair(k)
    denominator = pair.h_at(mu)
    if denominator.is_zero():
        raise PoleError(f"moment ratio {k} has a pole at mu = {mu}")
    return pair.g_at(mu) / denominator


def moment_closed(spec: TransformSpec, k: int, mu) -> Scalar:
    """Product of the first k affine ratios; index 0 is normalized to 1."""
    mu = as_scalar(mu)
    acc = ONE
    for j in range(k):
        acc = acc * ratio(spec, j, mu)
    return acc


def moment_closed_blockform(spec: TransformSpec, k: int, mu) -> Scalar:
    """Direct per-block closed form for the scheduled discrete families.

    Independent of :func:`moment_closed` in shape (no telescoping); the two
    must agree wherever the schedule bookkeeping is coherent.
    """
    _require_family(
        spec, (Family.MEIXNER, Family.KRAWTCHOUK), "block-form closed moment"
    )
    mu = as_scalar(mu)
    _require_admissible(spec, mu)
    beta0 = spec.params["N"] if spec.family is Family.KRAWTCHOUK else spec.params["beta0"]
    gamma0 = spec.params["gamma0"]
    schedule = spec.schedule
    kind, ell = schedule.block_of(k)
    base = pochhammer(-beta0, k) / (gamma0 + mu) ** k
    if kind == "mu":
        j = schedule.upper_sum(ell - 1) - schedule.lower_sum(ell) + k
        power = schedule.lower_sum(ell) - schedule.upper_sum(ell - 1)
    else:
        j = schedule.upper_sum(ell) - schedule.lower_sum(ell)
        power = schedule.lower_sum(ell) - schedule.upper_sum(ell) + k
    return Scalar.exact((-1) ** j) * base * mu**j * gamma0**power


# -- atomic measure data --------------------------------------------------------


def atomic_node(spec: TransformSpec, j: int) -> Scalar:
    """Location of the j-th atom of the family's measure."""
    if j < 0:
        raise ValidationError("atom indices are nonnegative")
    if spec.family is Family.CHARLIER:
        return spec.params["sigma1"] - j
    if spec.family in (Family.MEIXNER, Family.KRAWTCHOUK):
        return Scalar.exact(j)
    if spec.family in Q_FAMILIES:
        return spec.params["q"] ** j
    raise ValidationError(f"{spec.family.value} has no atomic measure")


def atomic_jump(spec: TransformSpec, j: int) -> Scalar:
    """The mu-free jump factor at the j-th atom (exact, nonnegative).

    The full jump of the printed measures carries an extra mu-dependent
    normalizing prefactor, see :func:`oracle_prefactor`; it is positive, so
    nonnegativity of the measure is decided by this factor alone.
    """
    if j < 0:
        raise ValidationError("atom indices are nonnegative")
    p = spec.params
    if spec.family is Family.CHARLIER:
        jump = (-p["alpha0"]) ** j
        for i in range(1, j + 1):
            jump = jump / i
        return jump
    if spec.family in (Family.MEIXNER, Family.KRAWTCHOUK):
        beta0 = p["N"] if spec.family is Family.KRAWTCHOUK else p["beta0"]
        jump = Scalar.exact((-1) ** j) * pochhammer(-beta0, j) / p["gamma0"] ** j
        for i in range(1, j + 1):
            jump = jump / i
        return jump
    if spec.family in (Family.WALL, Family.QKRAWTCHOUK):
        q = p["q"]
        ratio_param = p["delta0"] / p["beta0"]
        return (
            q_pochhammer(ratio_param, q, j)
            / q_pochhammer(q, q, j)
            * (-p["beta0"]) ** j
        )
    if spec.family is Family.WALL0:
        q = p["q"]
        return p["delta0"] ** j * q ** (j * (j - 1) // 2) / q_pochhammer(q, q, j)
    raise ValidationError(f"{spec.family.value} has no atomic measure")


def oracle_prefactor(spec: TransformSpec, mu, precision_bits: int = 256) -> Scalar:
    """The mu-dependent normalizing prefactor of the atomic jumps.

    Equals the reciprocal of the raw index-0 oracle sum; exact for
    krawtchouk, floating elsewhere.
    """
    mu = as_scalar(mu)
    _require_admissible(spec, mu)
    p = spec.params
    if spec.family is Family.KRAWTCHOUK:
        return (1 + mu / p["gamma0"]) ** -p["N"].numerator
    if spec.family is Family.MEIXNER:
        base = (1 + mu / p["gamma0"]).to_floating(precision_bits)
        return base.pow_real(-p["beta0"])
    if spec.family in (Family.WALL, Family.QKRAWTCHOUK):
        q = p["q"].to_floating(precision_bits)
        num = q_pochhammer((-p["beta0"] * mu).to_floating(precision_bits), q, INFINITY)
        den = q_pochhammer((-p["delta0"] * mu).to_floating(precision_bits), q, INFINITY)
        return num / den
    if spec.family is Family.WALL0:
        q = p["q"].to_floating(precision_bits)
        den = q_pochhammer((-p["delta0"] * mu).to_floating(precision_bits), q, INFINITY)
        return 1 / den
    raise ValidationError(f"{spec.family.value} has no atomic prefactor")


# -- oracle summation/quadrature -------------------------------------------------


_RATIO_SLACK = Scalar.exact(1) - Scalar.exact(1) / 2**8


def _sum_positive_series(terms, bits: int) -> Scalar:
    """Sum an eventually-geometric series of one-signed exact terms.

    Terms are accumulated as floats at a guarded precision.  Summation stops
    once six consecutive terms fall below 2^-(bits+24) relative to the
    running sum while the observed term ratio stays below 1 - 2^-8; a
    geometric tail at that ratio then contributes at most 2^-(bits+16)
    relative, below the returned precision.  Parameters pushed against the
    admissible boundary can defeat the ratio guard; that surfaces as an
    error, never as a silently truncated value.
    """
    work = bits + _GUARD_BITS
    eps = Scalar.floating(1, work) / Scalar.exact(2) ** (bits + 24)
    total = Scalar.floating(0, work)
    small_streak = 0
    prev_mag = None
    ratio_ok = False
    for count, term in enumerate(terms):
        t = term.to_floating(work) if term.is_exact else term
        total = total + t
        mag = abs(t)
        if prev_mag is not None and not prev_mag.is_zero():
            ratio_ok = mag <= prev_mag * _RATIO_SLACK
        prev_mag = mag
        scale = abs(total) if abs(total) > ONE else Scalar.floating(1, work)
        if mag <= eps * scale:
            small_streak += 1
            if small_streak >= _CONSECUTIVE_SMALL and ratio_ok:
                return total.to_floating(bits)
        else:
            small_streak = 0
        if count >= _MAX_TERMS:
            raise OracleError("atomic series converges too slowly")
    return total.to_floating(bits)


def _charlier_terms(spec, k, mu):
    rho = spec.newton_basis().polynomial(k)
    alpha0 = spec.params["alpha0"]
    sigma1 = spec.params["sigma1"]
    weight = ONE  # (-alpha0)^j / j!, mu^-j folded in
    j = 0
    while True:
        if j >= k:  # rho vanishes on the first k atoms
            yield rho.evaluate(sigma1 - j) * weight
        j += 1
        weight = weight * (-alpha0) / (j * mu)


def _discrete_terms(spec, k, mu):
    rho = spec.newton_basis().polynomial(k)
    p = spec.params
    beta0 = p["N"] if spec.family is Family.KRAWTCHOUK else p["beta0"]
    gamma0 = p["gamma0"]
    weight = ONE  # (-1)^j poch(-beta0, j) / (j! gamma0^j), mu^j folded in
    j = 0
    while True:
        yield rho.evaluate(j) * weight
        weight = weight * (beta0 - j) * mu / ((j + 1) * gamma0)
        j += 1
        if spec.family is Family.KRAWTCHOUK and j > beta0.numerator:
            return


def _q_atomic_terms(spec, k, mu):
    p = spec.params
    q = p["q"]
    delta0 = p["delta0"]
    z = q**k * mu  # node^k * mu^l accumulates as z^l
    weight = ONE
    power = ONE
    j = 0
    while True:
        yield weight * power
        if spec.family is Family.WALL0:
            weight = weight * delta0 * q**j / (1 - q ** (j + 1))
        else:
            beta0 = p["beta0"]
            factor = (1 - q**j * delta0 / beta0) * (-beta0) / (1 - q ** (j + 1))
            weight = weight * factor
            if weight.is_zero():  # q_krawtchouk terminates
                return
        power = power * z
        j += 1


def _atomic_raw_moment(spec, k, mu, bits: int) -> Scalar:
    """Raw oracle sum (no prefactor, no index-0 normalization)."""
    if spec.family is Family.CHARLIER:
        return _sum_positive_series(_charlier_terms(spec, k, mu), bits)
    if spec.family in (Family.MEIXNER, Family.KRAWTCHOUK):
        terms = _discrete_terms(spec, k, mu)
        if spec.family is Family.KRAWTCHOUK and mu.is_exact:
            total = ZERO
            for term in terms:
                total = total + term
            return total
        return _sum_positive_series(terms, bits)
    terms = _q_atomic_terms(spec, k, mu)
    if spec.family is Family.QKRAWTCHOUK and mu.is_exact:
        total = ZERO
        for term in terms:
            total = total + term
        return total
    return _sum_positive_series(terms, bits)


def _quad_raw_moment(spec, k, mu, bits: int) -> Scalar:
    ctx = _mp_ctx(bits + _GUARD_BITS)
    m = _to_mp(ctx, mu)
    p = spec.params
    a = _to_mp(ctx, p["alpha0"] / p["beta0"])
    # integrate the transform's actual Newton polynomial, not an assumed x^k
    coeffs = [_to_mp(ctx, c) for c in spec.newton_basis().polynomial(k).coeffs]

    def horner(x):
        acc = ctx.mpf(0)
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    exponent = m + a - 1
    if spec.family is Family.LAGUERRE:
        value = ctx.quad(lambda x: horner(x) * x**exponent * ctx.exp(-x), [0, ctx.inf])
    else:
        tail = _to_mp(ctx, p["gamma0"]) - a - 1
        value = ctx.quad(
            lambda x: horner(x) * x**exponent * (1 - x) ** tail, [0, 1]
        )
    if not ctx.isfinite(value):
        raise OracleError(f"quadrature diverged for {spec.family.value} at mu = {mu}")
    return _from_mp(value, bits)


def moment_oracle(
    spec: TransformSpec,
    k: int,
    mu,
    precision_bits: int = 256,
    unnormalized: bool = False,
) -> Scalar:
    """Moment at index k computed directly from the family's measure.

    Normalized moments (the default) divide by the index-0 value, matching
    the closed form's normalization; ``unnormalized`` returns the raw
    integral or series against the measure with the mu-free jumps, which is
    the form that satisfies the parameter-shift recurrences.
    """
    if k < 0:
        raise ValidationError("moment indices are nonnegative")
    mu = as_scalar(mu)
    _require_admissible(spec, mu)
    if spec.family in CONTINUOUS_FAMILIES:
        raw = _quad_raw_moment(spec, k, mu, precision_bits)
        if unnormalized:
            return raw
        return raw / _quad_raw_moment(spec, 0, mu, precision_bits)
    raw = _atomic_raw_moment(spec, k, mu, precision_bits)
    if not unnormalized:
        return raw / _atomic_raw_moment(spec, 0, mu, precision_bits)
    if spec.family is Family.CHARLIER:
        sigma1 = spec.params["sigma1"]
        if sigma1.is_exact and sigma1.denominator == 1:
            return raw * mu ** sigma1.numerator
        return raw * mu.to_floating(precision_bits).pow_real(sigma1)
    return raw


def oracle_moments(
    spec: TransformSpec,
    k_max: int,
    mu,
    precision_bits: int = 256,
    unnormalized: bool = False,
) -> List[Scalar]:
    """Oracle moments for indices 0..k_max (one normalization pass)."""
    return [
        moment_oracle(spec, k, mu, precision_bits, unnormalized)
        for k in range(k_max + 1)
    ]


def oracle_ratio(spec: TransformSpec, k: int, mu, precision_bits: int = 256) -> Scalar:
    """Ratio of consecutive oracle moments; prefactors cancel, so this is
    exact for the terminating families when mu is exact."""
    mu = as_scalar(mu)
    _require_admissible(spec, mu)
    if spec.family in CONTINUOUS_FAMILIES:
        num = _quad_raw_moment(spec, k + 1, mu, precision_bits)
        den = _quad_raw_moment(spec, k, mu, precision_bits)
    else:
        num = _atomic_raw_moment(spec, k + 1, mu, precision_bits)
        den = _atomic_raw_moment(spec, k, mu, precision_bits)
    if den.is_zero():
        raise OracleError(f"oracle moment {k} vanished at mu = {mu}")
    return num / den


# -- reports ------------------------------------------------------------------


@dataclass(frozen=True)
class CheckEntry:
    name: str
    params: Tuple[Tuple[str, str], ...]
    error: Scalar
    passed: bool


@dataclass(frozen=True)
class CheckReport:
    name: str
    tolerance: Scalar
    entries: Tuple[CheckEntry, ...]
    worst_error: Scalar

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "tolerance": str(self.tolerance),
            "worst_error": str(self.worst_error),
            "passed": self.passed,
            "entries": [
                {
                    "name": e.name,
                    "params": {k: v for k, v in e.params},
                    "error": str(e.error),
                    "passed": e.passed,
                }
                for e in self.entries
            ],
        }


def _report(name, tolerance, entries) -> CheckReport:
    worst = ZERO
    for e in entries:
        if abs(e.error) > worst:
            worst = abs(e.error)
    return CheckReport(name, tolerance, tuple(entries), worst)


def check_ratio_identity(
    spec: TransformSpec,
    k_max: int,
    mu_samples: Sequence,
    tolerance=None,
    precision_bits: int = 256,
) -> CheckReport:
    """Compare closed ratios with oracle ratios for k < k_max over mu samples.

    Failures are entries, not exceptions; the report carries the worst
    deviation.  For krawtchouk and q_krawtchouk with exact mu the comparison
    is exact equality.
    """
    tol = as_scalar(tolerance) if tolerance is not None else Scalar.exact(1) / 10**9
    entries = []
    for mu in mu_samples:
        mu = as_scalar(mu)
        exact_cmp = (
            spec.family in (Family.KRAWTCHOUK, Family.QKRAWTCHOUK) and mu.is_exact
        )
        for k in range(k_max):
            closed = ratio(spec, k, mu)
            oracle = oracle_ratio(spec, k, mu, precision_bits)
            err = abs(closed - oracle)
            ok = err.is_zero() if exact_cmp else err <= tol
            entries.append(
                CheckEntry(
                    "ratio_identity",
                    (("k", str(k)), ("mu", str(mu))),
                    err,
                    ok,
                )
            )
    return _report("ratio_identity", tol, entries)


def check_recurrence_x_power(
    spec: TransformSpec, k: int, mu, precision_bits: int = 256
) -> Scalar:
    """Residual of the index/parameter shift identity for the continuous
    families, on unnormalized oracle moments.

    The raw moment at (k, mu) equals the raw moment at (k+1, mu-1) plus the
    (k+1)-th Newton shift times the raw moment at (k, mu-1); normalized
    moments do not satisfy this, so raw quadrature values are used.
    """
    _require_family(spec, CONTINUOUS_FAMILIES, "x-power recurrence")
    mu = as_scalar(mu)
    _require_admissible(spec, mu)
    _require_admissible(spec, mu - 1)
    i_k = moment_oracle(spec, k, mu, precision_bits, unnormalized=True)
    i_next = moment_oracle(spec, k + 1, mu - 1, precision_bits, unnormalized=True)
    i_prev = moment_oracle(spec, k, mu - 1, precision_bits, unnormalized=True)
    return i_k - i_next - spec.sigma(k + 1) * i_prev


def check_recurrence_mu_power(spec: TransformSpec, k: int, mu, step) -> Scalar:
    """Central-difference residual of the derivative identity for the
    discrete families, on normalized closed moments.

    For moments normalized to index 0 the identity reads
    ``mu * I_k' = I_{k+1} + shift_{k+1} I_k - (I_1 + shift_1) I_k``
    (the index-0 identity divides through and is subtracted).  The exact
    derivative is replaced by a central difference, so the residual decays
    quadratically in the step.
    """
    _require_family(spec, DISCRETE_FAMILIES, "mu-power recurrence")
    mu = as_scalar(mu)
    step = as_scalar(step)
    if not step > ZERO:
        raise ValidationError("step must be positive")
    for point in (mu - step, mu, mu + step):
        _require_admissible(spec, point)
    fd = (moment_closed(spec, k, mu + step) - moment_closed(spec, k, mu - step)) / (
        2 * step
    )
    i_k = moment_closed(spec, k, mu)
    i_next = moment_closed(spec, k + 1, mu)
    i_one = moment_closed(spec, 1, mu)
    correction = (i_one + spec.sigma(1)) * i_k
    return mu * fd - i_next - spec.sigma(k + 1) * i_k + correction


def check_q_functional(spec: TransformSpec, k: int, mu) -> Scalar:
    """Residual of the q-scaling functional equation on normalized closed
    moments; exactly zero in exact mode for every coherent q-family.

    Scaling mu by q multiplies the raw moment by (ratio_k(mu) + shift_{k+1});
    normalized moments divide by the index-0 copy of the same identity.
    """
    _require_family(spec, Q_FAMILIES, "q functional equation")
    mu = as_scalar(mu)
    q = spec.params["q"]
    _require_admissible(spec, mu)
    _require_admissible(spec, q * mu)
    factor_k = ratio(spec, k, mu) + spec.sigma(k + 1)
    factor_0 = ratio(spec, 0, mu) + spec.sigma(1)
    lhs = moment_closed(spec, k, q * mu)
    rhs = (factor_k / factor_0) * moment_closed(spec, k, mu)
    return lhs - rhs


def moment_series_blockform(
    spec: TransformSpec, k: int, mu, precision_bits: int = 256
) -> Scalar:
    """The per-block atomic series for the scheduled discrete families,
    summed as printed (product-shape numerator, shifted factorial start).

    Exact for krawtchouk (the series terminates and the prefactor is a
    rational power); floating for meixner.
    """
    _require_family(
        spec, (Family.MEIXNER, Family.KRAWTCHOUK), "block-form series moment"
    )
    mu = as_scalar(mu)
    _require_admissible(spec, mu)
    p = spec.params
    beta0 = p["N"] if spec.family is Family.KRAWTCHOUK else p["beta0"]
    gamma0 = p["gamma0"]
    schedule = spec.schedule
    kind, ell = schedule.block_of(k)
    if kind == "mu":
        start = schedule.upper_sum(ell - 1) - schedule.lower_sum(ell) + k
        width = schedule.lower_sum(ell) - schedule.upper_sum(ell - 1)
    else:
        start = schedule.upper_sum(ell) - schedule.lower_sum(ell)
        width = schedule.lower_sum(ell) - schedule.upper_sum(ell) + k

    def terms():
        # (-1)^j poch(-beta0, j) (mu/gamma0)^j / (j - start)! for j >= start
        base = Scalar.exact((-1) ** start) * pochhammer(-beta0, start) * (
            mu / gamma0
        ) ** start
        j = start
        while True:
            yield base * pochhammer(Scalar.exact(j) - beta0, width)
            base = base * (beta0 - j) * mu / ((j - start + 1) * gamma0)
            if base.is_zero():
                return
            j += 1

    if spec.family is Family.KRAWTCHOUK and mu.is_exact:
        total = ZERO
        for t in terms():
            total = total + t
        return total * oracle_prefactor(spec, mu, precision_bits)
    total = _sum_positive_series(terms(), precision_bits)
    return total * oracle_prefactor(spec, mu, precision_bits)


def meixner_closed_vs_series(
    spec: TransformSpec,
    k_max: int,
    mu_samples: Sequence,
    tolerance=None,
    precision_bits: int = 256,
) -> CheckReport:
    """Adjudicate the scheduled discrete closed forms against their series.

    Four routes are compared pairwise at every (k, mu): the telescoped ratio
    product, the per-block closed form, the per-block series as printed, and
    the generic atomic oracle.  Disagreements are reported, never patched.
    """
    _require_family(
        spec, (Family.MEIXNER, Family.KRAWTCHOUK), "closed-vs-series comparison"
    )
    tol = as_scalar(tolerance) if tolerance is not None else Scalar.exact(1) / 10**12
    exact_cmp = spec.family is Family.KRAWTCHOUK
    entries = []
    for mu in mu_samples:
        mu = as_scalar(mu)
        for k in range(k_max + 1):
            values = {
                "ratio_product": moment_closed(spec, k, mu),
                "block_closed": moment_closed_blockform(spec, k, mu),
                "block_series": moment_series_blockform(spec, k, mu, precision_bits),
                "atomic_oracle": moment_oracle(spec, k, mu, precision_bits),
            }
            names = list(values)
            worst = ZERO
            for i, a in enumerate(names):
                for b in names[i + 1 :]:
                    err = abs(values[a] - values[b])
                    if err > worst:
                        worst = err
            ok = worst.is_zero() if (exact_cmp and mu.is_exact) else worst <= tol
            entries.append(
                CheckEntry(
                    "closed_vs_series",
                    (("k", str(k)), ("mu", str(mu))),
                    worst,
                    ok,
                )
            )
    return _report("closed_vs_series", tol, entries)
