"""Determinant criteria and end-to-end zero-mapping verification.

Everything here turns a quantitative claim into an assertion: regularity
and Hankel determinants with exact signs, the explicit 2x2 determinant
formulas that exclude mixed parameter schedules for the power-weight
measures, sampled sign-consistency determinants, and the headline check
that a transform maps all roots from its source interval into its target
interval, certified by Sturm isolation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

from .basis import apply_zero_map
from .catalog import ClassicalKind, TransformSpec, make_classical
from .errors import ValidationError
from .linalg import determinant
from .moments import moment_closed
from .poly import (
    Polynomial,
    all_roots_in,
    isolate_real_roots,
    refine_root,
    square_free_part,
)
from .scalar import ONE, ZERO, Scalar, as_scalar

_REFINE_WIDTH = Scalar.exact(1) / 2**24


@dataclass(frozen=True)
class CheckResult:
    name: str
    params: Tuple[Tuple[str, str], ...]
    value: str
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    checks: Tuple[CheckResult, ...]
    worst_margin: Optional[Scalar] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "worst_margin": None if self.worst_margin is None else str(self.worst_margin),
            "checks": [
                {
                    "name": c.name,
                    "params": {k: v for k, v in c.params},
                    "value": c.value,
                    "passed": c.passed,
                }
                for c in self.checks
            ],
        }


def regularity_det(spec: TransformSpec, mus: Sequence) -> Scalar:
    """Determinant of the closed-moment matrix over strictly increasing mus.

    Nonvanishing for every tuple is what regularity of the family's measure
    means; the caller asserts the sign.
    """
    mus = [as_scalar(m) for m in mus]
    if any(not a < b for a, b in zip(mus, mus[1:])):
        raise ValidationError("mu samples must be strictly increasing")
    n = len(mus)
    matrix = [[moment_closed(spec, i, mu) for mu in mus] for i in range(n)]
    return determinant(matrix)


def hankel_delta(moments: Union[Callable[[int], Scalar], Sequence], n: int) -> Scalar:
    """The (n+1) x (n+1) Hankel determinant of a monomial moment sequence."""
    if n < 0:
        raise ValidationError("hankel order must be nonnegative")
    get = moments.__getitem__ if hasattr(moments, "__getitem__") else moments
    matrix = [[as_scalar(get(i + j)) for j in range(n + 1)] for i in range(n + 1)]
    return determinant(matrix)


def delta1_counterexamples(
    alpha0, gamma0, sigma, mu, case: str
) -> Tuple[Scalar, Scalar]:
    """The first Hankel determinant of a mixed-pattern power-weight family,
    computed directly and via its printed closed form.

    ``case`` selects how many leading indices carry the constant-numerator
    pattern: ``"n0_ge_2"`` (at least the first two) or ``"n0_eq_1"`` (only
    the first).  Both expressions are negative for large mu, which is what
    rules those schedules out; monomial moments are normalized to index 0.
    """
    alpha0, gamma0 = as_scalar(alpha0), as_scalar(gamma0)
    sigma, mu = as_scalar(sigma), as_scalar(mu)
    p = gamma0 + mu
    q = p + 1
    if p.is_zero() or q.is_zero():
        raise ValidationError("denominators vanish at this mu")
    ratio1 = alpha0 / p
    if case == "n0_ge_2":
        ratio2 = alpha0**2 / (p * q)
        tilde2 = ratio2 + 2 * sigma * ratio1 + sigma**2
        formula = -(alpha0**2) / (p**2 * q)
    elif case == "n0_eq_1":
        ratio2 = alpha0 * (alpha0 + sigma * p) / (p * q)
        tilde2 = ratio2 + sigma * ratio1 + sigma**2
        formula = -alpha0 * (alpha0 + sigma * p) / (p**2 * q)
    else:
        raise ValidationError(f"unknown case {case!r}")
    tilde0 = ONE
    tilde1 = ratio1 + sigma
    direct = determinant([[tilde0, tilde1], [tilde1, tilde2]])
    return direct, formula


def delta1_negative_mu(alpha0, gamma0, sigma, case: str, start=1) -> Scalar:
    """Smallest mu of the doubling sequence start, 2*start, ... at which the
    first Hankel determinant of the mixed pattern is negative (with positive
    denominators, so the sign is meaningful)."""
    alpha0, gamma0, sigma = as_scalar(alpha0), as_scalar(gamma0), as_scalar(sigma)
    mu = as_scalar(start)
    for _ in range(128):
        p = gamma0 + mu
        if p > ZERO:
            direct, _ = delta1_counterexamples(alpha0, gamma0, sigma, mu, case)
            if direct < ZERO:
                return mu
        mu = mu * 2
    raise ValidationError("no negative determinant found by doubling search")


_SSC_KERNELS = ("x_pow_mu", "mu_pow_x", "x_pow_logq_mu")


def ssc_sample_check(
    omega: str,
    x_grid: Sequence,
    mu_grid: Sequence,
    q=None,
    precision_bits: int = 256,
) -> Scalar:
    """Determinant of the kernel matrix on one pair of increasing grids.

    A sampled check only: the caller asserts the determinant is nonzero and
    reports "no violation found", never a proof.
    """
    if omega not in _SSC_KERNELS:
        raise ValidationError(f"unknown kernel {omega!r}; use one of {_SSC_KERNELS}")
    xs = [as_scalar(x) for x in x_grid]
    mus = [as_scalar(m) for m in mu_grid]
    if len(xs) != len(mus) or not xs:
        raise ValidationError("grids must be nonempty and of equal length")
    for grid in (xs, mus):
        if any(not a < b for a, b in zip(grid, grid[1:])):
            raise ValidationError("grids must be strictly increasing")
    if any(m <= ZERO for m in mus):
        raise ValidationError("mu grid must be positive")
    if omega != "mu_pow_x" and any(x <= ZERO for x in xs):
        raise ValidationError("x grid must be positive for this kernel")
    if omega == "x_pow_logq_mu":
        q = as_scalar(q)
        if not (ZERO < q < ONE):
            raise ValidationError("x_pow_logq_mu requires 0 < q < 1")

    def entry(x: Scalar, mu: Scalar) -> Scalar:
        xf = x.to_floating(precision_bits)
        mf = mu.to_floating(precision_bits)
        if omega == "x_pow_mu":
            return xf.pow_real(mf)
        if omega == "mu_pow_x":
            return mf.pow_real(xf)
        exponent = mf.log() / q.to_floating(precision_bits).log()
        return xf.pow_real(exponent)

    matrix = [[entry(x, mu) for mu in mus] for x in xs]
    return determinant(matrix)


# -- the headline property -----------------------------------------------------


def _interval_margin(spec, image) -> Optional[Scalar]:
    """Smallest certified distance from an image root to a finite target
    endpoint; None when the target has no finite endpoint or the image is
    constant.  Conservative: can be zero or negative when a root sits within
    refinement width of an endpoint."""
    bounds = [b for b in (spec.target.lo, spec.target.hi) if b is not None]
    if not bounds or image.degree < 1:
        return None
    simple = square_free_part(image)  # refinement needs a sign change
    margin = None
    for interval in isolate_real_roots(simple).intervals:
        lo, hi = refine_root(simple, interval, _REFINE_WIDTH)
        for b in bounds:
            dist = max(abs(lo - b), abs(hi - b)) - (hi - lo)
            if margin is None or dist < margin:
                margin = dist
    return margin


def zero_map_property(spec: TransformSpec, roots: Sequence) -> VerificationReport:
    """Build the monic polynomial with the given roots, push it through the
    transform, and certify that every image root is real and in the target.

    Roots must be exact rationals inside the source interval (closed
    endpoints included where the family closes them).
    """
    roots = [as_scalar(r) for r in roots]
    for r in roots:
        if not r.is_exact:
            raise ValidationError("roots must be exact rationals")
        if not spec.source.contains(r):
            raise ValidationError(f"root {r} is outside the source {spec.source}")
    if spec.degree_cap is not None and len(roots) > spec.degree_cap:
        raise ValidationError(
            f"{spec.family.value} transforms degrees up to {spec.degree_cap}"
        )
    p = Polynomial.from_roots(roots)
    image = apply_zero_map(p, spec)
    params = (
        ("family", spec.family.value),
        ("roots", "[" + ", ".join(str(r) for r in roots) + "]"),
    )
    checks: List[CheckResult] = []
    degree_ok = image.degree == len(roots)
    checks.append(
        CheckResult("image_degree_preserved", params, str(image.degree), degree_ok)
    )
    if degree_ok and len(roots) > 0:
        inside = all_roots_in(
            image,
            spec.target.lo,
            spec.target.hi,
            spec.target.lo_closed,
            spec.target.hi_closed,
        )
        value = "all real, in " + str(spec.target) if inside else "violation"
        checks.append(CheckResult("image_roots_in_target", params, value, inside))
    margin = _interval_margin(spec, image) if all(c.passed for c in checks) else None
    return VerificationReport(tuple(checks), margin)


def default_mu_samples(spec: TransformSpec, count: int = 3) -> List[Scalar]:
    """Deterministic admissible parameter samples, interior to the source."""
    lo = spec.source.lo if spec.source.lo is not None else Scalar.exact(-4)
    if spec.source.hi is None:
        offsets = [Scalar.exact(1) / 2, Scalar.exact(1), Scalar.exact(5) / 2]
        while len(offsets) < count:
            offsets.append(offsets[-1] + 1)
        return [lo + o for o in offsets[:count]]
    width = spec.source.hi - lo
    return [lo + width * Scalar.exact(i) / (count + 1) for i in range(1, count + 1)]


def random_source_roots(spec: TransformSpec, rng: random.Random, max_degree: int = 8):
    """A random multiset of exact rational roots inside the source interval.

    Repeated roots appear with positive probability, and families with a
    closed source endpoint occasionally receive the endpoint itself.
    """
    cap = max_degree if spec.degree_cap is None else min(max_degree, spec.degree_cap)
    degree = rng.randint(1, cap)
    lo = spec.source.lo if spec.source.lo is not None else Scalar.exact(-12)
    hi = spec.source.hi if spec.source.hi is not None else lo + 12
    roots: List[Scalar] = []
    while len(roots) < degree:
        if roots and rng.random() < 0.2:
            roots.append(rng.choice(roots))
            continue
        if spec.source.lo_closed and rng.random() < 0.125:
            roots.append(lo)
            continue
        den = rng.randint(2, 48)
        num = rng.randint(1, den - 1)
        roots.append(lo + (hi - lo) * Scalar.exact(num) / den)
    return roots


def run_zero_map_batch(
    spec: TransformSpec,
    instances: int = 200,
    max_degree: int = 8,
    seed: int = 0,
) -> VerificationReport:
    """Run the zero-mapping property over seeded random root multisets.

    Only failures become report entries; a summary entry carries the batch
    size.  The worst margin across instances is retained.
    """
    rng = random.Random(seed)
    failures: List[CheckResult] = []
    worst: Optional[Scalar] = None
    for _ in range(instances):
        roots = random_source_roots(spec, rng, max_degree)
        report = zero_map_property(spec, roots)
        if not report.passed:
            failures.extend(c for c in report.checks if not c.passed)
        if report.worst_margin is not None:
            if worst is None or report.worst_margin < worst:
                worst = report.worst_margin
    summary = CheckResult(
        "zero_map_batch",
        (
            ("family", spec.family.value),
            ("instances", str(instances)),
            ("max_degree", str(max_degree)),
            ("seed", str(seed)),
        ),
        f"{len(failures)} failures",
        not failures,
    )
    return VerificationReport(tuple(failures) + (summary,), worst)


def run_classical_batch(
    which: Union[ClassicalKind, str],
    instances: int = 200,
    max_degree: int = 8,
    seed: int = 0,
) -> VerificationReport:
    """Random-instance check of a classical transform's root-location claim.

    The derivative multiplier is checked for preserving real-rootedness;
    the other two for preserving positive-rootedness.
    """
    transform = make_classical(which)
    positive = transform.kind is not ClassicalKind.DERIVATIVE_MULTIPLIER
    rng = random.Random(seed)
    failures: List[CheckResult] = []
    for _ in range(instances):
        degree = rng.randint(1, max_degree)
        roots = []
        for _ in range(degree):
            den = rng.randint(2, 24)
            num = rng.randint(1, 6 * den - 1)
            root = Scalar.exact(num) / den
            roots.append(root if positive else root - 3)
        image = transform.apply(Polynomial.from_roots(roots))
        if image.is_zero():
            continue
        lo = Scalar.exact(0) if positive else None
        ok = all_roots_in(image, lo, None)
        if not ok:
            failures.append(
                CheckResult(
                    "classical_root_location",
                    (
                        ("transform", transform.kind.value),
                        ("roots", "[" + ", ".join(str(r) for r in roots) + "]"),
                    ),
                    "violation",
                    False,
                )
            )
    summary = CheckResult(
        "classical_batch",
        (
            ("transform", transform.kind.value),
            ("instances", str(instances)),
            ("max_degree", str(max_degree)),
            ("seed", str(seed)),
        ),
        f"{len(failures)} failures",
        not failures,
    )
    return VerificationReport(tuple(failures) + (summary,))
