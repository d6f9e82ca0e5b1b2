"""Zero-mapping polynomial transformations.

A library and CLI for linear transforms that carry every root of a
polynomial from one real interval into another.  The transforms are built
from catalog families of affine moment-ratio pairs; the package also ships
the moment oracles, recurrences, and determinant criteria that certify each
family, plus exact Sturm-sequence root isolation to check the root locations
themselves.
"""

from .basis import (
    AffinePair,
    NewtonBasis,
    apply_zero_map,
    decompose_mixed,
    mixed_basis,
    newton_expand,
    newton_synthesize,
    nondegeneracy,
)
from .catalog import (
    ClassicalKind,
    Family,
    Interval,
    Schedule,
    TransformSpec,
    make_classical,
    make_transform,
    pairs_for_schedule,
)
from .errors import (
    DegenerateBasisError,
    OracleError,
    PoleError,
    SingularMatrixError,
    ValidationError,
    ZeroMapError,
)
from .moments import (
    check_q_functional,
    check_ratio_identity,
    check_recurrence_mu_power,
    check_recurrence_x_power,
    meixner_closed_vs_series,
    moment_closed,
    moment_oracle,
    oracle_ratio,
    ratio,
)
from .poly import Polynomial, RootSet, all_roots_in, isolate_real_roots, refine_root
from .scalar import INFINITY, Scalar, pochhammer, q_pochhammer
from .verify import (
    VerificationReport,
    delta1_counterexamples,
    hankel_delta,
    regularity_det,
    run_classical_batch,
    run_zero_map_batch,
    ssc_sample_check,
    zero_map_property,
)

__version__ = "0.1.0"

__all__ = [
    "AffinePair",
    "ClassicalKind",
    "DegenerateBasisError",
    "Family",
    "INFINITY",
    "Interval",
    "NewtonBasis",
    "OracleError",
    "PoleError",
    "Polynomial",
    "RootSet",
    "Scalar",
    "Schedule",
    "SingularMatrixError",
    "TransformSpec",
    "ValidationError",
    "VerificationReport",
    "ZeroMapError",
    "all_roots_in",
    "apply_zero_map",
    "check_q_functional",
    "check_ratio_identity",
    "check_recurrence_mu_power",
    "check_recurrence_x_power",
    "decompose_mixed",
    "delta1_counterexamples",
    "hankel_delta",
    "isolate_real_roots",
    "make_classical",
    "make_transform",
    "meixner_closed_vs_series",
    "mixed_basis",
    "moment_closed",
    "moment_oracle",
    "newton_expand",
    "newton_synthesize",
    "nondegeneracy",
    "oracle_ratio",
    "pairs_for_schedule",
    "pochhammer",
    "q_pochhammer",
    "ratio",
    "refine_root",
    "regularity_det",
    "run_classical_batch",
    "run_zero_map_batch",
    "ssc_sample_check",
    "zero_map_property",
]
