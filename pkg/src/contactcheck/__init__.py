"""Exact symbolic classification of contact metric manifolds given by a
single chart: frame, metric, Reeb field, and structure tensor.

All tensor computation happens in the fraction field QQ(x1..xn),
optionally extended by sin/cos of the coordinates, so every verdict is a
proof-by-computation on the chart minus the stated excluded locus.  A
finite-difference oracle cross-checks the symbolic tables numerically.
"""

__version__ = "0.1.0"

from .scalars import (  # noqa: E402
    Chart,
    DivisionByZeroFunction,
    DomainPole,
    ExprSyntaxError,
    Scalar,
)
from .manifold import (  # noqa: E402
    KNOWN_CHECKS,
    FrameField,
    ManifoldSpec,
    ParseError,
    SingularFrame,
    ValidationError,
    lie_bracket,
    parse_spec,
    structure_coeffs,
    validate_spec,
)
from .riemann import (  # noqa: E402
    DimensionError,
    InternalCheckError,
    Verdict,
    Witness,
    apply_curvature,
    check_3d_decomposition,
    check_constant_curvature,
    check_flat,
    check_locally_symmetric,
    covariant_derivative,
    curvature_tensor,
    koszul_connection,
    metric_frame,
    nabla_R,
    ricci,
    run_self_tests,
)
from .contact import (  # noqa: E402
    assemble_contact,
    axiom_battery,
    contact_condition,
    h_tensor,
    nijenhuis_check,
    nullity_classify,
    phi_recurrence_solve,
    phi_symmetric_check,
    sasakian_check,
)
from .oracle import (  # noqa: E402
    NumericReport,
    SamplingExhausted,
    cross_validate_connection,
    cross_validate_curvature,
    sample_points,
)
from .report import (  # noqa: E402
    CheckRecord,
    ClassificationReport,
    check_expectations,
    compute_tables,
    emit_json,
    emit_text,
    run_checks,
)

__all__ = [
    "Chart",
    "Scalar",
    "DomainPole",
    "DivisionByZeroFunction",
    "ExprSyntaxError",
    "KNOWN_CHECKS",
    "FrameField",
    "ManifoldSpec",
    "ParseError",
    "ValidationError",
    "SingularFrame",
    "parse_spec",
    "validate_spec",
    "lie_bracket",
    "structure_coeffs",
    "DimensionError",
    "InternalCheckError",
    "Verdict",
    "Witness",
    "metric_frame",
    "koszul_connection",
    "covariant_derivative",
    "curvature_tensor",
    "apply_curvature",
    "ricci",
    "nabla_R",
    "run_self_tests",
    "check_flat",
    "check_constant_curvature",
    "check_locally_symmetric",
    "check_3d_decomposition",
    "assemble_contact",
    "contact_condition",
    "axiom_battery",
    "h_tensor",
    "nullity_classify",
    "sasakian_check",
    "nijenhuis_check",
    "phi_symmetric_check",
    "phi_recurrence_solve",
    "NumericReport",
    "SamplingExhausted",
    "sample_points",
    "cross_validate_connection",
    "cross_validate_curvature",
    "CheckRecord",
    "ClassificationReport",
    "compute_tables",
    "run_checks",
    "emit_text",
    "emit_json",
    "check_expectations",
    "__version__",
]
