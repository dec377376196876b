"""plectic: exact symbolic exterior calculus for degenerate closed forms.

Builds the transversal-covector thickening of a closed degree-k form with
constant-rank kernel and machine-verifies its claimed properties: closedness,
non-degeneracy, restriction to the original form on the zero section, and
(k-1)-coisotropy of the zero section.  All arithmetic is exact (rational
functions over Q); verdicts never touch floating point.
"""

from .coeff import (
    DivisionByZeroExprError,
    ExprSyntaxError,
    Poly,
    ScalarExpr,
    UnknownVariableError,
    parse_expr,
)
from .errors import ChartMismatchError, DegreeError, PlecticError, PoleError
from .exterior import Chart, CoordinateMap, Form, VectorField, interior_multi
from .fieldtheory import (
    EOMSystem,
    FiberedChart,
    Section,
    eom_residual,
    eom_symbolic_system,
)
from .manifoldspec import ManifoldSpec, SpecError, load_spec
from .report import EVIDENCE, FAIL, PASS, VerificationReport
from .sampling import SampleConfig, sample_points
from .splitting import (
    FormSplit,
    FrameError,
    NotClosedError,
    PreMultisymplecticManifold,
    SplitFrame,
    build_split_frame,
    decompose,
    kernel_at,
    multisymplectic_orthogonal,
    verify_constant_rank,
)
from .thicken import (
    DegreeTooLowError,
    Thickening,
    build_thickening,
    enumerate_fiber_coordinates,
    tautological_form,
    verify_all,
    verify_closed,
    verify_coisotropic,
    verify_nondegenerate,
    verify_zero_section_pullback,
)

__version__ = "0.1.0"

__all__ = [
    "Chart",
    "CoordinateMap",
    "ChartMismatchError",
    "DegreeError",
    "DegreeTooLowError",
    "DivisionByZeroExprError",
    "EOMSystem",
    "EVIDENCE",
    "ExprSyntaxError",
    "FAIL",
    "FiberedChart",
    "Form",
    "FormSplit",
    "FrameError",
    "ManifoldSpec",
    "NotClosedError",
    "PASS",
    "PlecticError",
    "PoleError",
    "Poly",
    "PreMultisymplecticManifold",
    "SampleConfig",
    "ScalarExpr",
    "Section",
    "SpecError",
    "SplitFrame",
    "Thickening",
    "UnknownVariableError",
    "VectorField",
    "VerificationReport",
    "build_split_frame",
    "build_thickening",
    "decompose",
    "enumerate_fiber_coordinates",
    "eom_residual",
    "eom_symbolic_system",
    "interior_multi",
    "kernel_at",
    "load_spec",
    "multisymplectic_orthogonal",
    "parse_expr",
    "sample_points",
    "tautological_form",
    "verify_all",
    "verify_closed",
    "verify_coisotropic",
    "verify_constant_rank",
    "verify_nondegenerate",
    "verify_zero_section_pullback",
]
