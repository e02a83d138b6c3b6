"""Minimal orthant reflection of jump-driven paths, with a coupled
two-firm reinsurance ruin simulator."""

__version__ = "0.1.0"

from .core import (
    JumpEvent,
    ReflectionMatrix,
    negative_part,
    spectral_radius,
    validate_reflection_matrix,
)
from .dynamics import (
    DrivingPath,
    JumpRecord,
    ReflectedSolution,
    UnreflectedSolution,
    solution_to_csv,
    solve_reflected,
    solve_unreflected,
)
from .errors import (
    DimensionError,
    InvalidPathError,
    MinReflectError,
    NegativeEntryError,
    NoConvergenceError,
    NonSquareError,
    NonzeroDiagonalError,
    NumericalBreakdownError,
)
from .lp import LpProblem, LpResult, LpStatus, solve_lp
from .reflect import (
    ConeTest,
    MinimalJump,
    dual_cone_generators_2d,
    gamma_operator,
    in_dual_cone,
    jump_increment_1d,
    least_fixed_point,
    minimal_jump,
    minimal_jump_lp_problem,
)
from .reinsurance import (
    Region,
    RuinCurves,
    ScenarioConfig,
    TrialOutcome,
    curves_to_csv,
    initial_intensity,
    ruin_curves,
    run_trial,
    sample_driving,
    trial_rng,
    wilson_half_width,
)

__all__ = [
    "__version__",
    "JumpEvent",
    "ReflectionMatrix",
    "negative_part",
    "spectral_radius",
    "validate_reflection_matrix",
    "DrivingPath",
    "JumpRecord",
    "ReflectedSolution",
    "UnreflectedSolution",
    "solution_to_csv",
    "solve_reflected",
    "solve_unreflected",
    "DimensionError",
    "InvalidPathError",
    "MinReflectError",
    "NegativeEntryError",
    "NoConvergenceError",
    "NonSquareError",
    "NonzeroDiagonalError",
    "NumericalBreakdownError",
    "LpProblem",
    "LpResult",
    "LpStatus",
    "solve_lp",
    "ConeTest",
    "MinimalJump",
    "dual_cone_generators_2d",
    "gamma_operator",
    "in_dual_cone",
    "jump_increment_1d",
    "least_fixed_point",
    "minimal_jump",
    "minimal_jump_lp_problem",
    "Region",
    "RuinCurves",
    "ScenarioConfig",
    "TrialOutcome",
    "curves_to_csv",
    "initial_intensity",
    "ruin_curves",
    "run_trial",
    "sample_driving",
    "trial_rng",
    "wilson_half_width",
]
