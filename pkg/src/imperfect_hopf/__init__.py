"""Normal forms of a Hopf bifurcation with broken SO(2) symmetry.

Fixed points, local bifurcation curves, limit cycles and the global
(infinite-period) bifurcations of

    z' = z (mu + i nu - c |z|**2) + eps * z**q * conj(z)**k,  c = sin(alpha0) + i cos(alpha0).
"""

from .normalform import (
    CONST,
    MIXED,
    NONE,
    QUADRATIC,
    DomainError,
    ModelParams,
    PerturbationKind,
    State,
    UVPoint,
    canonicalize_signs,
    from_uv,
    jacobian,
    rescale_epsilon,
    rhs,
    to_uv,
    unscale_epsilon,
    zm,
)
from .equilibria import Equilibrium, NumericalError, StabilityClass, classify, fixed_points
from .curves import (
    BifCurve,
    Codim2Point,
    CurveSet,
    codim2_const,
    curves_const,
    curves_quadratic,
    curves_z2,
    measure_pinning_width,
    pinning_width,
    zm_horn,
)
from .flow import (
    CycleNotFound,
    LimitCycle,
    SeedPolicy,
    StiffnessError,
    Tolerances,
    find_cycles,
    find_limit_cycle,
    integrate,
    portrait,
)
from .globalbif import (
    BoundaryPoint,
    ParamPath,
    PeriodScalingFit,
    degenerate_tb_check,
    discriminate,
    fit_period_scaling,
    gluing_probe,
    locate_boundary,
    locate_snic_het,
)

__all__ = [
    "CONST", "MIXED", "NONE", "QUADRATIC", "DomainError", "ModelParams",
    "PerturbationKind", "State", "UVPoint", "canonicalize_signs", "from_uv", "jacobian",
    "rescale_epsilon", "rhs", "to_uv", "unscale_epsilon", "zm", "Equilibrium",
    "NumericalError", "StabilityClass", "classify", "fixed_points", "BifCurve",
    "Codim2Point", "CurveSet", "codim2_const", "curves_const", "curves_quadratic",
    "curves_z2", "measure_pinning_width", "pinning_width", "zm_horn", "CycleNotFound",
    "LimitCycle", "SeedPolicy", "StiffnessError", "Tolerances", "find_cycles",
    "find_limit_cycle", "integrate", "portrait", "BoundaryPoint", "ParamPath",
    "PeriodScalingFit", "degenerate_tb_check", "discriminate", "fit_period_scaling",
    "gluing_probe", "locate_boundary", "locate_snic_het",
]

__version__ = "0.1.0"
