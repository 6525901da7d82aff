"""Hessian-quotient curvature equations on graph hypersurfaces.

Python bindings for the C++ core: elementary symmetric function calculus on
Garding cones, pointwise graph geometry, the curvature operator and its
linearization, a damped-Newton Dirichlet solver with eps-continuation, the
algebraic property suite, and the boundary barrier checks.
"""

from hqcurv._core import (
    ConeViolation,
    ConfigError,
    admissible,
    barrier_check,
    check_newton_maclaurin,
    check_projection_inequality,
    eta_map,
    g_value,
    in_cone,
    linearize,
    quotient_jet,
    residual,
    run_property_suite,
    sigma,
    sigma_partial,
    sigma_partial2,
    solve,
    surface_data,
)

__all__ = [
    "ConeViolation",
    "ConfigError",
    "admissible",
    "barrier_check",
    "check_newton_maclaurin",
    "check_projection_inequality",
    "eta_map",
    "g_value",
    "in_cone",
    "linearize",
    "quotient_jet",
    "residual",
    "run_property_suite",
    "sigma",
    "sigma_partial",
    "sigma_partial2",
    "solve",
    "surface_data",
]
