"""Nullflow - null curves in Minkowski 3-space moved by the KdV hierarchy.

The package couples an exact algebra of differential polynomials with the
geometry of null curves. The KdV hierarchy is generated symbolically, each
flow is realised as a local motion of a null curve, and curvature and curves
are evolved numerically. Traveling waves, their Lax pairs and self-similar
solutions obtained from Painleve II are available in closed or reduced form.

Typical usage example:
    from nullflow import CurvatureGrid, evolve_curvature, generate, hierarchy_motion

    print(generate(3).g[3])            # 10*u0^3 + 10*u0*u2 + 5*u1^2 + u4
    grid = CurvatureGrid.from_function(lambda s: 2 / np.cosh(s - 20) ** 2, 40.0, 512)
    states = evolve_curvature(hierarchy_motion(2), grid, dt=1e-3, t_end=1.0)

CLI usage:
    nullflow hierarchy --n 3
    nullflow reconstruct --kappa kappa.csv
    nullflow evolve --hierarchy-n 2 --kappa0 sech2.csv --dt 1e-3 --T 1

Exports:
    This module re-exports the main types and operations together with the
    exception hierarchy. See the exceptions module for the error classes.
"""

import importlib.metadata

from .diffpoly import DiffPoly, Monomial, euler_operator, primitive, total_derivative
from .evolution import (
    CurvatureGrid,
    FlowState,
    consistency_check,
    evolve_curvature,
    evolve_curve,
)
from .exceptions import (
    AlgebraError,
    DomainError,
    EvolutionError,
    FlexPointError,
    FrameDriftError,
    GeometryError,
    InputError,
    InputInvalidError,
    InputNotFoundError,
    InstabilityError,
    InvalidParametersError,
    JetTooShortError,
    NearPoleError,
    NotAdmissibleError,
    NotExactError,
    NotGradientError,
    NotNullError,
    NotPseudoArcError,
    NullflowError,
    OutputWriteError,
    PartialSolution,
    PoleEncounteredError,
    PolynomialParseError,
    SpecialFunctionError,
)
from .geometry import (
    CurveSample,
    Frame,
    MVec3,
    curvature_from_curve,
    integrate_frenet,
    pseudo_arc_reparametrize,
    rescale_curve,
)
from .hierarchy import HierarchyTable, MotionSpec, generate, hierarchy_motion, kdv_rhs, motion_from_p3
from .special import (
    LaxPair,
    WeierstrassParams,
    build_lax,
    lax_residual,
    miura_check,
    mu_invariant,
    painleve2_pole_free,
    painleve2_solve,
    similarity_profile,
    traveling_wave,
    traveling_wave_ode,
    weierstrass_p,
)

__version__ = importlib.metadata.version("nullflow")

__all__ = [
    # Exceptions
    "AlgebraError",
    # Evolution
    "CurvatureGrid",
    # Geometry
    "CurveSample",
    # Algebra
    "DiffPoly",
    "DomainError",
    "EvolutionError",
    "FlexPointError",
    "FlowState",
    "Frame",
    "FrameDriftError",
    "GeometryError",
    # Hierarchy
    "HierarchyTable",
    "InputError",
    "InputInvalidError",
    "InputNotFoundError",
    "InstabilityError",
    "InvalidParametersError",
    "JetTooShortError",
    # Special solutions
    "LaxPair",
    "MVec3",
    "Monomial",
    "MotionSpec",
    "NearPoleError",
    "NotAdmissibleError",
    "NotExactError",
    "NotGradientError",
    "NotNullError",
    "NotPseudoArcError",
    "NullflowError",
    "OutputWriteError",
    "PartialSolution",
    "PoleEncounteredError",
    "PolynomialParseError",
    "SpecialFunctionError",
    "WeierstrassParams",
    "__version__",
    "build_lax",
    "consistency_check",
    "curvature_from_curve",
    "euler_operator",
    "evolve_curvature",
    "evolve_curve",
    "generate",
    "hierarchy_motion",
    "integrate_frenet",
    "kdv_rhs",
    "lax_residual",
    "miura_check",
    "motion_from_p3",
    "mu_invariant",
    "painleve2_pole_free",
    "painleve2_solve",
    "primitive",
    "pseudo_arc_reparametrize",
    "rescale_curve",
    "similarity_profile",
    "total_derivative",
    "traveling_wave",
    "traveling_wave_ode",
    "weierstrass_p",
]
