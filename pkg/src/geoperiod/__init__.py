"""Numerical curvature comparison and period-integral decay on model spaces.

The package computes second fundamental forms of horospheres and
geodesic spheres through scalar Jacobi fields, checks the rank
condition that governs period-integral decay over hypersurfaces, and
evaluates oscillatory integrals and Kuznecov-type period sums on flat
tori and the round sphere.

Hot kernels are JIT-compiled with numba when available; set the
environment variable GEOPERIOD_NO_NUMBA=1 to force the pure-numpy path.
"""

from .curvature import (
    ComparisonReport,
    HypersurfaceChart,
    ShapeForm,
    comparison_report,
    geodesic_sheet_chart,
    geodesic_sphere_chart,
    graph_chart,
    horosphere_chart,
    horosphere_shape,
    hypersurface_shape,
    sphere_shape,
    torus_graph_chart,
    torus_plane_chart,
)
from .errors import ConfigError, NumericalError
from .jacobi import (
    GeodesicPath,
    JacobiSolution,
    dirichlet_jacobi,
    integrate_geodesic,
    sine_ratio,
    stable_jacobi,
)
from .kuznecov import (
    KuznecovSeries,
    SpectralBasisSpec,
    lattice_sphere_count,
    legendre_at_zero,
    normalization_residuals,
    parseval_defects,
    sphere_kuznecov,
    sphere_nonzonal_period,
    sphere_zonal_period,
    torus_kuznecov,
    torus_period,
    torus_period_exact,
)
from .manifold import (
    CoshProfile,
    CoshQuadProfile,
    Euclidean,
    FlatTorus,
    PointTangent,
    PolynomialProfile,
    QuadraticProfile,
    RoundSphere,
    SpaceForm,
    WarpedSurface,
    distance,
    exp_map,
    hadamard_alpha0,
    lifted_distance,
    model_from_spec,
    sectional_curvature,
)
from .oscint import (
    BoundCheck,
    BumpAmplitude,
    DecayFit,
    EvalResult,
    HessianComparison,
    LinearPhase,
    LinearSquarePhase,
    OscillatoryProblem,
    QuadraticPhase,
    distance_phase_hessian,
    dyadic_lambda_grid,
    evaluate,
    evaluate_grid,
    fit_decay,
    verify_nondegenerate_bound,
    verify_nonstationary_bound,
)
from .rankcheck import (
    RankReport,
    SweepSummary,
    corollary_screen,
    rank_condition,
    surface_sweep,
)
from .verify import CheckResult, run_checks

__version__ = "0.1.0"

__all__ = [
    "BoundCheck",
    "BumpAmplitude",
    "CheckResult",
    "ComparisonReport",
    "ConfigError",
    "CoshProfile",
    "CoshQuadProfile",
    "DecayFit",
    "Euclidean",
    "EvalResult",
    "FlatTorus",
    "GeodesicPath",
    "HessianComparison",
    "HypersurfaceChart",
    "JacobiSolution",
    "KuznecovSeries",
    "LinearPhase",
    "LinearSquarePhase",
    "NumericalError",
    "OscillatoryProblem",
    "PointTangent",
    "PolynomialProfile",
    "QuadraticPhase",
    "QuadraticProfile",
    "RankReport",
    "RoundSphere",
    "ShapeForm",
    "SpaceForm",
    "SpectralBasisSpec",
    "SweepSummary",
    "WarpedSurface",
    "comparison_report",
    "corollary_screen",
    "dirichlet_jacobi",
    "distance",
    "distance_phase_hessian",
    "dyadic_lambda_grid",
    "evaluate",
    "evaluate_grid",
    "exp_map",
    "fit_decay",
    "geodesic_sheet_chart",
    "geodesic_sphere_chart",
    "graph_chart",
    "hadamard_alpha0",
    "horosphere_chart",
    "horosphere_shape",
    "hypersurface_shape",
    "integrate_geodesic",
    "lattice_sphere_count",
    "legendre_at_zero",
    "lifted_distance",
    "model_from_spec",
    "normalization_residuals",
    "parseval_defects",
    "rank_condition",
    "run_checks",
    "sectional_curvature",
    "sine_ratio",
    "sphere_kuznecov",
    "sphere_nonzonal_period",
    "sphere_shape",
    "sphere_zonal_period",
    "stable_jacobi",
    "surface_sweep",
    "torus_graph_chart",
    "torus_kuznecov",
    "torus_period",
    "torus_period_exact",
    "torus_plane_chart",
    "verify_nondegenerate_bound",
    "verify_nonstationary_bound",
]
