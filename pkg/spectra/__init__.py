"""
Robin spectra of the disk: special functions, closed-form secular roots and
the radial finite-element pencil.
"""

from .base import Branch, DiskEigenpair, DiskGeometry, FourierMode, Provenance, SectorSolver
from .errors import (
    BesselDomainError,
    BesselOverflowError,
    BracketError,
    CoercivityError,
    CompatibilityError,
    DiscretizationError,
    GeometryError,
    GridAccuracyError,
    GridError,
    QuadratureError,
    RobinLabError,
    StudyError,
)
from .specfun import bessel_i, bessel_i_deriv, bessel_j, bessel_j_deriv, bessel_j_zero
from .disk_analytic import (
    AnalyticSectorSolver,
    dirichlet_eigenpair,
    dirichlet_eigenvalue,
    eval_profile,
    eval_profile_deriv,
    find_lowest_oscillatory,
    find_robin_near,
    find_surface_eigenvalue,
    masses,
    robin_secular,
    secular_residual,
)
from .radial_discrete import (
    DiscreteSectorSolver,
    Grading,
    RadialFunction,
    RadialGrid,
    SectorPencil,
    assemble,
    build_grid,
    h1_delta_gram,
    min_coercivity_eigenvalue,
    norms,
    solve_dirichlet_discrete,
    solve_robin_discrete,
    solve_shifted,
    sweep_grid,
    trace_constant,
    with_delta,
)
from .settings import load_config

__all__ = [
    "Branch",
    "DiskEigenpair",
    "DiskGeometry",
    "FourierMode",
    "Provenance",
    "SectorSolver",
    "RobinLabError",
    "BesselDomainError",
    "BesselOverflowError",
    "BracketError",
    "CoercivityError",
    "CompatibilityError",
    "DiscretizationError",
    "GeometryError",
    "GridAccuracyError",
    "GridError",
    "QuadratureError",
    "StudyError",
    "bessel_j",
    "bessel_j_deriv",
    "bessel_i",
    "bessel_i_deriv",
    "bessel_j_zero",
    "AnalyticSectorSolver",
    "dirichlet_eigenpair",
    "dirichlet_eigenvalue",
    "eval_profile",
    "eval_profile_deriv",
    "find_lowest_oscillatory",
    "find_robin_near",
    "find_surface_eigenvalue",
    "masses",
    "robin_secular",
    "secular_residual",
    "DiscreteSectorSolver",
    "Grading",
    "RadialFunction",
    "RadialGrid",
    "SectorPencil",
    "assemble",
    "build_grid",
    "h1_delta_gram",
    "min_coercivity_eigenvalue",
    "norms",
    "solve_dirichlet_discrete",
    "solve_robin_discrete",
    "solve_shifted",
    "sweep_grid",
    "trace_constant",
    "with_delta",
    "load_config",
]
