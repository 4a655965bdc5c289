"""
Delta sweeps with fitted rates and pass/fail checks.
"""

from .fitting import LogLogFit, filter_floor, fit_loglog, log_range, parse_delta_range
from .experiments import (
    BranchTable,
    CoercivityReport,
    ConcentrationReport,
    ConvergenceReport,
    ResidualStudyReport,
    StudyReport,
    SurfaceReport,
    SweepSpec,
    branch_table,
    dirichlet_table,
    expansion_report,
    robin_comparison,
    trace_study,
    coercivity_study,
    concentration_study,
    convergence_study,
    residual_study,
    surface_limit_study,
    surface_window,
)

__all__ = [
    "LogLogFit",
    "filter_floor",
    "fit_loglog",
    "log_range",
    "parse_delta_range",
    "BranchTable",
    "CoercivityReport",
    "ConcentrationReport",
    "ConvergenceReport",
    "ResidualStudyReport",
    "StudyReport",
    "SurfaceReport",
    "SweepSpec",
    "dirichlet_table",
    "expansion_report",
    "robin_comparison",
    "trace_study",
    "branch_table",
    "coercivity_study",
    "concentration_study",
    "convergence_study",
    "residual_study",
    "surface_limit_study",
    "surface_window",
]
