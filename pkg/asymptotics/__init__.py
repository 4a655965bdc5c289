"""
Asymptotic series in delta for the accumulating Robin branches.
"""

from .expansion import (
    ExpansionSeries,
    ResidualReport,
    build_series,
    eval_lambda,
    eval_profile,
    init_series,
    load_series_table,
    residual_dual_norm,
    series_table,
    step,
    unit_disk_coefficients,
)

__all__ = [
    "ExpansionSeries",
    "ResidualReport",
    "build_series",
    "eval_lambda",
    "eval_profile",
    "init_series",
    "load_series_table",
    "residual_dual_norm",
    "series_table",
    "step",
    "unit_disk_coefficients",
]
