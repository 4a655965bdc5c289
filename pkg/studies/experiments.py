"""
Delta sweeps that check rates and bounds of the Robin branches.

Each study returns a report whose ``failures`` list names every check that
did not hold; a study only raises when it cannot produce its table at all.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from asymptotics.expansion import (
    RESIDUAL_ALPHA,
    ExpansionSeries,
    build_series,
    eval_lambda,
    residual_dual_norm,
    unit_disk_coefficients,
)
from spectra.base import DiskGeometry
from spectra.disk_analytic import (
    AnalyticSectorSolver,
    dirichlet_eigenpair,
    dirichlet_eigenvalue,
    find_robin_near,
    find_surface_eigenvalue,
    masses,
)
from spectra.errors import StudyError
from spectra.radial_discrete import (
    DEFAULT_ELEMENTS,
    DEFAULT_ORDER,
    DiscreteSectorSolver,
    assemble,
    build_grid,
    min_coercivity_eigenvalue,
    sweep_grid,
    trace_constant,
    with_delta,
)
from spectra.settings import section

from .fitting import LogLogFit, filter_floor, fit_loglog, log_range

logger = logging.getLogger(__name__)

_STUDIES = section("studies")
RHO_FRACTION = float(_STUDIES.get("rho_fraction", 0.5))
ALPHAS = [float(a) for a in _STUDIES.get("alphas", [0.5, 1.0, 2.0, 4.0, 8.0])]
PER_DECADE = int(_STUDIES.get("points_per_decade", 6))
FLOOR_FACTOR = float(_STUDIES.get("floor_factor", 100.0))
MIN_FIT_ROWS = int(_STUDIES.get("min_fit_rows", 3))
FIT_QUALITY = float(_STUDIES.get("fit_quality", 0.98))
CONVERGENCE_RANGES = {
    int(k): [float(v) for v in pair]
    for k, pair in (_STUDIES.get("convergence_ranges") or {0: [0.1, 0.0125]}).items()
}
_SLOPE_TOL = _STUDIES.get("slope_tolerance", {}) or {}
LOW_ORDER_TOL = float(_SLOPE_TOL.get("low_order", 0.25))
HIGH_ORDER_TOL = float(_SLOPE_TOL.get("high_order", 0.5))
RESIDUAL_RANGE = [float(v) for v in _STUDIES.get("residual_range", [0.1, 0.0125])]
RESIDUAL_MARGIN = float(_STUDIES.get("residual_margin", 0.25))
SURFACE_RANGE = [float(v) for v in _STUDIES.get("surface_range", [0.1, 0.001])]
SURFACE_SLOPE_TOL = float(_STUDIES.get("surface_slope_tolerance", 0.25))
SURFACE_LIMIT_TOL = 5e-3


def surface_window(m: int) -> float:
    """Largest delta at which sector m is in the first-order regime of delta^2 lambda + 1."""
    return 1.0 / (4.0 * m * m + 1.0)
CONCENTRATION_RANGE = [float(v) for v in _STUDIES.get("concentration_range", [0.02, 0.0025])]
COERCIVITY_DELTAS = [float(v) for v in _STUDIES.get("coercivity_deltas", [0.1, 0.05, 0.02, 0.01])]
BOUNDARY_SLOPE_MIN = float(_STUDIES.get("boundary_slope_min", 0.9))
MASS_RATIO_MIN = float(_STUDIES.get("mass_ratio_min", 0.9))
SURFACE_MASS_MAX = float(_STUDIES.get("surface_mass_max", 1e-12))
SURFACE_MASS_DELTA = float(_STUDIES.get("surface_mass_delta", 0.01))
MAX_DELTA = 0.5


def convergence_deltas(N: int) -> list[float]:
    key = N if N in CONVERGENCE_RANGES else max(CONVERGENCE_RANGES)
    first, last = CONVERGENCE_RANGES[key]
    return log_range(first, last, PER_DECADE)


def _descending(deltas: Sequence[float]) -> list[float]:
    return sorted((float(d) for d in deltas), reverse=True)


@dataclass
class SweepSpec:
    """Parameters of one delta sweep; an empty delta list selects the study default."""
    m: int = 0
    n: int = 1
    N: int = 1
    deltas: list[float] = field(default_factory=list)
    elements: int = DEFAULT_ELEMENTS
    order: int = DEFAULT_ORDER
    rho: Optional[float] = None
    alpha: float = RESIDUAL_ALPHA
    radius: float = 1.0

    @property
    def geometry(self) -> DiskGeometry:
        return DiskGeometry(self.radius)

    @property
    def rho_value(self) -> float:
        return self.rho if self.rho is not None else RHO_FRACTION * self.radius

    def resolved_deltas(self, default: Sequence[float], min_points: int = 4) -> list[float]:
        deltas = list(self.deltas) or list(default)
        if len(deltas) < min_points:
            raise StudyError(f"a slope fit needs at least {min_points} delta values, got {len(deltas)}")
        if any(d <= 0.0 or d > MAX_DELTA for d in deltas):
            raise StudyError(f"every delta must lie in (0, {MAX_DELTA}]")
        if any(b >= a for a, b in zip(deltas, deltas[1:])):
            raise StudyError("delta list must be strictly decreasing")
        return deltas


class StudyReport:
    """Common surface of the study reports: a CSV table plus pass/fail state."""

    study = ""
    columns: tuple[str, ...] = ()
    failures: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures

    def table_rows(self) -> list[tuple]:
        raise NotImplementedError

    def highlights(self) -> list[tuple[str, str]]:
        """(label, value) lines for the human summary."""
        return []


def _fit_lines(fit: Optional[LogLogFit], prefix: str = "") -> list[tuple[str, str]]:
    if fit is None:
        return [(f"{prefix}fit", "n/a")]
    return [
        (f"{prefix}slope", f"{fit.slope:.4f}"),
        (f"{prefix}constant", f"{fit.constant:.4g}"),
        (f"{prefix}quality", f"{fit.quality:.6f}"),
    ]


# ---------------------------------------------------------------------------
# eigenvalue convergence
# ---------------------------------------------------------------------------

@dataclass
class ConvergenceRow:
    delta: float
    lambda_exact: float
    lambda_series: float
    error: float


@dataclass
class ConvergenceReport(StudyReport):
    m: int
    n: int
    N: int
    rows: list[ConvergenceRow]
    fit: Optional[LogLogFit]
    expected_slope: float
    tolerance: float
    floor: float
    dropped: int
    failures: list[str] = field(default_factory=list)

    study = "converge"
    columns = ("delta", "lambda_exact", "lambda_series", "error")

    @property
    def weak_exponent(self) -> float:
        return self.N - 0.5

    def table_rows(self) -> list[tuple]:
        return [(r.delta, r.lambda_exact, r.lambda_series, r.error) for r in self.rows]

    def highlights(self) -> list[tuple[str, str]]:
        lines = [
            ("mode", f"m={self.m} n={self.n} N={self.N}"),
            ("expected slope", f"{self.expected_slope:g} +/- {self.tolerance:g}"),
            ("weaker exponent", f"{self.weak_exponent:g}"),
            ("floor", f"{self.floor:.3e} ({self.dropped} row(s) dropped)"),
        ]
        return lines + _fit_lines(self.fit)


def convergence_study(spec: SweepSpec) -> ConvergenceReport:
    """|lambda - Lambda_N| against the analytic Robin root over a delta sweep."""
    deltas = spec.resolved_deltas(convergence_deltas(spec.N))
    geometry = spec.geometry
    grid = sweep_grid(geometry, deltas, spec.elements, spec.order)
    series = build_series(spec.m, spec.n, grid, spec.N)
    target = dirichlet_eigenvalue(spec.m, spec.n, geometry)
    floor = max(abs(series.lambdas[0] - target), 1e-12 * target)

    rows = []
    for delta in deltas:
        exact = find_robin_near(target, spec.m, geometry, delta).eigenvalue
        approx = eval_lambda(series, delta, spec.N)
        rows.append(ConvergenceRow(delta, exact, approx, abs(exact - approx)))
        logger.info("delta=%g exact=%.15g series=%.15g", delta, exact, approx)

    kept, dropped = filter_floor([(r.delta, r.error) for r in rows], floor, FLOOR_FACTOR)
    if len(kept) < MIN_FIT_ROWS:
        raise StudyError(
            f"only {len(kept)} row(s) above the floor for N={spec.N}; move the delta range up"
        )
    fit = fit_loglog(kept, MIN_FIT_ROWS)
    expected = spec.N + 1.0
    tolerance = LOW_ORDER_TOL if spec.N <= 2 else HIGH_ORDER_TOL
    report = ConvergenceReport(
        m=spec.m,
        n=spec.n,
        N=spec.N,
        rows=rows,
        fit=fit,
        expected_slope=expected,
        tolerance=tolerance,
        floor=floor,
        dropped=dropped,
    )
    if abs(fit.slope - expected) > tolerance:
        report.failures.append(f"slope {fit.slope:.3f} outside {expected:g} +/- {tolerance:g}")
    if fit.quality < FIT_QUALITY:
        report.failures.append(f"fit quality {fit.quality:.4f} below {FIT_QUALITY}")
    return report


# ---------------------------------------------------------------------------
# surface-mode limit
# ---------------------------------------------------------------------------

@dataclass
class SurfaceRow:
    m: int
    delta: float
    eigenvalue: float

    @property
    def delta2_lambda(self) -> float:
        return self.delta * self.delta * self.eigenvalue


@dataclass
class SurfaceReport(StudyReport):
    rows: list[SurfaceRow]
    fits: dict[int, LogLogFit]
    failures: list[str] = field(default_factory=list)

    study = "surface"
    columns = ("m", "delta", "lambda", "delta2_lambda")

    def table_rows(self) -> list[tuple]:
        return [(r.m, r.delta, r.eigenvalue, r.delta2_lambda) for r in self.rows]

    def highlights(self) -> list[tuple[str, str]]:
        lines = []
        for m, fit in sorted(self.fits.items()):
            lines += _fit_lines(fit, prefix=f"m={m} ")
        return lines


def surface_limit_study(ms: Sequence[int], deltas: Optional[Sequence[float]] = None, radius: float = 1.0) -> SurfaceReport:
    """delta^2 lambda of the surface mode in each sector, with the rate of |delta^2 lambda + 1|.

    Every row is reported. The monotone approach and the slope fit use only
    rows with delta <= surface_window(m); for larger delta the curvature term
    of order m^2 delta^2 dominates. The |delta^2 lambda + 1| bound at delta <= 1e-3
    applies to every row.
    """
    deltas = _descending(deltas or log_range(SURFACE_RANGE[0], SURFACE_RANGE[1], PER_DECADE))
    if any(d > 0.2 for d in deltas):
        raise StudyError("surface limit sweep needs delta <= 0.2")
    geometry = DiskGeometry(radius)
    rows, fits, failures = [], {}, []
    for m in ms:
        sector = [SurfaceRow(m, d, find_surface_eigenvalue(m, geometry, d).eigenvalue) for d in deltas]
        rows += sector
        window = [r for r in sector if r.delta <= surface_window(m) * (1 + 1e-12)]
        scaled = [r.delta2_lambda for r in window]
        if np.any(np.diff(scaled) <= 0.0):
            failures.append(f"m={m}: delta^2 lambda does not increase toward -1")
        for r in sector:
            if r.delta <= 1e-3 * (1 + 1e-9) and abs(r.delta2_lambda + 1.0) > SURFACE_LIMIT_TOL:
                failures.append(f"m={m}: |delta^2 lambda + 1| = {abs(r.delta2_lambda + 1):.3e} at delta={r.delta:g}")
        if len(window) >= MIN_FIT_ROWS:
            fit = fit_loglog([(r.delta, abs(r.delta2_lambda + 1.0)) for r in window])
            fits[m] = fit
            if abs(fit.slope - 1.0) > SURFACE_SLOPE_TOL:
                failures.append(f"m={m}: first-order slope {fit.slope:.3f} not close to 1")
    return SurfaceReport(rows=rows, fits=fits, failures=failures)


# ---------------------------------------------------------------------------
# concentration
# ---------------------------------------------------------------------------

@dataclass
class ConcentrationRow:
    branch: str
    delta: float
    l2_gamma: float
    l2_K: float
    h1: float


@dataclass
class ConcentrationReport(StudyReport):
    rows: list[ConcentrationRow]
    eta: float
    dirichlet_eta: float
    boundary_fit: Optional[LogLogFit]
    surface_mass: float
    rho: float
    failures: list[str] = field(default_factory=list)

    study = "concentrate"
    columns = ("branch", "delta", "l2_gamma", "l2_K", "h1")

    def table_rows(self) -> list[tuple]:
        return [(r.branch, r.delta, r.l2_gamma, r.l2_K, r.h1) for r in self.rows]

    def highlights(self) -> list[tuple[str, str]]:
        return [
            ("rho", f"{self.rho:g}"),
            ("eta", f"{self.eta:.6f}"),
            ("dirichlet eta", f"{self.dirichlet_eta:.6f}"),
            ("surface l2_K/h1", f"{self.surface_mass:.3e} at delta={SURFACE_MASS_DELTA:g}"),
        ] + _fit_lines(self.boundary_fit, prefix="l2_gamma/h1 ")


def concentration_study(spec: SweepSpec) -> ConcentrationReport:
    """Interior mass of the accumulating branch against the surface branch.

    Masses are divided by h1, i.e. eigenfunctions normalized to unit H1 norm.
    """
    deltas = spec.resolved_deltas(log_range(CONCENTRATION_RANGE[0], CONCENTRATION_RANGE[1], PER_DECADE))
    geometry = spec.geometry
    rho = spec.rho_value
    target = dirichlet_eigenvalue(spec.m, spec.n, geometry)

    def row(branch: str, delta: float, pair) -> ConcentrationRow:
        mass = masses(pair, rho)
        return ConcentrationRow(branch, delta, mass["l2_gamma"], mass["l2_K"], mass["h1"])

    limit = row("dirichlet", 0.0, dirichlet_eigenpair(spec.m, spec.n, geometry))
    rows = [limit]
    accumulating = [row("accumulating", d, find_robin_near(target, spec.m, geometry, d)) for d in deltas]
    rows += accumulating
    surface_deltas = _descending(set(deltas) | {SURFACE_MASS_DELTA})
    surface = [row("surface", d, find_surface_eigenvalue(spec.m, geometry, d)) for d in surface_deltas]
    rows += surface

    failures = []
    dirichlet_eta = math.sqrt(limit.l2_K / limit.h1)
    eta = min(math.sqrt(r.l2_K / r.h1) for r in accumulating)
    if eta < MASS_RATIO_MIN * dirichlet_eta:
        failures.append(f"eta {eta:.4f} below {MASS_RATIO_MIN} x Dirichlet {dirichlet_eta:.4f}")
    if limit.l2_gamma != 0.0:
        failures.append(f"Dirichlet limit has boundary mass {limit.l2_gamma:.3e}")

    boundary_fit = fit_loglog([(r.delta, r.l2_gamma / r.h1) for r in accumulating])
    if boundary_fit.slope < BOUNDARY_SLOPE_MIN:
        failures.append(f"l2_gamma/h1 slope {boundary_fit.slope:.3f} below {BOUNDARY_SLOPE_MIN}")

    surface_ratios = [r.l2_K / r.h1 for r in surface]
    if np.any(np.diff(surface_ratios) > 0.0):
        failures.append("surface l2_K/h1 does not decrease with delta")
    at_check = next(r for r in surface if r.delta == SURFACE_MASS_DELTA)
    surface_mass = at_check.l2_K / at_check.h1
    if surface_mass > SURFACE_MASS_MAX:
        failures.append(f"surface l2_K/h1 = {surface_mass:.3e} at delta={SURFACE_MASS_DELTA:g}")

    return ConcentrationReport(
        rows=rows,
        eta=eta,
        dirichlet_eta=dirichlet_eta,
        boundary_fit=boundary_fit,
        surface_mass=surface_mass,
        rho=rho,
        failures=failures,
    )


# ---------------------------------------------------------------------------
# coercivity of the shifted form
# ---------------------------------------------------------------------------

@dataclass
class CoercivityReport(StudyReport):
    m: int
    alphas: list[float]
    deltas: list[float]
    theta: np.ndarray
    alpha_star: float
    theta_star: float
    failures: list[str] = field(default_factory=list)

    study = "coercivity"
    columns = ("alpha", "delta", "theta_min")

    def table_rows(self) -> list[tuple]:
        return [
            (a, d, float(self.theta[i, j]))
            for i, a in enumerate(self.alphas)
            for j, d in enumerate(self.deltas)
        ]

    def highlights(self) -> list[tuple[str, str]]:
        return [("alpha*", f"{self.alpha_star:g}"), ("theta", f"{self.theta_star:.6f}")]


def coercivity_study(
    alphas: Optional[Sequence[float]] = None,
    deltas: Optional[Sequence[float]] = None,
    m: int = 0,
    elements: int = DEFAULT_ELEMENTS,
    order: int = DEFAULT_ORDER,
    radius: float = 1.0,
) -> CoercivityReport:
    """theta_min(delta, alpha) over a grid resolving the smallest layer.

    alpha* is the smallest alpha whose column minimum is positive.
    """
    alphas = sorted(float(a) for a in (alphas or ALPHAS))
    deltas = _descending(deltas or COERCIVITY_DELTAS)
    geometry = DiskGeometry(radius)
    pencil = assemble(m, sweep_grid(geometry, deltas, elements, order))

    theta = np.empty((len(alphas), len(deltas)))
    for j, delta in enumerate(deltas):
        shifted = with_delta(pencil, delta)
        for i, alpha in enumerate(alphas):
            theta[i, j] = min_coercivity_eigenvalue(shifted, delta, alpha)

    columns = theta.min(axis=1)
    coercive = [i for i, value in enumerate(columns) if value > 0.0]
    if not coercive:
        raise StudyError(f"no coercive alpha in {alphas}; extend the alpha list")
    best = coercive[0]
    failures = []
    if np.any(np.diff(theta, axis=0) < -1e-10):
        failures.append("theta_min decreases with alpha at some delta")
    for i, value in enumerate(columns):
        if value <= 0.0:
            logger.warning("alpha=%g is not coercive (min theta %.4f)", alphas[i], value)
    return CoercivityReport(
        m=m,
        alphas=alphas,
        deltas=deltas,
        theta=theta,
        alpha_star=alphas[best],
        theta_star=float(columns[best]),
        failures=failures,
    )


# ---------------------------------------------------------------------------
# residual of the truncated series
# ---------------------------------------------------------------------------

@dataclass
class ResidualStudyReport(StudyReport):
    N: int
    rows: list[tuple[float, float]]
    fit: Optional[LogLogFit]
    minimum_slope: float
    failures: list[str] = field(default_factory=list)

    study = "residual"
    columns = ("delta", "dual_norm")

    def table_rows(self) -> list[tuple]:
        return list(self.rows)

    def highlights(self) -> list[tuple[str, str]]:
        return [("minimum slope", f"{self.minimum_slope:g}")] + _fit_lines(self.fit)


def residual_study(spec: SweepSpec) -> ResidualStudyReport:
    """Dual norm of the series residual over a delta sweep."""
    deltas = spec.resolved_deltas(log_range(RESIDUAL_RANGE[0], RESIDUAL_RANGE[1], PER_DECADE))
    grid = sweep_grid(spec.geometry, deltas, spec.elements, spec.order)
    series = build_series(spec.m, spec.n, grid, spec.N)
    rows = [(d, residual_dual_norm(series, d, spec.N, spec.alpha).dual_norm) for d in deltas]

    minimum = spec.N + 1.5 - RESIDUAL_MARGIN
    fit = fit_loglog(rows, MIN_FIT_ROWS)
    failures = []
    if fit.slope < minimum:
        failures.append(f"residual slope {fit.slope:.3f} below {minimum:g}")
    if np.any(np.diff([r[1] for r in rows]) >= 0.0):
        failures.append("dual norm does not decrease with delta")
    return ResidualStudyReport(N=spec.N, rows=rows, fit=fit, minimum_slope=minimum, failures=failures)


# ---------------------------------------------------------------------------
# branch motion
# ---------------------------------------------------------------------------

@dataclass
class BranchTable(StudyReport):
    m: int
    method: str
    solver: str
    deltas: list[float]
    eigenvalues: list[list[float]]
    failures: list[str] = field(default_factory=list)

    study = "track"
    columns = ("m", "delta", "index", "lambda")

    def table_rows(self) -> list[tuple]:
        return [
            (self.m, d, i, lam)
            for d, values in zip(self.deltas, self.eigenvalues)
            for i, lam in enumerate(values)
        ]

    def highlights(self) -> list[tuple[str, str]]:
        return [("method", f"{self.method} ({self.solver})"), ("branches", str(len(self.eigenvalues[0]) if self.eigenvalues else 0))]


def branch_table(
    m: int,
    deltas: Sequence[float],
    count: int = 3,
    method: str = "analytic",
    elements: int = DEFAULT_ELEMENTS,
    order: int = DEFAULT_ORDER,
    radius: float = 1.0,
) -> BranchTable:
    """Sorted in-sector eigenvalues per delta; every column must fall as delta decreases."""
    deltas = _descending(deltas)
    geometry = DiskGeometry(radius)
    if method == "analytic":
        solver = AnalyticSectorSolver(geometry)
    elif method == "discrete":
        solver = DiscreteSectorSolver(geometry, sweep_grid(geometry, deltas, elements, order))
    else:
        raise StudyError(f"unknown method '{method}'")

    logger.info("%s: sector %d, %d branch(es) over %d delta value(s)", solver.name, m, count, len(deltas))
    eigenvalues = [[p.eigenvalue for p in solver.sector_spectrum(m, d, count)] for d in deltas]
    failures = []
    table = np.array(eigenvalues)
    if len(deltas) > 1 and np.any(np.diff(table, axis=0) > 1e-9 * np.maximum(1.0, np.abs(table[:-1]))):
        failures.append("some branch increases as delta decreases")
    return BranchTable(
        m=m,
        method=method,
        solver=solver.name,
        deltas=deltas,
        eigenvalues=eigenvalues,
        failures=failures,
    )


# ---------------------------------------------------------------------------
# single-shot tables
# ---------------------------------------------------------------------------

@dataclass
class DirichletTable(StudyReport):
    m: int
    eigenvalues: list[float]
    failures: list[str] = field(default_factory=list)

    study = "dirichlet"
    columns = ("m", "n", "lambda")

    def table_rows(self) -> list[tuple]:
        return [(self.m, n, lam) for n, lam in enumerate(self.eigenvalues, start=1)]

    def highlights(self) -> list[tuple[str, str]]:
        return [(f"lambda_{n}", f"{lam:.15g}") for n, lam in enumerate(self.eigenvalues, start=1)]


def dirichlet_table(m: int, count: int = 3, radius: float = 1.0) -> DirichletTable:
    geometry = DiskGeometry(radius)
    return DirichletTable(m=m, eigenvalues=[dirichlet_eigenvalue(m, n, geometry) for n in range(1, count + 1)])


@dataclass
class RobinComparison(StudyReport):
    m: int
    n: int
    rows: list[tuple[float, float, float, float]]
    tolerance: float
    failures: list[str] = field(default_factory=list)

    study = "robin"
    columns = ("m", "n", "delta", "lambda_analytic", "lambda_discrete", "relative_difference")

    def table_rows(self) -> list[tuple]:
        return [(self.m, self.n) + row for row in self.rows]

    def highlights(self) -> list[tuple[str, str]]:
        worst = max((row[3] for row in self.rows), default=0.0)
        return [("mode", f"m={self.m} n={self.n}"), ("largest difference", f"{worst:.3e}")]


def robin_comparison(
    m: int,
    n: int,
    deltas: Sequence[float],
    elements: int = DEFAULT_ELEMENTS,
    order: int = DEFAULT_ORDER,
    radius: float = 1.0,
    tolerance: float = 1e-7,
) -> RobinComparison:
    """Accumulating Robin root by secular equation and by the pencil.

    The discrete match is index n of the ascending sector spectrum, index 0
    being the lowest (surface or low oscillatory) mode. Differences are
    checked for delta >= 0.01.
    """
    deltas = _descending(deltas)
    geometry = DiskGeometry(radius)
    target = dirichlet_eigenvalue(m, n, geometry)
    solver = DiscreteSectorSolver(geometry, sweep_grid(geometry, deltas, elements, order))
    rows, failures = [], []
    for delta in deltas:
        exact = find_robin_near(target, m, geometry, delta).eigenvalue
        discrete = solver.sector_spectrum(m, delta, n + 1)[n].eigenvalue
        gap = abs(discrete - exact) / abs(exact)
        rows.append((delta, exact, discrete, gap))
        if delta >= 0.01 and gap > tolerance:
            failures.append(f"delta={delta:g}: relative difference {gap:.3e} above {tolerance:g}")
    return RobinComparison(m=m, n=n, rows=rows, tolerance=tolerance, failures=failures)


@dataclass
class ExpansionReport(StudyReport):
    series: ExpansionSeries
    failures: list[str] = field(default_factory=list)

    study = "expand"
    columns = ("k", "lambda_k", "g_k", "defect")

    def table_rows(self) -> list[tuple]:
        return [
            (k, lam, g, defect)
            for (k, lam, g), defect in zip(self.series.records(), self.series.defects)
        ]

    def highlights(self) -> list[tuple[str, str]]:
        lam0 = self.series.lambdas[0]
        lines = [("mode", f"m={self.series.m} n={self.series.n} on {self.series.grid.describe()}")]
        for k, lam in enumerate(self.series.lambdas):
            lines.append((f"lambda_{k}", f"{lam:.15g}  (lambda_{k}/lambda_0 = {lam / lam0:.6f})"))
        return lines


def expansion_report(
    m: int,
    n: int,
    N: int,
    elements: int = DEFAULT_ELEMENTS,
    order: int = DEFAULT_ORDER,
    radius: float = 1.0,
) -> ExpansionReport:
    """Series coefficients checked against the closed forms up to order 3."""
    geometry = DiskGeometry(radius)
    series = build_series(m, n, build_grid(geometry, elements, order=order), N)
    closed = unit_disk_coefficients(m, n, min(N, 3), radius)
    tolerances = [1e-8, 1e-6, 1e-5, 1e-4]
    failures = []
    for k, expected in enumerate(closed):
        gap = abs(series.lambdas[k] - expected) / abs(expected)
        if gap > tolerances[k]:
            failures.append(f"lambda_{k}={series.lambdas[k]:.12g} differs from {expected:.12g} by {gap:.2e}")
    return ExpansionReport(series=series, failures=failures)


@dataclass
class TraceReport(StudyReport):
    m: int
    rows: list[tuple[int, float]]
    failures: list[str] = field(default_factory=list)

    study = "trace"
    columns = ("m", "elements", "trace_constant")

    def table_rows(self) -> list[tuple]:
        return [(self.m,) + row for row in self.rows]

    def highlights(self) -> list[tuple[str, str]]:
        return [(f"C* (n={n})", f"{value:.8f}") for n, value in self.rows]


def trace_study(
    m: int = 0,
    elements: int = DEFAULT_ELEMENTS,
    order: int = DEFAULT_ORDER,
    radius: float = 1.0,
    stability: float = 0.1,
) -> TraceReport:
    """Trace constant on n and 2n elements; the two must agree within ``stability``."""
    geometry = DiskGeometry(radius)
    rows = [
        (size, trace_constant(assemble(m, build_grid(geometry, size, order=order))))
        for size in (elements, 2 * elements)
    ]
    failures = []
    coarse, fine = rows[0][1], rows[1][1]
    if abs(fine - coarse) > stability * abs(fine):
        failures.append(f"trace constant moved from {coarse:.6f} to {fine:.6f} under refinement")
    if m == 0 and coarse < (2.0 / radius) * (1.0 - 1e-3):
        failures.append(f"trace constant {coarse:.6f} below the constant-function bound {2.0 / radius:g}")
    return TraceReport(m=m, rows=rows, failures=failures)
