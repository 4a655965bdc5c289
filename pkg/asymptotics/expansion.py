"""
Recursive asymptotic series for a Robin eigenvalue accumulating at a sector
Dirichlet eigenvalue.

    Lambda_N(delta) = sum_{k<=N} delta^k lambda_k,  U_N(delta) = sum_{k<=N} delta^k u_k

u_0 is the discrete Dirichlet eigenvector. Step k sets lambda_k = R g_{k-1} g_0
and solves the resonant problem

    (S - lambda_0 M) u_k = sum_{p<k} lambda_{k-p} M u_p   (interior rows)
    u_k(R) = g_{k-1},   (M u_0)^T u_k = 0

through a bordered system whose multiplier returns -lambda_k independently.
Fluxes g_k are read off the boundary row of the same weak form, not by
differencing nodal values.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.sparse import bmat, csc_matrix
from scipy.sparse.linalg import spsolve

from spectra.base import DiskGeometry
from spectra.disk_analytic import dirichlet_eigenvalue
from spectra.errors import (
    CoercivityError,
    CompatibilityError,
    DiscretizationError,
    GridAccuracyError,
)
from spectra.radial_discrete import (
    RadialFunction,
    RadialGrid,
    SectorPencil,
    assemble,
    h1_delta_gram,
    min_coercivity_eigenvalue,
    shifted_operator,
    solve_dirichlet_discrete,
)
from spectra.settings import section

logger = logging.getLogger(__name__)

_EXPANSION = section("expansion")
MAX_ORDER = int(_EXPANSION.get("max_order", 4))
COMPAT_RTOL = float(_EXPANSION.get("compat_rtol", 1e-6))
COMPAT_ATOL = float(_EXPANSION.get("compat_atol", 1e-8))
LAMBDA0_RTOL = float(_EXPANSION.get("lambda0_rtol", 1e-6))
RESIDUAL_ALPHA = float(_EXPANSION.get("residual_alpha", 4.0))


@dataclass
class ExpansionSeries:
    """Coefficients lambda_k, profiles u_k and boundary fluxes g_k of one branch."""
    m: int
    n: int
    pencil: SectorPencil
    lambdas: list[float] = field(default_factory=list)
    profiles: list[RadialFunction] = field(default_factory=list)
    fluxes: list[float] = field(default_factory=list)
    defects: list[float] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.lambdas) - 1

    @property
    def grid(self) -> RadialGrid:
        return self.pencil.grid

    @property
    def geometry(self) -> DiskGeometry:
        return self.pencil.grid.geometry

    def records(self) -> list[tuple[int, float, float]]:
        return [(k, lam, g) for k, (lam, g) in enumerate(zip(self.lambdas, self.fluxes))]


@dataclass
class ResidualReport:
    delta: float
    N: int
    dual_norm: float
    mu_hat: float
    alpha: float


def _boundary_flux(series: ExpansionSeries, k: int) -> float:
    """g_k = (1/R) [S u_k - sum_{p<=k} lambda_{k-p} M u_p] at the boundary dof."""
    pencil = series.pencil
    b = pencil.grid.boundary_dof
    stiff_row = pencil.stiffness.getrow(b)
    mass_row = pencil.mass.getrow(b)
    value = float((stiff_row @ series.profiles[k].coefficients)[0])
    for p in range(k + 1):
        value -= series.lambdas[k - p] * float((mass_row @ series.profiles[p].coefficients)[0])
    return value / pencil.grid.geometry.radius


def init_series(m: int, n: int, grid: RadialGrid) -> ExpansionSeries:
    """Order-0 series seeded with the n-th discrete Dirichlet pair of sector m."""
    pencil = assemble(m, grid)
    pairs = solve_dirichlet_discrete(pencil, n)
    seed = pairs[n - 1]
    exact = dirichlet_eigenvalue(m, n, grid.geometry)
    mismatch = abs(seed.eigenvalue - exact) / exact
    if mismatch > LAMBDA0_RTOL:
        raise GridAccuracyError(
            f"discrete lambda_0={seed.eigenvalue:.12g} differs from {exact:.12g} "
            f"by {mismatch:.2e} on {grid.describe()}"
        )
    series = ExpansionSeries(m=m, n=n, pencil=pencil)
    series.lambdas.append(seed.eigenvalue)
    series.profiles.append(seed.profile)
    series.fluxes.append(_boundary_flux(series, 0))
    series.defects.append(0.0)
    logger.debug("seed m=%d n=%d lambda_0=%.15g g_0=%.15g", m, n, series.lambdas[0], series.fluxes[0])
    return series


def step(series: ExpansionSeries) -> ExpansionSeries:
    """Extend the series by one order."""
    k = series.order + 1
    pencil = series.pencil
    R = pencil.grid.geometry.radius
    lam0 = series.lambdas[0]
    g_prev = series.fluxes[k - 1]
    lam_k = R * g_prev * series.fluxes[0]

    free = pencil.free
    resonant = (pencil.stiffness - lam0 * pencil.mass).tocsr()[free][:, free]
    mass = pencil.mass.tocsr()[free][:, free]
    interior = slice(0, len(free) - 1)
    b = len(free) - 1

    mass_u0 = mass @ series.profiles[0].coefficients[free]
    rhs = -resonant[interior, b].toarray().ravel() * g_prev
    for p in range(1, k):
        rhs += series.lambdas[k - p] * (mass @ series.profiles[p].coefficients[free])[interior]

    border = csc_matrix(mass_u0[interior][:, None])
    system = bmat([[resonant[interior, interior], border], [border.T, None]], format="csc")
    solution = spsolve(system, np.append(rhs, -mass_u0[b] * g_prev))
    if not np.all(np.isfinite(solution)):
        raise DiscretizationError(
            f"bordered system singular at order {k}: lambda_0 is not simple in sector {series.m}"
        )

    lam_compat = -float(solution[-1])
    defect = lam_k - lam_compat
    if abs(defect) > COMPAT_RTOL * abs(lam_k) + COMPAT_ATOL:
        raise CompatibilityError(
            f"order {k}: flux formula gives {lam_k:.12g}, bordered multiplier {lam_compat:.12g}"
        )

    coeffs = pencil.expand(np.append(solution[:-1], g_prev))
    series.lambdas.append(lam_k)
    series.profiles.append(RadialFunction(pencil.grid, coeffs))
    series.defects.append(defect)
    series.fluxes.append(_boundary_flux(series, k))
    logger.debug("order %d: lambda=%.15g defect=%.3e g=%.15g", k, lam_k, defect, series.fluxes[k])
    return series


def build_series(m: int, n: int, grid: RadialGrid, order: int = MAX_ORDER) -> ExpansionSeries:
    series = init_series(m, n, grid)
    while series.order < order:
        step(series)
    return series


def _check_order(series: ExpansionSeries, N: int) -> None:
    if N < 0 or N > series.order:
        raise ValueError(f"order {N} outside [0, {series.order}]")


def eval_lambda(series: ExpansionSeries, delta: float, N: Optional[int] = None) -> float:
    """Lambda_N(delta) by Horner's rule."""
    N = series.order if N is None else N
    _check_order(series, N)
    total = 0.0
    for lam in reversed(series.lambdas[: N + 1]):
        total = total * delta + lam
    return total


def eval_profile(series: ExpansionSeries, delta: float, N: Optional[int] = None) -> RadialFunction:
    """U_N(delta) on the series grid."""
    N = series.order if N is None else N
    _check_order(series, N)
    coeffs = np.zeros(series.grid.dof_count)
    for u in reversed(series.profiles[: N + 1]):
        coeffs = coeffs * delta + u.coefficients
    return RadialFunction(series.grid, coeffs)


def residual_dual_norm(
    series: ExpansionSeries,
    delta: float,
    N: Optional[int] = None,
    alpha: float = RESIDUAL_ALPHA,
) -> ResidualReport:
    """H1_delta-dual norm of (A - mu_hat B) U_hat for the truncated series.

    U_hat is U_N scaled to unit H1_delta norm and mu_hat = Lambda_N + alpha/delta^2.
    """
    N = series.order if N is None else N
    pencil = series.pencil
    theta = min_coercivity_eigenvalue(pencil, delta, alpha)
    if theta <= 0.0:
        raise CoercivityError(f"shifted form not coercive at delta={delta}, alpha={alpha} (theta={theta:.3g})")

    gram = h1_delta_gram(pencil, delta)
    u = eval_profile(series, delta, N).coefficients[pencil.free]
    u = u / math.sqrt(float(u @ gram @ u))
    mu_hat = eval_lambda(series, delta, N) + alpha / (delta * delta)
    residual = shifted_operator(pencil, delta, alpha) @ u - mu_hat * (pencil.M @ u)
    try:
        factor = cho_factor(gram)
    except LinAlgError as e:
        raise DiscretizationError(f"H1_delta Gram not positive definite: {e}") from e
    dual = math.sqrt(max(float(residual @ cho_solve(factor, residual)), 0.0))
    return ResidualReport(delta=delta, N=N, dual_norm=dual, mu_hat=mu_hat, alpha=alpha)


def series_table(series: ExpansionSeries) -> str:
    """Plain-text archive: header line, then ``k lambda_k g_k`` at 17 significant digits."""
    lines = ["k lambda_k g_k"]
    for k, lam, g in series.records():
        lines.append(f"{k} {lam:.17g} {g:.17g}")
    return "\n".join(lines) + "\n"


def load_series_table(text: str) -> list[tuple[int, float, float]]:
    rows = []
    for line in text.splitlines()[1:]:
        if not line.strip():
            continue
        k, lam, g = line.split()
        rows.append((int(k), float(lam), float(g)))
    return rows


def unit_disk_coefficients(m: int, n: int, order: int = 3, radius: float = 1.0) -> list[float]:
    """Closed-form lambda_0..lambda_order (order <= 3) from the secular equation.

    Expanding k J_m'(k R) = J_m(k R)/delta around j_{m,n} gives, on the unit disk,
    lambda_1 = lambda_2 = 2 lambda_0 and lambda_3 = lambda_0 (4 + 2m^2 - 2 lambda_0)/3;
    on radius R the k-th coefficient scales as R^{-(2+k)}.
    """
    if order > 3:
        raise ValueError("closed-form coefficients are available up to order 3")
    lam0 = dirichlet_eigenvalue(m, n, DiskGeometry(1.0))
    unit = [lam0, 2.0 * lam0, 2.0 * lam0, lam0 * (4.0 + 2.0 * m * m - 2.0 * lam0) / 3.0]
    return [unit[k] / radius ** (2 + k) for k in range(order + 1)]
