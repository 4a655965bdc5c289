"""
Closed-form Robin and Dirichlet spectra of the disk, one Fourier sector at a
time.

In sector m a Robin eigenfunction is v(r) = c J_m(k r) with lambda = k^2 > 0,
or v(r) = A I_m(s r) / I_m(s R) with lambda = -s^2 < 0. The boundary condition
v'(R) = v(R) / delta becomes a secular equation in lambda whose roots are
bracketed between consecutive sector Dirichlet eigenvalues (k R = j_{m,n}).
"""

import logging
import math
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .base import (
    Branch,
    DiskEigenpair,
    DiskGeometry,
    FourierMode,
    Provenance,
    SectorSolver,
)
from .errors import BesselOverflowError, BracketError, GeometryError, QuadratureError
from .settings import section
from .specfun import (
    MAX_ZERO_INDEX,
    bessel_i,
    bessel_i_deriv,
    bessel_j,
    bessel_j_deriv,
    bessel_j_zero,
)

logger = logging.getLogger(__name__)

_ANALYTIC = section("analytic")
SCAN_POINTS = int(_ANALYTIC.get("scan_points", 64))
QUAD_EPSABS = float(_ANALYTIC.get("quad_epsabs", 1e-13))
QUAD_EPSREL = float(_ANALYTIC.get("quad_epsrel", 1e-11))
QUAD_LIMIT = int(_ANALYTIC.get("quad_limit", 200))
RESIDUAL_TOL = 1e-10
_PROFILE_SAMPLES = 2049


def _check_delta(delta: float) -> None:
    if not (delta > 0.0) or not math.isfinite(delta):
        raise GeometryError(f"delta must be positive and finite, got {delta}")


def dirichlet_eigenvalue(m: int, n: int, geometry: DiskGeometry) -> float:
    """(j_{m,n} / R)^2."""
    return (bessel_j_zero(m, n) / geometry.radius) ** 2


def _secular_terms(lam: float, m: int, geometry: DiskGeometry, delta: float) -> tuple[float, float]:
    """The two terms whose difference is the secular function.

    For lambda < 0 both terms carry the factor e^{-sR}.
    """
    R = geometry.radius
    if lam > 0.0:
        k = math.sqrt(lam)
        return k * bessel_j_deriv(m, k * R), bessel_j(m, k * R) / delta
    if lam < 0.0:
        s = math.sqrt(-lam)
        return (
            s * bessel_i_deriv(m, s * R, scaled=True),
            bessel_i(m, s * R, scaled=True) / delta,
        )
    return 0.0, (1.0 / delta if m == 0 else 0.0)


def robin_secular(lam: float, m: int, geometry: DiskGeometry, delta: float) -> float:
    """sqrt(lam) J_m'(sqrt(lam) R) - J_m(sqrt(lam) R) / delta, or its scaled I-form."""
    _check_delta(delta)
    flux, trace = _secular_terms(lam, m, geometry, delta)
    value = flux - trace
    if not math.isfinite(value):
        raise BesselOverflowError(f"secular function not finite at lambda={lam}")
    return value


def secular_residual(lam: float, m: int, geometry: DiskGeometry, delta: float) -> float:
    """|f(lam)| relative to the size of its two terms."""
    flux, trace = _secular_terms(lam, m, geometry, delta)
    size = abs(flux) + abs(trace)
    if size == 0.0:
        return 0.0
    return abs(flux - trace) / size


def _single_root(func: Callable[[float], float], lo: float, hi: float, what: str) -> float:
    """Root of func on [lo, hi], requiring exactly one sign change on the scan."""
    grid = np.linspace(lo, hi, SCAN_POINTS)
    values = np.array([func(t) for t in grid])
    changes = np.nonzero(values[:-1] * values[1:] < 0.0)[0]
    if len(changes) != 1:
        raise BracketError(
            f"{what}: {len(changes)} sign changes on [{lo:.6g}, {hi:.6g}]; "
            "delta too large for this branch"
        )
    i = changes[0]
    xtol = 1e-15 * max(1.0, abs(grid[i + 1]))
    return brentq(func, grid[i], grid[i + 1], xtol=xtol, rtol=4.0 * np.finfo(float).eps, maxiter=200)


def _j_profile_scale(k: float, m: int, geometry: DiskGeometry) -> float:
    R = geometry.radius
    x = k * R
    value, slope = bessel_j(m, x), bessel_j_deriv(m, x)
    norm2 = 0.5 * R * R * (slope * slope + (1.0 - (m / x) ** 2) * value * value)
    scale = 1.0 / math.sqrt(norm2)
    samples = bessel_j(m, k * np.linspace(0.0, R, _PROFILE_SAMPLES))
    if samples[np.argmax(np.abs(samples))] < 0.0:
        scale = -scale
    return scale


def _i_profile_scale(s: float, m: int, geometry: DiskGeometry) -> float:
    R = geometry.radius
    x = s * R
    ratio = bessel_i_deriv(m, x, scaled=True) / bessel_i(m, x, scaled=True)
    norm2 = 0.5 * R * R * ((1.0 + (m / x) ** 2) - ratio * ratio)
    return 1.0 / math.sqrt(norm2)


def _oscillatory_pair(lam: float, m: int, geometry: DiskGeometry, delta: float) -> DiskEigenpair:
    k = math.sqrt(lam)
    residual = secular_residual(lam, m, geometry, delta)
    if residual > RESIDUAL_TOL:
        raise BracketError(f"secular residual {residual:.3e} at lambda={lam}")
    return DiskEigenpair(
        eigenvalue=lam,
        mode=FourierMode(m),
        branch=Branch.OSCILLATORY,
        geometry=geometry,
        provenance=Provenance.ANALYTIC,
        delta=delta,
        wavenumber=k,
        scale=_j_profile_scale(k, m, geometry),
        residual=residual,
    )


def dirichlet_eigenpair(m: int, n: int, geometry: DiskGeometry) -> DiskEigenpair:
    """n-th Dirichlet eigenpair of sector m."""
    mode = FourierMode(m)
    k = bessel_j_zero(m, n) / geometry.radius
    return DiskEigenpair(
        eigenvalue=k * k,
        mode=mode,
        branch=Branch.DIRICHLET,
        geometry=geometry,
        provenance=Provenance.ANALYTIC,
        delta=None,
        wavenumber=k,
        scale=_j_profile_scale(k, m, geometry),
    )


def _dirichlet_index(target: float, m: int, geometry: DiskGeometry) -> int:
    for n in range(1, MAX_ZERO_INDEX):
        lam = dirichlet_eigenvalue(m, n, geometry)
        if abs(lam - target) <= 1e-6 * lam:
            return n
        if lam > target:
            break
    raise BracketError(f"{target} is not a Dirichlet eigenvalue of sector {m}")


def find_robin_near(target: float, m: int, geometry: DiskGeometry, delta: float) -> DiskEigenpair:
    """Robin eigenvalue accumulating at the sector Dirichlet eigenvalue ``target``.

    The root lies strictly between target and the next sector Dirichlet
    eigenvalue, where the secular function has no pole.
    """
    _check_delta(delta)
    FourierMode(m)
    n = _dirichlet_index(target, m, geometry)
    lo = dirichlet_eigenvalue(m, n, geometry)
    hi = dirichlet_eigenvalue(m, n + 1, geometry)
    lam = _single_root(
        lambda t: robin_secular(t, m, geometry, delta), lo, hi, f"robin m={m} n={n}"
    )
    logger.debug("robin root m=%d n=%d delta=%g lambda=%.15g", m, n, delta, lam)
    return _oscillatory_pair(lam, m, geometry, delta)


def find_lowest_oscillatory(m: int, geometry: DiskGeometry, delta: float) -> DiskEigenpair:
    """Lowest Robin eigenvalue of sector m when delta >= R/m (no surface mode).

    It lies in (0, first sector Dirichlet eigenvalue).
    """
    _check_delta(delta)
    hi = dirichlet_eigenvalue(m, 1, geometry)
    lam = _single_root(
        lambda t: robin_secular(t, m, geometry, delta), 1e-12 * hi, hi, f"lowest m={m}"
    )
    return _oscillatory_pair(lam, m, geometry, delta)


def find_surface_eigenvalue(m: int, geometry: DiskGeometry, delta: float) -> DiskEigenpair:
    """The negative eigenvalue -s^2 of sector m, with s in (0, 2/delta]."""
    _check_delta(delta)
    mode = FourierMode(m)
    R = geometry.radius
    s_grid = np.linspace(0.0, 2.0 / delta, SCAN_POINTS + 1)[1:]

    x = s_grid * R
    log_slope = s_grid * bessel_i_deriv(m, x, scaled=True) / bessel_i(m, x, scaled=True)
    if np.any(np.diff(log_slope) < -1e-12 * np.abs(log_slope[1:])):
        raise BracketError(f"s I_m'/I_m is not increasing on the surface bracket (m={m})")

    s = _single_root(
        lambda t: robin_secular(-t * t, m, geometry, delta),
        float(s_grid[0]),
        float(s_grid[-1]),
        f"surface m={m}",
    )
    lam = -s * s
    residual = secular_residual(lam, m, geometry, delta)
    if residual > RESIDUAL_TOL:
        raise BracketError(f"surface residual {residual:.3e} at lambda={lam}")
    logger.debug("surface root m=%d delta=%g lambda=%.15g", m, delta, lam)
    return DiskEigenpair(
        eigenvalue=lam,
        mode=mode,
        branch=Branch.SURFACE,
        geometry=geometry,
        provenance=Provenance.ANALYTIC,
        delta=delta,
        wavenumber=s,
        scale=_i_profile_scale(s, m, geometry),
        residual=residual,
    )


def _surface_values(pair: DiskEigenpair, r, derivative: bool):
    m, s, R = pair.m, pair.wavenumber, pair.geometry.radius
    edge = bessel_i(m, s * R, scaled=True)
    if derivative:
        inner = s * bessel_i_deriv(m, s * r, scaled=True)
    else:
        inner = bessel_i(m, s * r, scaled=True)
    return pair.scale * inner / edge * np.exp(s * (np.asarray(r, dtype=float) - R))


def _finish(values, r):
    return float(values) if np.ndim(r) == 0 else values


def eval_profile(pair: DiskEigenpair, r):
    """v(r) for 0 <= r <= R with the pair's normalization."""
    pair.geometry.check_radius(r)
    r = np.clip(r, 0.0, pair.geometry.radius)
    if pair.profile is not None:
        return _finish(pair.profile(r), r)
    if pair.branch == Branch.SURFACE:
        return _finish(_surface_values(pair, r, derivative=False), r)
    return _finish(pair.scale * bessel_j(pair.m, pair.wavenumber * r), r)


def eval_profile_deriv(pair: DiskEigenpair, r):
    """v'(r) for 0 <= r <= R."""
    pair.geometry.check_radius(r)
    r = np.clip(r, 0.0, pair.geometry.radius)
    if pair.profile is not None:
        return _finish(pair.profile.derivative(r), r)
    if pair.branch == Branch.SURFACE:
        return _finish(_surface_values(pair, r, derivative=True), r)
    k = pair.wavenumber
    return _finish(pair.scale * k * bessel_j_deriv(pair.m, k * r), r)


def _integrate(func: Callable[[float], float], a: float, b: float, points: Optional[list[float]]) -> float:
    inner = [p for p in (points or []) if a < p < b] or None
    result = quad(
        func,
        a,
        b,
        epsabs=QUAD_EPSABS,
        epsrel=QUAD_EPSREL,
        limit=QUAD_LIMIT,
        points=inner,
        full_output=1,
    )
    if len(result) > 3:
        raise QuadratureError(f"quad on [{a:.6g}, {b:.6g}]: {result[3]}")
    return result[0]


def masses(pair: DiskEigenpair, rho: float) -> dict:
    """Squared norms of the pair's eigenfunction.

    Returns l2_omega, l2_gamma, l2_K (the concentric disk of radius rho) and
    h1 = ||grad u||^2 + ||u||^2 with the angular m^2/r^2 term included.
    """
    R = pair.geometry.radius
    if not (0.0 < rho < R):
        raise GeometryError(f"rho must lie in (0, {R}), got {rho}")
    m = pair.m
    points = None
    if pair.branch == Branch.SURFACE:
        width = 1.0 / pair.wavenumber
        points = [R - j * width for j in (1.0, 4.0, 16.0)]

    def density(r: float) -> float:
        v = eval_profile(pair, r)
        return v * v * r

    def energy(r: float) -> float:
        v = eval_profile(pair, r)
        dv = eval_profile_deriv(pair, r)
        angular = m * m * v * v / r if m else 0.0
        return dv * dv * r + angular

    l2_omega = _integrate(density, 0.0, R, points)
    l2_K = _integrate(density, 0.0, rho, points)
    gradient = _integrate(energy, 0.0, R, points)
    boundary = 0.0 if pair.branch == Branch.DIRICHLET else eval_profile(pair, R)
    return {
        "l2_omega": l2_omega,
        "l2_gamma": R * boundary * boundary,
        "l2_K": l2_K,
        "h1": gradient + l2_omega,
    }


class AnalyticSectorSolver(SectorSolver):
    """Sector spectrum from secular roots."""

    def sector_spectrum(self, m: int, delta: float, count: int) -> list[DiskEigenpair]:
        R = self.geometry.radius
        if m == 0 or delta < R / m:
            lowest = find_surface_eigenvalue(m, self.geometry, delta)
        else:
            lowest = find_lowest_oscillatory(m, self.geometry, delta)
        pairs = [lowest]
        for n in range(1, count):
            target = dirichlet_eigenvalue(m, n, self.geometry)
            pairs.append(find_robin_near(target, m, self.geometry, delta))
        return pairs[:count]
