#!/usr/bin/env python3
"""
Tests for the asymptotic series of the accumulating branches.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from asymptotics.expansion import (
    build_series,
    eval_lambda,
    eval_profile,
    init_series,
    load_series_table,
    residual_dual_norm,
    series_table,
    unit_disk_coefficients,
)
from spectra.base import DiskGeometry
from spectra.disk_analytic import dirichlet_eigenpair, eval_profile_deriv, find_robin_near
from spectra.errors import CoercivityError, GridAccuracyError
from spectra.radial_discrete import build_grid

UNIT = DiskGeometry(1.0)
J01_SQ = 5.783185962946785


@pytest.fixture(scope="module")
def series():
    return build_series(0, 1, build_grid(UNIT, 512, order=2), order=4)


def test_seed_is_dirichlet_eigenvalue(series):
    assert series.lambdas[0] == pytest.approx(J01_SQ, abs=1e-7)
    assert series.order == 4
    assert len(series.profiles) == len(series.fluxes) == 5


def test_first_coefficient_is_twice_lambda0(series):
    assert series.lambdas[1] == pytest.approx(11.566371925893570, abs=1e-6)


def test_first_coefficient_matches_boundary_flux():
    pair = dirichlet_eigenpair(0, 1, UNIT)
    flux = eval_profile_deriv(pair, 1.0)
    grid = build_grid(UNIT, 512, order=2)
    assert build_series(0, 1, grid, order=1).lambdas[1] == pytest.approx(flux * flux, rel=1e-6)


@pytest.mark.parametrize("m,n", [(0, 2), (0, 3), (1, 1), (2, 2)])
def test_closed_form_coefficients(m, n):
    got = build_series(m, n, build_grid(UNIT, 512, order=2), order=3).lambdas
    expected = unit_disk_coefficients(m, n, 3)
    for value, target, rtol in zip(got, expected, (1e-8, 1e-6, 1e-5, 1e-4)):
        assert value == pytest.approx(target, rel=rtol)


def test_radius_scaling():
    geometry = DiskGeometry(2.0)
    got = build_series(0, 1, build_grid(geometry, 512, order=2), order=3).lambdas
    unit = unit_disk_coefficients(0, 1, 3)
    for k, (value, rtol) in enumerate(zip(got, (1e-8, 1e-6, 1e-5, 1e-4))):
        assert value == pytest.approx(unit[k] / 2.0 ** (2 + k), rel=rtol)


def test_corrections_orthogonal_to_seed(series):
    M = series.pencil.mass
    u0 = series.profiles[0].coefficients
    assert u0 @ (M @ u0) == pytest.approx(1.0, abs=1e-10)
    for u in series.profiles[1:]:
        assert abs(u0 @ (M @ u.coefficients)) <= 1e-10


def test_corrections_match_previous_flux(series):
    for k in range(1, series.order + 1):
        assert series.profiles[k].boundary_value == pytest.approx(series.fluxes[k - 1], rel=1e-12)


def test_compatibility_defects_small(series):
    assert series.defects[0] == 0.0
    for lam, defect in zip(series.lambdas[1:], series.defects[1:]):
        assert abs(defect) <= 1e-6 * abs(lam) + 1e-8


def test_grid_stability():
    coarse = build_series(0, 1, build_grid(UNIT, 256, order=2), order=3).lambdas
    fine = build_series(0, 1, build_grid(UNIT, 512, order=2), order=3).lambdas
    for a, b in zip(coarse, fine):
        assert a == pytest.approx(b, rel=1e-5)


def test_eval_lambda(series):
    assert eval_lambda(series, 0.0) == series.lambdas[0]
    assert eval_lambda(series, 0.3, 0) == series.lambdas[0]
    delta = 0.01
    explicit = sum(lam * delta ** k for k, lam in enumerate(series.lambdas[:3]))
    assert eval_lambda(series, delta, 2) == pytest.approx(explicit, rel=1e-15)
    with pytest.raises(ValueError):
        eval_lambda(series, delta, 5)


def test_higher_order_is_closer():
    delta = 0.01
    exact = find_robin_near(J01_SQ, 0, UNIT, delta).eigenvalue
    s = build_series(0, 1, build_grid(UNIT, 512, order=2), order=3)
    errors = [abs(eval_lambda(s, delta, N) - exact) for N in range(4)]
    assert errors[0] > errors[1] > errors[2] > errors[3]


def test_eval_profile_boundary_value(series):
    delta = 0.02
    u = eval_profile(series, delta, 2)
    expected = delta * series.fluxes[0] + delta ** 2 * series.fluxes[1]
    assert u.boundary_value == pytest.approx(expected, rel=1e-12)


def test_series_table_archive(series):
    text = series_table(series)
    assert text.splitlines()[0] == "k lambda_k g_k"
    rows = load_series_table(text)
    assert [r[0] for r in rows] == list(range(5))
    assert rows[3][1] == series.lambdas[3]
    assert rows[2][2] == series.fluxes[2]


def test_residual_decreases_with_order(series):
    low = residual_dual_norm(series, 0.02, 0)
    high = residual_dual_norm(series, 0.02, 2)
    assert low.dual_norm > 0.0
    assert high.dual_norm < low.dual_norm
    assert low.mu_hat == pytest.approx(series.lambdas[0] + 4.0 / 0.02 ** 2)


def test_residual_needs_coercive_shift(series):
    with pytest.raises(CoercivityError):
        residual_dual_norm(series, 0.02, 0, alpha=0.5)


def test_coarse_grid_rejected():
    with pytest.raises(GridAccuracyError):
        init_series(0, 1, build_grid(UNIT, 4, order=1))


def test_unit_disk_coefficients_limits():
    coeffs = unit_disk_coefficients(0, 1, 2)
    assert coeffs == [pytest.approx(J01_SQ), pytest.approx(2 * J01_SQ), pytest.approx(2 * J01_SQ)]
    with pytest.raises(ValueError):
        unit_disk_coefficients(0, 1, 4)
    assert np.isfinite(unit_disk_coefficients(3, 2, 3)).all()


def test_discrete_equations_hold_for_every_order():
    grid = build_grid(UNIT, 512, order=2)
    s = build_series(1, 2, grid, order=4)
    S, M = s.pencil.stiffness, s.pencil.mass
    interior = s.pencil.free[:-1]
    mass_u0 = np.abs(M @ s.profiles[0].coefficients)[interior].max()
    for k in range(s.order + 1):
        u_k = s.profiles[k].coefficients
        stiff_u = S @ u_k
        r = stiff_u - sum(s.lambdas[k - p] * (M @ s.profiles[p].coefficients) for p in range(k + 1))
        # interior rows vanish up to the compatibility defect along M u_0
        bound = abs(s.defects[k]) * mass_u0 + 1e-9 * max(1.0, np.abs(stiff_u).max())
        assert np.abs(r[interior]).max() <= bound
        assert r[grid.boundary_dof] == pytest.approx(s.fluxes[k], rel=1e-10)


def test_correction_norms_grow_at_most_geometrically():
    norms = []
    for elements in (256, 512):
        s = build_series(0, 1, build_grid(UNIT, elements, order=2), order=4)
        M = s.pencil.mass
        norms.append([float(np.sqrt(u.coefficients @ (M @ u.coefficients))) for u in s.profiles])
    coarse, fine = norms
    assert np.all(np.isfinite(fine))
    assert coarse == pytest.approx(fine, rel=1e-3)
    for a, b in zip(fine, fine[1:]):
        assert b <= 4.0 * J01_SQ * a
