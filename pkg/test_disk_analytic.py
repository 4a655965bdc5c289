#!/usr/bin/env python3
"""
Tests for the closed-form disk spectra (secular roots, profiles, masses).
"""

import sys
from pathlib import Path

import numpy as np
import pytest
from scipy import special

sys.path.insert(0, str(Path(__file__).parent))

from spectra.base import Branch, DiskGeometry
from spectra.disk_analytic import (
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
)
from spectra.errors import BracketError, GeometryError

UNIT = DiskGeometry(1.0)
J01_SQ = 5.783185962946785


def test_dirichlet_eigenvalues():
    assert dirichlet_eigenvalue(0, 1, UNIT) == pytest.approx(J01_SQ, rel=1e-13)
    assert dirichlet_eigenvalue(0, 2, UNIT) == pytest.approx(30.471262343662087, rel=1e-12)
    assert dirichlet_eigenvalue(0, 1, DiskGeometry(2.0)) == pytest.approx(J01_SQ / 4, rel=1e-13)
    for m in range(0, 6):
        for n in range(1, 5):
            assert dirichlet_eigenvalue(m, n, UNIT) == pytest.approx(
                special.jn_zeros(m, n)[-1] ** 2, rel=1e-12
            )


def test_secular_sign_change_around_robin_root():
    delta = 0.01
    lo = dirichlet_eigenvalue(0, 1, UNIT)
    hi = dirichlet_eigenvalue(0, 2, UNIT)
    pair = find_robin_near(lo, 0, UNIT, delta)
    a = robin_secular(pair.eigenvalue - 1e-3, 0, UNIT, delta)
    b = robin_secular(pair.eigenvalue + 1e-3, 0, UNIT, delta)
    assert a * b < 0
    assert lo < pair.eigenvalue < hi


def test_accumulating_root_close_to_dirichlet():
    pair = find_robin_near(J01_SQ, 0, UNIT, 0.01)
    # first-order estimate lambda0 (1 + 2 delta) on the unit disk
    assert abs(pair.eigenvalue - J01_SQ * 1.02) <= 2e-3
    assert pair.branch == Branch.OSCILLATORY
    assert pair.residual <= 1e-10


def test_accumulating_root_approaches_dirichlet_monotonically():
    for m in (0, 2):
        target = dirichlet_eigenvalue(m, 1, UNIT)
        gaps = [find_robin_near(target, m, UNIT, d).eigenvalue - target for d in (0.05, 0.02, 0.01, 0.005)]
        assert all(g > 0 for g in gaps)
        assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_find_robin_near_rejects_non_dirichlet_target():
    with pytest.raises(BracketError):
        find_robin_near(6.0, 0, UNIT, 0.01)


@pytest.mark.parametrize("delta", [0.1, 0.01, 0.001])
def test_surface_eigenvalue_limit(delta):
    pair = find_surface_eigenvalue(0, UNIT, delta)
    scaled = delta * delta * pair.eigenvalue
    assert pair.branch == Branch.SURFACE
    assert scaled < -1.0
    # curvature correction is about delta / (2R) for small delta
    assert abs(scaled + 1.0) <= 1.5 * delta


def test_surface_mode_absent_for_large_delta():
    # delta >= R/m: sector 3 has no negative eigenvalue
    with pytest.raises(BracketError):
        find_surface_eigenvalue(3, UNIT, 0.5)
    lowest = find_lowest_oscillatory(3, UNIT, 0.5)
    assert 0.0 < lowest.eigenvalue < dirichlet_eigenvalue(3, 1, UNIT)


def test_profile_boundary_condition():
    delta = 0.05
    pairs = [
        find_robin_near(dirichlet_eigenvalue(1, 2, UNIT), 1, UNIT, delta),
        find_surface_eigenvalue(2, UNIT, delta),
    ]
    for pair in pairs:
        v = eval_profile(pair, 1.0)
        dv = eval_profile_deriv(pair, 1.0)
        assert dv == pytest.approx(v / delta, rel=1e-9)


def test_profile_edge_cases():
    dirichlet = dirichlet_eigenpair(0, 1, UNIT)
    assert abs(eval_profile(dirichlet, 1.0)) <= 1e-12

    surface = find_surface_eigenvalue(0, UNIT, 0.01)
    assert abs(eval_profile(surface, 0.5) / eval_profile(surface, 1.0)) <= 1e-12

    sector = find_robin_near(dirichlet_eigenvalue(2, 1, UNIT), 2, UNIT, 0.1)
    assert eval_profile(sector, 0.0) == 0.0

    with pytest.raises(GeometryError):
        eval_profile(sector, 1.5)

    values = eval_profile(dirichlet, np.linspace(0.0, 1.0, 5))
    assert values.shape == (5,)


def test_profile_sign_convention():
    for pair in (
        dirichlet_eigenpair(0, 2, UNIT),
        find_robin_near(dirichlet_eigenvalue(0, 2, UNIT), 0, UNIT, 0.02),
        find_surface_eigenvalue(1, UNIT, 0.05),
    ):
        r = np.linspace(0.0, 1.0, 4001)
        v = eval_profile(pair, r)
        assert v[np.argmax(np.abs(v))] > 0


def test_masses_are_normalized():
    pair = find_robin_near(J01_SQ, 0, UNIT, 0.02)
    result = masses(pair, 0.5)
    assert result["l2_omega"] == pytest.approx(1.0, abs=1e-10)
    assert 0.0 < result["l2_K"] < 1.0

    # integrating by parts: ||grad v||^2 = R v(R) v'(R) + lambda ||v||^2
    v_edge = eval_profile(pair, 1.0)
    expected = v_edge * v_edge / pair.delta + pair.eigenvalue + 1.0
    assert result["h1"] == pytest.approx(expected, rel=1e-8)


def test_dirichlet_masses():
    result = masses(dirichlet_eigenpair(1, 1, UNIT), 0.5)
    assert result["l2_gamma"] == 0.0
    assert result["l2_omega"] == pytest.approx(1.0, abs=1e-10)


def test_surface_mass_concentrates_on_boundary():
    pair = find_surface_eigenvalue(0, UNIT, 0.01)
    result = masses(pair, 0.5)
    assert result["l2_omega"] == pytest.approx(1.0, abs=1e-10)
    assert result["l2_K"] / result["h1"] <= 1e-12
    with pytest.raises(GeometryError):
        masses(pair, 1.0)


def test_sector_spectrum_ascending():
    solver = AnalyticSectorSolver(UNIT)
    for m in (0, 1, 4):
        pairs = solver.sector_spectrum(m, 0.05, 4)
        values = [p.eigenvalue for p in pairs]
        assert values == sorted(values)
        assert pairs[0].branch == Branch.SURFACE
        for n, pair in enumerate(pairs[1:], start=1):
            assert dirichlet_eigenvalue(m, n, UNIT) < pair.eigenvalue < dirichlet_eigenvalue(m, n + 1, UNIT)
