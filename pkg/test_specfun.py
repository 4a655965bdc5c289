#!/usr/bin/env python3
"""
Tests for the Bessel function library, checked against scipy.special.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import special

sys.path.insert(0, str(Path(__file__).parent))

from spectra.errors import BesselDomainError, BesselOverflowError
from spectra.specfun import (
    bessel_i,
    bessel_i_deriv,
    bessel_j,
    bessel_j_deriv,
    bessel_j_zero,
)

XS = np.concatenate([np.linspace(0.0, 1.0, 11), np.linspace(1.05, 60.0, 240)])


def test_values_at_origin():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_i(2, 0.0) == 0.0
    assert bessel_j_deriv(0, 0.0) == 0.0
    assert bessel_j_deriv(1, 0.0) == pytest.approx(0.5, abs=1e-15)
    assert bessel_i_deriv(0, 0.0) == 0.0
    assert bessel_i_deriv(1, 0.0) == pytest.approx(0.5, abs=1e-15)


def test_first_zero_of_j0():
    assert abs(bessel_j(0, 2.404825557695773)) <= 1e-12
    assert bessel_j_zero(0, 1) == pytest.approx(2.404825557695773, abs=1e-12)
    assert bessel_j_zero(0, 2) == pytest.approx(5.520078110286311, abs=1e-12)


@pytest.mark.parametrize("m", [0, 1, 2, 5, 10, 25, 50])
def test_j_matches_scipy(m):
    assert_allclose(bessel_j(m, XS), special.jv(m, XS), rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("m", [0, 1, 3, 10])
def test_scaled_i_matches_scipy(m):
    assert_allclose(bessel_i(m, XS, scaled=True), special.ive(m, XS), rtol=1e-12, atol=1e-300)


def test_scalar_and_array_paths_agree():
    xs = [0.3, 1.0, 1.7, 12.5, 47.0]
    for m in (0, 2, 7):
        assert_allclose([bessel_j(m, x) for x in xs], bessel_j(m, np.array(xs)), rtol=1e-13, atol=1e-15)
        assert_allclose(
            [bessel_i(m, x, scaled=True) for x in xs],
            bessel_i(m, np.array(xs), scaled=True),
            rtol=1e-13,
        )


def test_recurrence_residual():
    x = np.linspace(0.5, 50.0, 200)
    for m in range(1, 11):
        jm1, jm, jp1 = bessel_j(m - 1, x), bessel_j(m, x), bessel_j(m + 1, x)
        size = np.abs(jm1) + np.abs(jp1) + np.abs(2 * m / x * jm)
        assert np.all(np.abs(jm1 + jp1 - 2 * m / x * jm) <= 1e-12 * size + 1e-300)

        im1, im, ip1 = (bessel_i(k, x, scaled=True) for k in (m - 1, m, m + 1))
        size = np.abs(im1) + np.abs(ip1) + np.abs(2 * m / x * im)
        assert np.all(np.abs(im1 - ip1 - 2 * m / x * im) <= 1e-12 * size + 1e-300)


def test_scaled_and_unscaled_i_agree():
    x = np.linspace(0.0, 30.0, 121)
    for m in (0, 1, 4):
        assert_allclose(
            bessel_i(m, x, scaled=True) * np.exp(x), bessel_i(m, x), rtol=1e-12, atol=1e-300
        )


def test_large_argument_scaled_i0():
    expected = 1.0 / math.sqrt(2 * math.pi * 50.0)
    assert bessel_i(0, 50.0, scaled=True) == pytest.approx(expected, rel=1e-2)


def test_derivative_identities():
    x = np.linspace(0.1, 40.0, 50)
    assert_allclose(bessel_j_deriv(0, x), -bessel_j(1, x), rtol=0, atol=0)
    assert_allclose(bessel_i_deriv(0, x), bessel_i(1, x), rtol=1e-15)
    assert_allclose(bessel_j_deriv(3, x), special.jvp(3, x), rtol=1e-11, atol=1e-13)
    assert_allclose(bessel_i_deriv(2, x, scaled=True), special.ivp(2, x) * np.exp(-x), rtol=1e-11)


def test_zeros_match_scipy():
    for m in (0, 1, 4, 17, 50):
        expected = special.jn_zeros(m, 5)
        got = [bessel_j_zero(m, n) for n in range(1, 6)]
        assert_allclose(got, expected, rtol=1e-13)
        for z in got:
            assert abs(bessel_j(m, z)) <= 1e-12


def test_zeros_interlace():
    for m in range(0, 10):
        for n in range(1, 10):
            assert bessel_j_zero(m, n) < bessel_j_zero(m + 1, n) < bessel_j_zero(m, n + 1)


def test_errors():
    with pytest.raises(BesselDomainError):
        bessel_j(0, -1.0)
    with pytest.raises(BesselDomainError):
        bessel_i(0, float("nan"))
    with pytest.raises(BesselDomainError):
        bessel_j(51, 1.0)
    with pytest.raises(BesselDomainError):
        bessel_j_zero(0, 0)
    with pytest.raises(BesselOverflowError):
        bessel_i(0, 701.0)
    assert bessel_i(0, 701.0, scaled=True) > 0.0
