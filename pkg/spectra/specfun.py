"""
Bessel functions J_m and I_m of integer order, their derivatives and the
positive zeros of J_m.

Small arguments use the power series; larger arguments use Miller's
backward recurrence normalized by the Neumann sums
J_0 + 2 sum J_2k = 1 and I_0 + 2 sum I_k = e^x. The I recurrence yields the
scaled value e^{-x} I_m(x) directly, so nothing overflows on that path.

Scalar arguments go through plain float loops; arrays go through the same
recurrences vectorized with numpy.
"""

import math
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import BesselDomainError, BesselOverflowError, BracketError

MAX_ORDER = 50
MAX_ZERO_INDEX = 50
SERIES_CUTOVER = 1.0
UNSCALED_LIMIT = 700.0

_SERIES_TERMS = 30
_BIG = 1.0e250
_TINY = 1.0e-250
_ZERO_SCAN_STEP = 0.2


def _check_order(m: int, limit: int = MAX_ORDER) -> None:
    if int(m) != m or m < 0 or m > limit:
        raise BesselDomainError(f"order must be an integer in [0, {limit}], got {m}")


def _check_argument(x) -> None:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise BesselDomainError("argument must be finite")
    if np.any(arr < 0.0):
        raise BesselDomainError("argument must be >= 0")


def _j_start(m_max: int, x: float) -> int:
    top = max(m_max, int(math.ceil(x)))
    start = top + int(math.sqrt(160.0 * top)) + 20
    return start + (start % 2)


def _i_start(m_max: int, x: float) -> int:
    return m_max + 20 + int(10.0 * math.sqrt(x))


# ---------------------------------------------------------------------------
# scalar path
# ---------------------------------------------------------------------------

def _series_scalar(m: int, x: float, sign: float) -> float:
    half = 0.5 * x
    q = sign * half * half
    term = half ** m / math.factorial(m)
    total = term
    for k in range(1, _SERIES_TERMS):
        term *= q / (k * (k + m))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break
    return total


def _miller_j_scalar(m_max: int, x: float) -> list[float]:
    orders = [0.0] * (m_max + 1)
    y_above, y, norm = 0.0, 1.0, 0.0
    for k in range(_j_start(m_max, x), 0, -1):
        if k <= m_max:
            orders[k] = y
        if k % 2 == 0:
            norm += 2.0 * y
        y_above, y = y, (2.0 * k / x) * y - y_above
        if abs(y) > _BIG:
            y *= _TINY
            y_above *= _TINY
            norm *= _TINY
            orders = [v * _TINY for v in orders]
    orders[0] = y
    norm += y
    return [v / norm for v in orders]


def _miller_i_scalar(m_max: int, x: float) -> list[float]:
    orders = [0.0] * (m_max + 1)
    y_above, y, norm = 0.0, 1.0, 0.0
    for k in range(_i_start(m_max, x), 0, -1):
        if k <= m_max:
            orders[k] = y
        norm += 2.0 * y
        y_above, y = y, (2.0 * k / x) * y + y_above
        if y > _BIG:
            y *= _TINY
            y_above *= _TINY
            norm *= _TINY
            orders = [v * _TINY for v in orders]
    orders[0] = y
    norm += y
    return [v / norm for v in orders]


def _j_table_scalar(m_max: int, x: float) -> list[float]:
    if x <= SERIES_CUTOVER:
        return [_series_scalar(m, x, -1.0) for m in range(m_max + 1)]
    return _miller_j_scalar(m_max, x)


def _i_table_scalar(m_max: int, x: float) -> list[float]:
    """Scaled values e^{-x} I_m(x) for m = 0..m_max."""
    if x <= SERIES_CUTOVER:
        damp = math.exp(-x)
        return [damp * _series_scalar(m, x, 1.0) for m in range(m_max + 1)]
    return _miller_i_scalar(m_max, x)


# ---------------------------------------------------------------------------
# array path
# ---------------------------------------------------------------------------

def _series_array(m_max: int, x: np.ndarray, sign: float) -> np.ndarray:
    half = 0.5 * x
    q = sign * half * half
    out = np.empty((m_max + 1, x.size))
    for m in range(m_max + 1):
        term = np.power(half, m) / math.factorial(m)
        total = term.copy()
        for k in range(1, _SERIES_TERMS):
            term = term * q / (k * (k + m))
            total += term
        out[m] = total
    return out


def _miller_array(m_max: int, x: np.ndarray, modified: bool) -> np.ndarray:
    if modified:
        start = _i_start(m_max, float(x.max()))
        parity = 1.0
    else:
        start = _j_start(m_max, float(x.max()))
        parity = -1.0
    out = np.zeros((m_max + 1, x.size))
    y_above = np.zeros_like(x)
    y = np.ones_like(x)
    norm = np.zeros_like(x)
    for k in range(start, 0, -1):
        if k <= m_max:
            out[k] = y
        if modified or k % 2 == 0:
            norm += 2.0 * y
        y_above, y = y, (2.0 * k / x) * y + parity * y_above
        big = np.abs(y) > _BIG
        if big.any():
            factor = np.where(big, _TINY, 1.0)
            y = y * factor
            y_above = y_above * factor
            norm *= factor
            out *= factor
    out[0] = y
    norm += y
    return out / norm


def _table_array(m_max: int, x: np.ndarray, modified: bool) -> np.ndarray:
    flat = np.asarray(x, dtype=float).ravel()
    out = np.empty((m_max + 1, flat.size))
    small = flat <= SERIES_CUTOVER
    if small.any():
        values = _series_array(m_max, flat[small], 1.0 if modified else -1.0)
        if modified:
            values = values * np.exp(-flat[small])
        out[:, small] = values
    if (~small).any():
        out[:, ~small] = _miller_array(m_max, flat[~small], modified)
    return out.reshape((m_max + 1,) + np.shape(x))


def _j_table(m_max: int, x):
    if np.ndim(x) == 0:
        return _j_table_scalar(m_max, float(x))
    return _table_array(m_max, np.asarray(x, dtype=float), modified=False)


def _i_table(m_max: int, x):
    if np.ndim(x) == 0:
        return _i_table_scalar(m_max, float(x))
    return _table_array(m_max, np.asarray(x, dtype=float), modified=True)


def _unscale(values, x, scaled: bool):
    if scaled:
        return values
    if np.any(np.asarray(x) > UNSCALED_LIMIT):
        raise BesselOverflowError(
            f"unscaled I_m overflows for x > {UNSCALED_LIMIT}; request the scaled form"
        )
    if np.ndim(x) == 0:
        return values * math.exp(float(x))
    return values * np.exp(np.asarray(x, dtype=float))


# ---------------------------------------------------------------------------
# public surface
# ---------------------------------------------------------------------------

def bessel_j(m: int, x):
    """J_m(x) for integer 0 <= m <= 50 and x >= 0 (scalar or array)."""
    _check_order(m)
    _check_argument(x)
    return _j_table(m, x)[m]


def bessel_j_deriv(m: int, x):
    """J_m'(x), from J_m' = (J_{m-1} - J_{m+1})/2 and J_0' = -J_1."""
    _check_order(m)
    _check_argument(x)
    table = _j_table(m + 1, x)
    if m == 0:
        return -table[1]
    return 0.5 * (table[m - 1] - table[m + 1])


def bessel_i(m: int, x, scaled: bool = False):
    """I_m(x); with ``scaled`` the result is e^{-x} I_m(x)."""
    _check_order(m)
    _check_argument(x)
    return _unscale(_i_table(m, x)[m], x, scaled)


def bessel_i_deriv(m: int, x, scaled: bool = False):
    """I_m'(x), from I_m' = (I_{m-1} + I_{m+1})/2 and I_0' = I_1."""
    _check_order(m)
    _check_argument(x)
    table = _i_table(m + 1, x)
    if m == 0:
        value = table[1]
    else:
        value = 0.5 * (table[m - 1] + table[m + 1])
    return _unscale(value, x, scaled)


def mcmahon_zero(m: int, n: int) -> float:
    """Large-zero asymptotic estimate of j_{m,n}."""
    beta = (n + 0.5 * m - 0.25) * math.pi
    mu = 4.0 * m * m
    eight_beta = 8.0 * beta
    return (
        beta
        - (mu - 1.0) / eight_beta
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * eight_beta ** 3)
    )


@lru_cache(maxsize=None)
def bessel_j_zero(m: int, n: int) -> float:
    """n-th positive zero of J_m.

    The scan window runs from sqrt(m(m+2)), below the first zero, to one
    period past (n + m/2 - 1/4)pi, an upper bound for j_{m,n}. Sign changes
    on the scan are counted and the n-th is refined with brentq.
    """
    _check_order(m)
    if int(n) != n or n < 1 or n > MAX_ZERO_INDEX:
        raise BesselDomainError(f"zero index must be in [1, {MAX_ZERO_INDEX}], got {n}")

    lower = math.sqrt(m * (m + 2.0))
    upper = max(mcmahon_zero(m, n), (n + 0.5 * m - 0.25) * math.pi) + math.pi
    count = int(math.ceil((upper - lower) / _ZERO_SCAN_STEP)) + 1
    grid = np.linspace(lower, upper, count)
    values = bessel_j(m, grid)
    changes = np.nonzero(values[:-1] * values[1:] < 0.0)[0]
    if len(changes) < n:
        raise BracketError(
            f"found {len(changes)} sign changes of J_{m} below {upper:.3f}, need {n}"
        )
    i = changes[n - 1]
    return brentq(
        lambda t: bessel_j(m, t),
        grid[i],
        grid[i + 1],
        xtol=1e-15,
        rtol=4.0 * np.finfo(float).eps,
        maxiter=200,
    )
