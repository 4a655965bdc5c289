"""
Log-log rate fits, delta ranges and floor filtering.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from spectra.errors import StudyError

logger = logging.getLogger(__name__)


@dataclass
class LogLogFit:
    slope: float
    intercept: float
    quality: float

    @property
    def constant(self) -> float:
        """C in y ~ C x^slope."""
        return math.exp(self.intercept)


def fit_loglog(rows: Sequence[tuple[float, float]], min_rows: int = 3) -> LogLogFit:
    """Least-squares line through (log x, log y); quality is R^2."""
    if len(rows) < min_rows:
        raise StudyError(f"need at least {min_rows} rows for a rate fit, got {len(rows)}")
    x = np.array([r[0] for r in rows], dtype=float)
    y = np.array([r[1] for r in rows], dtype=float)
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise StudyError("log-log fit needs positive x and y")
    lx, ly = np.log(x), np.log(y)
    if np.ptp(lx) <= 1e-12 * max(1.0, float(np.max(np.abs(lx)))):
        raise StudyError("degenerate x values: all rows share the same x")
    slope, intercept = np.polyfit(lx, ly, 1)
    predicted = slope * lx + intercept
    ss_res = float(np.sum((ly - predicted) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    quality = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return LogLogFit(slope=float(slope), intercept=float(intercept), quality=quality)


def log_range(first: float, last: float, per_decade: int) -> list[float]:
    """Log-spaced values from first to last inclusive, ``per_decade`` steps per decade."""
    if first <= 0.0 or last <= 0.0 or per_decade < 1:
        raise ValueError("log range needs positive endpoints and per_decade >= 1")
    if first == last:
        return [float(first)]
    decades = abs(math.log10(last / first))
    count = max(int(round(decades * per_decade)), 1) + 1
    return [float(v) for v in np.geomspace(first, last, count)]


def parse_delta_range(text: str) -> list[float]:
    """Parse ``a:b:logK`` (K points per decade, endpoints included) or a comma list."""
    if ":" not in text:
        return [float(v) for v in text.split(",") if v.strip()]
    parts = text.split(":")
    if len(parts) != 3 or not parts[2].startswith("log"):
        raise ValueError(f"delta range must look like a:b:logK, got '{text}'")
    return log_range(float(parts[0]), float(parts[1]), int(parts[2][3:]))


def filter_floor(
    rows: Iterable[tuple[float, float]],
    floor: float,
    factor: float,
) -> tuple[list[tuple[float, float]], int]:
    """Drop rows whose y is below factor * floor; return kept rows and the dropped count."""
    kept, dropped = [], 0
    threshold = factor * floor
    for x, y in rows:
        if y < threshold:
            dropped += 1
            continue
        kept.append((x, y))
    if dropped:
        logger.warning("dropped %d row(s) below the floor threshold %.3e", dropped, threshold)
    return kept, dropped
