"""
Shared records and the sector solver interface.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Optional

import numpy as np

from .errors import GeometryError

if TYPE_CHECKING:
    from .radial_discrete import RadialFunction


class Branch(str, Enum):
    OSCILLATORY = "oscillatory"
    SURFACE = "surface"
    DIRICHLET = "dirichlet"


class Provenance(str, Enum):
    ANALYTIC = "analytic"
    DISCRETE = "discrete"


@dataclass(frozen=True)
class DiskGeometry:
    """Solid disk of radius R centred at the origin."""
    radius: float = 1.0

    def __post_init__(self):
        if not (self.radius > 0.0) or self.radius == float("inf"):
            raise GeometryError(f"disk radius must be positive and finite, got {self.radius}")

    def check_radius(self, r) -> None:
        """Reject evaluation radii outside [0, R]."""
        arr = np.asarray(r, dtype=float)
        slack = 1e-12 * self.radius
        if np.any(arr < -slack) or np.any(arr > self.radius + slack):
            raise GeometryError(f"radius outside [0, {self.radius}]")


@dataclass(frozen=True)
class FourierMode:
    """Angular wavenumber m; the angular factor is orthonormal on the circle."""
    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise GeometryError(f"Fourier mode must be a non-negative integer, got {self.m}")


@dataclass
class DiskEigenpair:
    """One sector eigenvalue with its radial profile.

    Analytic pairs carry the closed form through ``wavenumber`` (k for
    J-profiles, s for the surface I-profile) and ``scale`` (the L2
    normalization constant). Discrete pairs carry ``profile`` instead.
    """
    eigenvalue: float
    mode: FourierMode
    branch: Branch
    geometry: DiskGeometry
    provenance: Provenance
    delta: Optional[float] = None
    wavenumber: float = 0.0
    scale: float = 1.0
    residual: float = 0.0
    profile: Optional["RadialFunction"] = None

    @property
    def m(self) -> int:
        return self.mode.m


class SectorSolver(ABC):
    """Abstract base class for the two spectrum paths."""

    def __init__(self, geometry: DiskGeometry):
        self.geometry = geometry
        self.name = self.__class__.__name__

    @abstractmethod
    def sector_spectrum(self, m: int, delta: float, count: int) -> list[DiskEigenpair]:
        """Return the ``count`` smallest Robin eigenpairs of sector m, ascending."""
        pass
