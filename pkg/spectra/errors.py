"""
Exception hierarchy shared by every package in the lab.
"""


class RobinLabError(Exception):
    """Base class for all errors raised by the lab."""


class BesselDomainError(RobinLabError, ValueError):
    """Argument outside the supported domain of a special function."""


class BesselOverflowError(RobinLabError, OverflowError):
    """Unscaled modified Bessel value would overflow; use the scaled form."""


class BracketError(RobinLabError):
    """A root bracket holds zero or several sign changes."""


class QuadratureError(RobinLabError):
    """Adaptive quadrature did not reach the requested accuracy."""


class GridError(RobinLabError, ValueError):
    """Invalid radial grid parameters."""


class DiscretizationError(RobinLabError):
    """A discrete matrix failed a factorization or eigensolver check."""


class GridAccuracyError(RobinLabError):
    """The grid is too coarse for the requested accuracy."""


class CompatibilityError(RobinLabError):
    """The bordered-system multiplier disagrees with the flux formula."""


class StudyError(RobinLabError):
    """A study cannot produce a fit or a coercive column from its inputs."""


class GeometryError(RobinLabError, ValueError):
    """Invalid disk geometry, Fourier mode or evaluation radius."""


class CoercivityError(RobinLabError):
    """The shifted form is not coercive for the requested (delta, alpha)."""
