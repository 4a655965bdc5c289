"""
Finite-element path to the sector spectrum.

In sector m the Robin problem becomes the pencil

    (S - B / delta) x = lambda M x

with S = int (v'w' + m^2/r^2 v w) r dr, M = int v w r dr and the rank-one
trace B = R v(R) w(R). Linear or quadratic Lagrange elements on a radial grid;
for m >= 1 the origin value is removed (v(0) = 0), for m = 0 it stays free.

Degrees of freedom are ordered by radius: element e owns dofs p*e .. p*e + p,
so with quadratic elements vertex i is dof 2i and the midpoint of element i
is dof 2i + 1.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import LinAlgError, cho_factor, cho_solve, eigh
from scipy.optimize import minimize_scalar
from scipy.sparse import coo_matrix, csr_matrix

from .base import (
    Branch,
    DiskEigenpair,
    DiskGeometry,
    FourierMode,
    Provenance,
    SectorSolver,
)
from .errors import DiscretizationError, GridError
from .settings import section

logger = logging.getLogger(__name__)

_GRID = section("grid")
_TRACE = section("trace")
DEFAULT_ELEMENTS = int(_GRID.get("elements", 512))
DEFAULT_ORDER = int(_GRID.get("order", 2))
LAYER_FACTOR = float(_GRID.get("layer_factor", 10.0))
RESOLVE_FACTOR = float(_GRID.get("resolve_factor", 5.0))
MIN_ELEMENTS = 4


@dataclass(frozen=True)
class Grading:
    """Uniform, or boundary-graded with a layer of width ``layer_width`` at r = R."""
    kind: str = "uniform"
    layer_width: Optional[float] = None

    @classmethod
    def uniform(cls) -> "Grading":
        return cls("uniform", None)

    @classmethod
    def graded(cls, layer_width: float) -> "Grading":
        return cls("graded", float(layer_width))

    def describe(self) -> str:
        if self.kind == "uniform":
            return "uniform"
        return f"graded(w={self.layer_width:g})"


def _shape(order: int, xi):
    """Lagrange shape functions and their xi-derivatives on [0, 1]."""
    xi = np.asarray(xi, dtype=float)
    if order == 1:
        values = np.stack([1.0 - xi, xi], axis=-1)
        slopes = np.stack([-np.ones_like(xi), np.ones_like(xi)], axis=-1)
    else:
        values = np.stack(
            [(1.0 - xi) * (1.0 - 2.0 * xi), 4.0 * xi * (1.0 - xi), xi * (2.0 * xi - 1.0)],
            axis=-1,
        )
        slopes = np.stack([4.0 * xi - 3.0, 4.0 - 8.0 * xi, 4.0 * xi - 1.0], axis=-1)
    return values, slopes


@dataclass
class RadialGrid:
    geometry: DiskGeometry
    nodes: np.ndarray
    order: int
    grading: Grading

    @property
    def elements(self) -> int:
        return len(self.nodes) - 1

    @property
    def dof_count(self) -> int:
        return self.order * self.elements + 1

    @property
    def boundary_dof(self) -> int:
        return self.dof_count - 1

    @property
    def element_dofs(self) -> np.ndarray:
        p = self.order
        return p * np.arange(self.elements)[:, None] + np.arange(p + 1)[None, :]

    @property
    def dof_coordinates(self) -> np.ndarray:
        """Radius of every degree of freedom, increasing."""
        coords = np.empty(self.dof_count)
        coords[:: self.order] = self.nodes
        if self.order == 2:
            coords[1::2] = 0.5 * (self.nodes[:-1] + self.nodes[1:])
        return coords

    @property
    def smallest_boundary_element(self) -> float:
        return float(self.nodes[-1] - self.nodes[-2])

    def locate(self, r):
        """Element index and local coordinate of each radius."""
        r = np.asarray(r, dtype=float)
        element = np.clip(np.searchsorted(self.nodes, r, side="right") - 1, 0, self.elements - 1)
        start = self.nodes[element]
        width = self.nodes[element + 1] - start
        return element, (r - start) / width, width

    def describe(self) -> str:
        kind = "P1" if self.order == 1 else "P2"
        return f"{kind} n={self.elements} {self.grading.describe()}"


@dataclass
class RadialFunction:
    """Nodal coefficients of a radial profile on a grid."""
    grid: RadialGrid
    coefficients: np.ndarray

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        if self.coefficients.shape != (self.grid.dof_count,):
            raise GridError(
                f"expected {self.grid.dof_count} coefficients, got {self.coefficients.shape}"
            )

    def _local(self, r):
        element, xi, width = self.grid.locate(r)
        coeffs = self.coefficients[self.grid.element_dofs[element]]
        values, slopes = _shape(self.grid.order, xi)
        return coeffs, values, slopes, width

    def __call__(self, r):
        coeffs, values, _, _ = self._local(r)
        return np.sum(coeffs * values, axis=-1)

    def derivative(self, r):
        coeffs, _, slopes, width = self._local(r)
        return np.sum(coeffs * slopes, axis=-1) / width

    @property
    def boundary_value(self) -> float:
        return float(self.coefficients[-1])

    def __add__(self, other: "RadialFunction") -> "RadialFunction":
        return RadialFunction(self.grid, self.coefficients + other.coefficients)

    def __mul__(self, factor: float) -> "RadialFunction":
        return RadialFunction(self.grid, factor * self.coefficients)

    __rmul__ = __mul__


@dataclass
class SectorPencil:
    """Stiffness, mass and trace matrices of one Fourier sector.

    The sparse matrices cover every dof; the dense ``S``, ``M``, ``B``
    properties are restricted to the free dofs used by the solvers.
    """
    grid: RadialGrid
    mode: FourierMode
    stiffness: csr_matrix
    mass: csr_matrix
    trace: csr_matrix
    local_mass: np.ndarray
    delta: Optional[float] = None
    _dense: dict = field(default_factory=dict, repr=False)

    @property
    def free(self) -> np.ndarray:
        start = 1 if self.mode.m >= 1 else 0
        return np.arange(start, self.grid.dof_count)

    @property
    def boundary(self) -> int:
        """Index of the boundary dof within the free dofs."""
        return len(self.free) - 1

    def _restricted(self, key: str, matrix: csr_matrix) -> np.ndarray:
        if key not in self._dense:
            free = self.free
            self._dense[key] = matrix[free][:, free].toarray()
        return self._dense[key]

    @property
    def S(self) -> np.ndarray:
        return self._restricted("S", self.stiffness)

    @property
    def M(self) -> np.ndarray:
        return self._restricted("M", self.mass)

    @property
    def B(self) -> np.ndarray:
        return self._restricted("B", self.trace)

    def expand(self, free_values: np.ndarray) -> np.ndarray:
        """Full nodal vector from free-dof values (origin value 0 for m >= 1)."""
        full = np.zeros(self.grid.dof_count)
        full[self.free] = free_values
        return full


def build_grid(
    geometry: DiskGeometry,
    n: int = DEFAULT_ELEMENTS,
    grading: Optional[Grading] = None,
    order: int = DEFAULT_ORDER,
) -> RadialGrid:
    """Radial grid of n elements on [0, R].

    A graded grid puts ceil(n/3) equal elements in [R - w, R] and the rest in
    [0, R - w].
    """
    grading = grading or Grading.uniform()
    R = geometry.radius
    if int(n) != n or n < MIN_ELEMENTS:
        raise GridError(f"need at least {MIN_ELEMENTS} elements, got {n}")
    if order not in (1, 2):
        raise GridError(f"element order must be 1 or 2, got {order}")

    if grading.kind == "uniform":
        nodes = np.linspace(0.0, R, n + 1)
    elif grading.kind == "graded":
        w = grading.layer_width
        if w is None or not (0.0 < w < R):
            raise GridError(f"layer width must lie in (0, {R}), got {w}")
        layer = int(math.ceil(n / 3))
        core = n - layer
        nodes = np.concatenate(
            [np.linspace(0.0, R - w, core + 1), np.linspace(R - w, R, layer + 1)[1:]]
        )
    else:
        raise GridError(f"unknown grading '{grading.kind}'")
    nodes[-1] = R
    return RadialGrid(geometry=geometry, nodes=nodes, order=int(order), grading=grading)


def sweep_grid(
    geometry: DiskGeometry,
    deltas,
    n: int = DEFAULT_ELEMENTS,
    order: int = DEFAULT_ORDER,
) -> RadialGrid:
    """Boundary-graded grid resolving the layer of the smallest delta."""
    width = min(LAYER_FACTOR * float(min(deltas)), 0.5 * geometry.radius)
    return build_grid(geometry, n, Grading.graded(width), order)


def assemble(m: int, grid: RadialGrid) -> SectorPencil:
    """Assemble S, M and B for sector m."""
    mode = FourierMode(m)
    p = grid.order
    points, weights = leggauss(p + 2)
    xi = 0.5 * (points + 1.0)
    weights = 0.5 * weights
    values, slopes = _shape(p, xi)

    start = grid.nodes[:-1, None]
    width = np.diff(grid.nodes)[:, None]
    r = start + width * xi[None, :]
    weighted = weights[None, :] * width * r

    local_mass = np.einsum("eq,qi,qj->eij", weighted, values, values)
    local_stiff = np.einsum("eq,qi,qj->eij", weighted / width ** 2, slopes, slopes)
    if m:
        angular = weights[None, :] * width / r
        local_stiff = local_stiff + m * m * np.einsum("eq,qi,qj->eij", angular, values, values)

    dofs = grid.element_dofs
    rows = np.broadcast_to(dofs[:, :, None], local_mass.shape).ravel()
    cols = np.broadcast_to(dofs[:, None, :], local_mass.shape).ravel()
    size = grid.dof_count

    def _global(local: np.ndarray) -> csr_matrix:
        matrix = coo_matrix((local.ravel(), (rows, cols)), shape=(size, size)).tocsr()
        return ((matrix + matrix.T) * 0.5).tocsr()

    b = grid.boundary_dof
    trace = coo_matrix(([grid.geometry.radius], ([b], [b])), shape=(size, size)).tocsr()
    logger.debug("assembled m=%d on %s (%d dofs)", m, grid.describe(), size)
    return SectorPencil(
        grid=grid,
        mode=mode,
        stiffness=_global(local_stiff),
        mass=_global(local_mass),
        trace=trace,
        local_mass=local_mass,
    )


def with_delta(pencil: SectorPencil, delta: float) -> SectorPencil:
    if not (delta > 0.0):
        raise GridError(f"delta must be positive, got {delta}")
    return replace(pencil, delta=float(delta))


def _require_delta(pencil: SectorPencil, delta: Optional[float]) -> float:
    value = pencil.delta if delta is None else delta
    if value is None or not (value > 0.0):
        raise GridError("a positive delta is required for this operation")
    return float(value)


def _check_resolution(pencil: SectorPencil, delta: float) -> None:
    h = pencil.grid.smallest_boundary_element
    if delta >= RESOLVE_FACTOR * h:
        return
    logger.warning(
        "delta=%g is under-resolved by %s (boundary element %.3g); "
        "surface modes will be inaccurate",
        delta,
        pencil.grid.describe(),
        h,
    )


def _eigh(a: np.ndarray, b: np.ndarray, count: int, vectors: bool = True):
    count = min(count, a.shape[0])
    try:
        return eigh(a, b, subset_by_index=[0, count - 1], eigvals_only=not vectors)
    except (LinAlgError, ValueError) as e:
        raise DiscretizationError(f"generalized eigensolve failed: {e}") from e


def _orient(vector: np.ndarray) -> np.ndarray:
    """Positive at the first node where |v| is largest."""
    if vector[np.argmax(np.abs(vector))] < 0.0:
        return -vector
    return vector


def _discrete_pairs(pencil: SectorPencil, values, vectors, delta: Optional[float], dirichlet: bool):
    pairs = []
    for i, lam in enumerate(values):
        coeffs = _orient(vectors[:, i])
        if dirichlet:
            branch = Branch.DIRICHLET
        else:
            branch = Branch.SURFACE if lam < 0.0 else Branch.OSCILLATORY
        pairs.append(
            DiskEigenpair(
                eigenvalue=float(lam),
                mode=pencil.mode,
                branch=branch,
                geometry=pencil.grid.geometry,
                provenance=Provenance.DISCRETE,
                delta=delta,
                wavenumber=math.sqrt(abs(lam)),
                profile=RadialFunction(pencil.grid, coeffs),
            )
        )
    return pairs


def solve_robin_discrete(pencil: SectorPencil, count: int, delta: Optional[float] = None) -> list[DiskEigenpair]:
    """The ``count`` smallest eigenpairs of (S - B/delta) x = lambda M x.

    Eigenvectors are M-orthonormal; surface (negative) eigenvalues are
    included whenever the grid resolves them.
    """
    delta = _require_delta(pencil, delta)
    _check_resolution(pencil, delta)
    values, vectors = _eigh(pencil.S - pencil.B / delta, pencil.M, count)
    full = np.stack([pencil.expand(vectors[:, i]) for i in range(len(values))], axis=1)
    return _discrete_pairs(pencil, values, full, delta, dirichlet=False)


def solve_dirichlet_discrete(pencil: SectorPencil, count: int) -> list[DiskEigenpair]:
    """Sector Dirichlet eigenpairs: the boundary dof is removed."""
    inner = slice(0, pencil.boundary)
    values, vectors = _eigh(pencil.S[inner, inner], pencil.M[inner, inner], count)
    full = np.zeros((pencil.grid.dof_count, len(values)))
    full[pencil.free[:-1], :] = vectors
    return _discrete_pairs(pencil, values, full, None, dirichlet=True)


def h1_delta_gram(pencil: SectorPencil, delta: Optional[float] = None) -> np.ndarray:
    """G = S + M / delta^2 on the free dofs."""
    delta = _require_delta(pencil, delta)
    return pencil.S + pencil.M / (delta * delta)


def shifted_operator(pencil: SectorPencil, delta: float, alpha: float) -> np.ndarray:
    """S - B/delta + (alpha/delta^2) M on the free dofs."""
    return pencil.S - pencil.B / delta + (alpha / (delta * delta)) * pencil.M


def min_coercivity_eigenvalue(pencil: SectorPencil, delta: Optional[float] = None, alpha: float = 1.0) -> float:
    """Smallest eigenvalue of the shifted form relative to the H1_delta Gram."""
    delta = _require_delta(pencil, delta)
    if alpha < 0.0:
        raise GridError(f"alpha must be non-negative, got {alpha}")
    _check_resolution(pencil, delta)
    theta = _eigh(shifted_operator(pencil, delta, alpha), h1_delta_gram(pencil, delta), 1, vectors=False)
    return float(theta[0])


def solve_shifted(pencil: SectorPencil, delta: Optional[float] = None, alpha: float = 1.0, count: int = 1) -> np.ndarray:
    """Eigenvalues mu of (S - B/delta + alpha/delta^2 M) x = mu M x."""
    delta = _require_delta(pencil, delta)
    values = _eigh(shifted_operator(pencil, delta, alpha), pencil.M, count, vectors=False)
    return np.asarray(values, dtype=float)


def trace_constant(pencil: SectorPencil) -> float:
    """Best constant C in ||u||_{L2(boundary)}^2 = R u(R)^2 <= C (||grad u|| ||u|| + ||u||^2).

    For fixed t the ratio is lambda_max(B, D(t)) with
    D(t) = t/2 S + (1/(2t) + 1) M; B has rank one so this equals
    R (D^{-1})_bb. The sup over log t is a coarse scan refined by a
    bounded scalar search.
    """
    S, M = pencil.S, pencil.M
    b = pencil.boundary
    unit = np.zeros(S.shape[0])
    unit[b] = 1.0
    R = pencil.grid.geometry.radius

    def ratio(log_t: float) -> float:
        t = math.exp(log_t)
        try:
            factor = cho_factor(0.5 * t * S + (0.5 / t + 1.0) * M)
        except LinAlgError as e:
            raise DiscretizationError(f"trace form not positive definite: {e}") from e
        return R * float(cho_solve(factor, unit)[b])

    lo = float(_TRACE.get("log_t_min", -8.0))
    hi = float(_TRACE.get("log_t_max", 8.0))
    scan = np.linspace(lo, hi, int(_TRACE.get("scan_points", 33)))
    values = np.array([ratio(t) for t in scan])
    best = int(np.argmax(values))
    left = scan[max(best - 1, 0)]
    right = scan[min(best + 1, len(scan) - 1)]
    refined = minimize_scalar(lambda t: -ratio(t), bounds=(left, right), method="bounded")
    return max(float(values[best]), -float(refined.fun))


def norms(u: RadialFunction, pencil: SectorPencil, delta: Optional[float] = None, rho: Optional[float] = None) -> dict:
    """Squared norms of a discrete profile.

    l2_K integrates over [0, rho] with rho snapped to the nearest vertex.
    """
    delta = _require_delta(pencil, delta)
    grid = pencil.grid
    c = u.coefficients
    l2_omega = float(c @ (pencil.mass @ c))
    gradient = float(c @ (pencil.stiffness @ c))
    if rho is None:
        rho = 0.5 * grid.geometry.radius
    cut = int(np.argmin(np.abs(grid.nodes - rho)))
    local = c[grid.element_dofs[:cut]]
    l2_K = float(np.einsum("ei,eij,ej->", local, pencil.local_mass[:cut], local))
    return {
        "l2_omega": l2_omega,
        "l2_gamma": grid.geometry.radius * u.boundary_value ** 2,
        "l2_K": l2_K,
        "h1_delta": gradient + l2_omega / (delta * delta),
    }


class DiscreteSectorSolver(SectorSolver):
    """Sector spectrum from the finite-element pencil on a fixed grid."""

    def __init__(self, geometry: DiskGeometry, grid: RadialGrid):
        super().__init__(geometry)
        self.grid = grid
        self._pencils: dict[int, SectorPencil] = {}

    def pencil(self, m: int) -> SectorPencil:
        if m not in self._pencils:
            self._pencils[m] = assemble(m, self.grid)
        return self._pencils[m]

    def sector_spectrum(self, m: int, delta: float, count: int) -> list[DiskEigenpair]:
        return solve_robin_discrete(with_delta(self.pencil(m), delta), count)
