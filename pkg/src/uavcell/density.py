"""User-density fields and the shared quadrature/assignment lattice.

Every integral in the library is a midpoint-rule sum on one uniform lattice
(the Grid); cell assignment uses the same lattice, so integrals and
partitions are consistent by construction. A truncated-Gaussian field is
normalized numerically on the lattice it is built with, which makes its
total mass exactly one there.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyCell, OutOfRegion
from .model import GridSpec, Region

UNIFORM = "uniform"
TRUNCATED_GAUSSIAN = "truncated_gaussian"

# Cells with less user mass than this are treated as empty.
EMPTY_MASS = 1e-12


class Grid:
    """Uniform midpoint lattice of nx * ny points over a region.

    Points are stored flattened in row-major order, x varying fastest:
    index p = iy * nx + ix. Every point carries the same quadrature weight
    cell_area = dx * dy.
    """

    def __init__(self, region: Region, nx: int, ny: int):
        if nx < 2 or ny < 2:
            raise ValueError("grid needs nx >= 2 and ny >= 2")
        self.region = region
        self.nx = int(nx)
        self.ny = int(ny)
        self.dx = region.width / nx
        self.dy = region.height / ny
        self.xs = region.x_lo + (np.arange(nx) + 0.5) * self.dx
        self.ys = region.y_lo + (np.arange(ny) + 0.5) * self.dy
        X, Y = np.meshgrid(self.xs, self.ys)
        self.x = np.ascontiguousarray(X.ravel())
        self.y = np.ascontiguousarray(Y.ravel())
        self.cell_area = self.dx * self.dy
        self.n_points = self.nx * self.ny

    @classmethod
    def from_spec(cls, region: Region, spec: GridSpec):
        return cls(region, spec.nx, spec.ny)

    def full_cell(self):
        return Cell(self, np.arange(self.n_points, dtype=np.int64))

    def indices_in(self, rect: Region):
        """Indices of lattice points inside an axis-aligned rectangle."""
        m = ((self.x >= rect.x_lo) & (self.x <= rect.x_hi)
             & (self.y >= rect.y_lo) & (self.y <= rect.y_hi))
        return np.nonzero(m)[0].astype(np.int64)

    def __repr__(self):
        return f"Grid({self.nx}x{self.ny} over {self.region})"


@dataclass(frozen=True, eq=False)
class Cell:
    """A set of lattice points owned by one UAV."""

    grid: Grid
    indices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "indices",
                           np.asarray(self.indices, dtype=np.int64))

    @property
    def n_points(self):
        return int(self.indices.size)

    @property
    def x(self):
        return self.grid.x[self.indices]

    @property
    def y(self):
        return self.grid.y[self.indices]

    @property
    def weights(self):
        return np.full(self.indices.size, self.grid.cell_area)

    @property
    def area(self):
        return self.indices.size * self.grid.cell_area

    def bounding_box(self):
        """(x_lo, x_hi, y_lo, y_hi) of the member points."""
        if self.indices.size == 0:
            raise EmptyCell("bounding box of a cell with no points")
        x, y = self.x, self.y
        return float(x.min()), float(x.max()), float(y.min()), float(y.max())


@dataclass(frozen=True)
class DensityField:
    """User density over a region: uniform, or a Gaussian hotspot truncated
    to the region and renormalized. norm is the precomputed normalizer."""

    kind: str
    region: Region
    mu_x: float = 0.0
    mu_y: float = 0.0
    sigma_x: float = 1.0
    sigma_y: float = 1.0
    norm: float = 1.0

    @classmethod
    def uniform(cls, region: Region):
        return cls(kind=UNIFORM, region=region, norm=region.area)

    @classmethod
    def truncated_gaussian(cls, region, mu_x, mu_y, sigma_x, sigma_y, grid: Grid):
        """Hotspot field centered at (mu_x, mu_y), unit mass on the lattice."""
        if sigma_x <= 0 or sigma_y <= 0:
            raise ValueError("sigma_x and sigma_y must be > 0")
        if grid.region != region:
            raise ValueError("normalization grid must cover the same region")
        bare = _gauss_bare(grid.x, grid.y, mu_x, mu_y, sigma_x, sigma_y)
        norm = float(bare.sum() * grid.cell_area)
        return cls(kind=TRUNCATED_GAUSSIAN, region=region, mu_x=mu_x,
                   mu_y=mu_y, sigma_x=sigma_x, sigma_y=sigma_y, norm=norm)

    def values(self, x, y):
        """Density at points known to lie inside the region (no check)."""
        if self.kind == UNIFORM:
            return np.full(np.shape(x), 1.0 / self.norm)
        bare = _gauss_bare(np.asarray(x, dtype=float),
                           np.asarray(y, dtype=float),
                           self.mu_x, self.mu_y, self.sigma_x, self.sigma_y)
        return bare / self.norm


def _gauss_bare(x, y, mu_x, mu_y, sigma_x, sigma_y):
    return np.exp(-((x - mu_x) ** 2) / (2.0 * sigma_x**2)
                  - ((y - mu_y) ** 2) / (2.0 * sigma_y**2))


def density_at(field: DensityField, x, y):
    """Density (1/m^2) at one point or an array of points in the region."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    r = field.region
    ok = (xa >= r.x_lo) & (xa <= r.x_hi) & (ya >= r.y_lo) & (ya <= r.y_hi)
    if not np.all(ok):
        raise OutOfRegion(f"point outside region {r}")
    vals = field.values(xa, ya)
    if np.isscalar(x) or xa.ndim == 0:
        return float(vals)
    return vals


def integrate(field: DensityField, domain, weight=None) -> float:
    """Midpoint-rule integral of weight * density over a Cell or a Grid.

    weight may be None (constant 1), a vectorized callable w(x, y), or an
    array of per-point values.
    """
    if isinstance(domain, Grid):
        x, y, area = domain.x, domain.y, domain.cell_area
    else:
        if domain.n_points == 0:
            return 0.0
        x, y, area = domain.x, domain.y, domain.grid.cell_area
    f = field.values(x, y)
    if weight is None:
        return float(f.sum() * area)
    w = weight(x, y) if callable(weight) else np.asarray(weight, dtype=float)
    return float(np.dot(w, f) * area)


def expected_users(field: DensityField, cell, n_users) -> float:
    """Expected user mass of a cell: n_users times its density mass."""
    return n_users * integrate(field, cell)
