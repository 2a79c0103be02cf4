"""Power-optimal UAV position over a fixed cell.

Three solvers: the density centroid (exact in the altitude-dominated
regime), a damped 2D Newton iteration on the cubic stationarity system of
the quadratic sight-probability fit, and an exact-channel brute-force grid
search that serves as the oracle for both.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .channel import los_fit_coefficients
from .density import EMPTY_MASS, Cell, DensityField, integrate
from .errors import DomainError, EmptyCell, NoConvergence
from .model import Environment, UavState

CENTROID = "centroid"
NEWTON_RAPHSON = "newton-raphson"
BRUTE_FORCE = "brute-force"

NEWTON_MAX_ITER = 50
NEWTON_TOL = 1e-8


@dataclass(frozen=True)
class PlacementResult:
    x_opt: float
    y_opt: float
    method: str
    iterations: int
    residual: float


def expected_power_over_cell(env: Environment, uav: UavState, cell: Cell,
                             field: DensityField, w, beta) -> float:
    """Mean transmit power (W) of a UAV serving a cell at per-user
    bandwidth w and rate requirement beta, under the exact channel."""
    if w <= 0:
        raise DomainError("per-user bandwidth must be > 0")
    if cell.n_points == 0:
        return 0.0
    fw = field.values(cell.x, cell.y) * cell.grid.cell_area
    integral = kernels.weighted_loss_sum(cell.x, cell.y, fw, uav.x, uav.y,
                                         uav.h, env.c_env, env.d_env,
                                         env.eta, env.alpha)
    return (2.0 ** (beta / w) - 1.0) * env.n0 * integral


def centroid_location(field: DensityField, cell: Cell):
    """Density centroid of the cell: (integral of x*f, integral of y*f),
    each divided by the cell mass."""
    mass = integrate(field, cell)
    if mass < EMPTY_MASS:
        raise EmptyCell(f"cell mass {mass} below {EMPTY_MASS}")
    cx = integrate(field, cell, weight=lambda x, y: x) / mass
    cy = integrate(field, cell, weight=lambda x, y: y) / mass
    return cx, cy


def _moments(field, cell):
    """Density-weighted moments of the cell up to the mixed third order."""
    x, y = cell.x, cell.y
    fw = field.values(x, y) * cell.grid.cell_area
    return {
        "m0": float(fw.sum()),
        "mx": float(np.dot(fw, x)), "my": float(np.dot(fw, y)),
        "mxx": float(np.dot(fw, x * x)), "myy": float(np.dot(fw, y * y)),
        "mxy": float(np.dot(fw, x * y)),
        "mxxx": float(np.dot(fw, x * x * x)), "myyy": float(np.dot(fw, y * y * y)),
        "mxyy": float(np.dot(fw, x * y * y)), "mxxy": float(np.dot(fw, x * x * y)),
    }


def _cubic_coefficients(m, q, lam, h, xi, yi):
    """Coefficients of the two cubics g1 (in xi) and g2 (in yi).

    g1 is the stationarity condition in the UAV x coordinate of the cell
    integral of (r2 + h^2) * (q + lam * r2) weighted by the density; g2 is
    its y counterpart. The cross terms couple the system through the other
    coordinate, so both sets are recomputed at every iterate.
    """
    qh = q + lam * h * h
    a1 = 4.0 * lam * m["m0"]
    a2 = -12.0 * lam * m["mx"]
    a3 = (2.0 * qh * m["m0"] + 12.0 * lam * m["mxx"]
          + 4.0 * lam * (m["myy"] - 2.0 * yi * m["my"] + yi * yi * m["m0"]))
    a4 = -(2.0 * qh * m["mx"] + 4.0 * lam * m["mxxx"]
           + 4.0 * lam * (m["mxyy"] - 2.0 * yi * m["mxy"] + yi * yi * m["mx"]))
    b1 = 4.0 * lam * m["m0"]
    b2 = -12.0 * lam * m["my"]
    b3 = (2.0 * qh * m["m0"] + 12.0 * lam * m["myy"]
          + 4.0 * lam * (m["mxx"] - 2.0 * xi * m["mx"] + xi * xi * m["m0"]))
    b4 = -(2.0 * qh * m["my"] + 4.0 * lam * m["myyy"]
           + 4.0 * lam * (m["mxxy"] - 2.0 * xi * m["mxy"] + xi * xi * m["my"]))
    return (a1, a2, a3, a4), (b1, b2, b3, b4)


def _system_residual(m, q, lam, h, xi, yi):
    """(g1, g2) evaluated from freshly computed coefficients."""
    (a1, a2, a3, a4), (b1, b2, b3, b4) = _cubic_coefficients(m, q, lam, h, xi, yi)
    g1 = ((a1 * xi + a2) * xi + a3) * xi + a4
    g2 = ((b1 * yi + b2) * yi + b3) * yi + b4
    return g1, g2


def _solve_cubic_system(m, q, lam, h, bbox,
                        max_iter=NEWTON_MAX_ITER, tol=NEWTON_TOL):
    """Damped 2D Newton iteration on (g1, g2) with the analytic Jacobian.

    Starts at the cell centroid; any full step that would leave the cell
    bounding box is halved until it stays inside. The residual is normalized
    by |a1| * span^3 (the cubic term's scale); the linear term's scale keeps
    the normalization meaningful when lam vanishes.
    """
    xlo, xhi, ylo, yhi = bbox
    span = max(xhi - xlo, yhi - ylo)
    qh = q + lam * h * h
    scale = abs(4.0 * lam * m["m0"]) * span**3
    if scale == 0.0:
        # degenerate linear system (no radial weight): fall back to the
        # linear term's magnitude
        scale = max(abs(2.0 * qh * m["m0"]) * span, 1e-300)
    xi, yi = m["mx"] / m["m0"], m["my"] / m["m0"]
    residual = math.inf
    for it in range(1, max_iter + 1):
        (a1, a2, a3, a4), (b1, b2, b3, b4) = _cubic_coefficients(m, q, lam, h, xi, yi)
        g1 = ((a1 * xi + a2) * xi + a3) * xi + a4
        g2 = ((b1 * yi + b2) * yi + b3) * yi + b4
        residual = max(abs(g1), abs(g2)) / scale
        if residual < tol:
            return xi, yi, it, residual
        j11 = (3.0 * a1 * xi + 2.0 * a2) * xi + a3
        j22 = (3.0 * b1 * yi + 2.0 * b2) * yi + b3
        j12 = 8.0 * lam * (m["mxy"] - xi * m["my"] - yi * m["mx"]
                           + xi * yi * m["m0"])
        det = j11 * j22 - j12 * j12
        if det == 0.0 or not math.isfinite(det):
            raise NoConvergence("singular Jacobian in placement iteration")
        dx = (-g1 * j22 + g2 * j12) / det
        dy = (-g2 * j11 + g1 * j12) / det
        nx, ny = xi + dx, yi + dy
        halvings = 0
        while not (xlo <= nx <= xhi and ylo <= ny <= yhi) and halvings < 60:
            dx *= 0.5
            dy *= 0.5
            nx, ny = xi + dx, yi + dy
            halvings += 1
        xi, yi = nx, ny
    raise NoConvergence(
        f"placement iteration residual {residual:.3e} after {max_iter} steps"
    )


def newton_raphson_location(env: Environment, field: DensityField, cell: Cell,
                            h) -> PlacementResult:
    """Root of the coupled cubic stationarity system for a UAV at altitude h.

    Valid only inside the sight-probability fit domain. Raises NoConvergence
    when the iteration stalls (callers fall back to brute force).
    """
    slope, intercept = los_fit_coefficients(h)  # DomainError outside [100, 2000]
    lam = (1.0 - env.eta) * slope
    q = env.eta + (1.0 - env.eta) * intercept
    m = _moments(field, cell)
    if m["m0"] < EMPTY_MASS:
        raise EmptyCell(f"cell mass {m['m0']} below {EMPTY_MASS}")
    bbox = cell.bounding_box()
    xi, yi, it, residual = _solve_cubic_system(m, q, lam, h, bbox)
    return PlacementResult(x_opt=xi, y_opt=yi, method=NEWTON_RAPHSON,
                           iterations=it, residual=residual)


def brute_force_location(env: Environment, field: DensityField, cell: Cell,
                         h, resolution=24) -> PlacementResult:
    """Exact-channel grid search over the cell bounding box.

    Scans a resolution x resolution candidate lattice, then refines once
    around the best point at 4x finer pitch. Oracle for the other solvers.
    """
    if resolution < 8:
        raise DomainError("resolution must be >= 8")
    if cell.n_points == 0:
        raise EmptyCell("brute-force placement over a cell with no points")
    xlo, xhi, ylo, yhi = cell.bounding_box()
    px, py = cell.x, cell.y
    fw = field.values(px, py) * cell.grid.cell_area

    def scan(cx, cy):
        CX, CY = np.meshgrid(cx, cy)
        flat_x, flat_y = CX.ravel(), CY.ravel()
        vals = kernels.candidate_loss_sums(px, py, fw, flat_x, flat_y, h,
                                           env.c_env, env.d_env, env.eta,
                                           env.alpha)
        k = int(np.argmin(vals))
        return flat_x[k], flat_y[k], float(vals[k])

    pitch_x = (xhi - xlo) / resolution if xhi > xlo else 0.0
    pitch_y = (yhi - ylo) / resolution if yhi > ylo else 0.0
    cx = xlo + (np.arange(resolution) + 0.5) * pitch_x
    cy = ylo + (np.arange(resolution) + 0.5) * pitch_y
    bx, by, bv = scan(cx, cy)

    offs = np.arange(resolution) - (resolution - 1) / 2.0
    cx2 = np.clip(bx + offs * pitch_x / 4.0, xlo, xhi)
    cy2 = np.clip(by + offs * pitch_y / 4.0, ylo, yhi)
    rx, ry, rv = scan(cx2, cy2)
    if rv < bv:
        bx, by = rx, ry
    return PlacementResult(x_opt=float(bx), y_opt=float(by),
                           method=BRUTE_FORCE,
                           iterations=2 * resolution * resolution,
                           residual=math.nan)
