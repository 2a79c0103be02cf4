"""Cell association: nearest-UAV baseline and the load-aware optimal
partition solved as a damped fixed point on the lattice.

The optimal rule assigns a point to the UAV minimizing

    S(M_i) * F_i(x, y) + N * T_i,

where S(M) = 2^(beta*M/B) - 1 is the load factor, F_i = N0 * mean path
loss, and T_i = S'(M_i) * cell integral of F_i * f is the per-user marginal
load cost. The N * T_i term is the marginal cost a transferred user inflicts
on the receiving cell's existing load; the pointwise term is its own cost.
All comparisons are carried out with the noise power factored out, so owner
maps are exactly invariant under rescaling N0.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .channel import LinkGeometry, mean_path_loss
from .density import Cell, DensityField, Grid
from .model import Environment, UavState

LN2 = math.log(2.0)

OT_MAX_ITERS = 100
# "Converged" means a reassignment pass flips fewer than this fraction of
# the lattice points.
OT_CHANGE_FRAC = 1e-3
OT_DAMPING = 0.5
OT_DAMPING_MIN = 1.0 / 64.0
OT_POLISH_MAX_SCANS = 60


def _s_one(mass, beta, b):
    return 2.0 ** (beta * mass / b) - 1.0


@dataclass(frozen=True, eq=False)
class CellPartition:
    """Assignment of every lattice point to one UAV, with per-UAV user
    masses and load terms (watts) of the final state."""

    grid: Grid
    owner: np.ndarray
    masses: np.ndarray
    t_terms: np.ndarray
    iterations: int
    converged: bool

    @property
    def n_uavs(self):
        return int(self.masses.size)

    def cell(self, i) -> Cell:
        return Cell(self.grid, np.nonzero(self.owner == i)[0])

    def cells(self):
        return [self.cell(i) for i in range(self.n_uavs)]


def _loss_maps(env, uavs, grid):
    return np.stack([
        kernels.mean_loss_map(grid.x, grid.y, u.x, u.y, u.h,
                              env.c_env, env.d_env, env.eta, env.alpha)
        for u in uavs
    ])


def _masses(owner, fw, n_users, k):
    return n_users * np.bincount(owner, weights=fw, minlength=k)


def _loss_integrals(owner, fw, loss_maps, k):
    picked = loss_maps[owner, np.arange(owner.size)]
    return np.bincount(owner, weights=picked * fw, minlength=k)


def _load_factor(masses, beta, b_list):
    return 2.0 ** (beta * masses / b_list) - 1.0


def _load_factor_deriv(masses, beta, b_list):
    return (beta * LN2 / b_list) * 2.0 ** (beta * masses / b_list)


def voronoi_partition(uavs, field: DensityField, grid: Grid,
                      n_users) -> CellPartition:
    """Nearest-UAV assignment by 3D distance; ties go to the lowest index.

    The load terms of this geometric baseline are zero.
    """
    d2 = np.stack([(grid.x - u.x) ** 2 + (grid.y - u.y) ** 2 + u.h * u.h
                   for u in uavs])
    owner = np.argmin(d2, axis=0).astype(np.int64)
    fw = field.values(grid.x, grid.y) * grid.cell_area
    masses = _masses(owner, fw, n_users, len(uavs))
    return CellPartition(grid=grid, owner=owner, masses=masses,
                         t_terms=np.zeros(len(uavs)), iterations=0,
                         converged=True)


def cost_kernel(env: Environment, uav: UavState, x, y) -> float:
    """Transport cost of serving point (x, y) from the UAV: noise power
    times the exact mean path loss."""
    r2 = (x - uav.x) ** 2 + (y - uav.y) ** 2
    return env.n0 * mean_path_loss(env, LinkGeometry.from_offset(r2, uav.h))


def t_term(env: Environment, uav: UavState, cell: Cell, field: DensityField,
           beta, b, n_users) -> float:
    """Per-user marginal load cost of a cell (watts).

    S'(M) * cell integral of F * f, with M the cell's expected user mass.
    Empty cells cost nothing.
    """
    if cell.n_points == 0:
        return 0.0
    fw = field.values(cell.x, cell.y) * cell.grid.cell_area
    mass = n_users * float(fw.sum())
    integral = env.n0 * kernels.weighted_loss_sum(
        cell.x, cell.y, fw, uav.x, uav.y, uav.h,
        env.c_env, env.d_env, env.eta, env.alpha)
    return (beta * LN2 / b) * 2.0 ** (beta * mass / b) * integral


def ot_partition(env: Environment, uavs, field: DensityField, beta, b_list,
                 n_users, grid: Grid, max_iters=OT_MAX_ITERS,
                 change_frac=OT_CHANGE_FRAC,
                 damping=OT_DAMPING) -> CellPartition:
    """Load-aware optimal partition for fixed UAV positions.

    Two phases. A damped fixed-point iteration from the nearest-UAV start
    handles the bulk transport: reassign every point by the marginal-cost
    rule against a damped (mass, integral) state; the damping cools when
    the owner-change count stops shrinking (load feedback overshoots on
    concentrated densities) and recovers while it contracts. A descent
    polish then equilibrates the boundary: dissenting points move one at a
    time, only when the exact total-power delta is negative, which is
    strictly monotone and ends in a discrete local optimum.

    converged means the final map reassigns fewer than change_frac of the
    points under the masses and load terms recomputed from its own cells;
    densities near the lattice pitch may never satisfy this and come back
    converged=False with the best map found.
    """
    k = len(uavs)
    b_arr = np.asarray(b_list, dtype=float)
    if b_arr.size != k:
        raise ValueError("one bandwidth per uav is required")
    loss_maps = _loss_maps(env, uavs, grid)
    fw = field.values(grid.x, grid.y) * grid.cell_area

    owner = voronoi_partition(uavs, field, grid, n_users).owner
    masses = _masses(owner, fw, n_users, k)
    integrals = _loss_integrals(owner, fw, loss_maps, k)

    def power_of(m, i):
        return float(np.dot(_load_factor(m, beta, b_arr), i))

    def assign(m, i):
        load = _load_factor(m, beta, b_arr)
        marginal = n_users * _load_factor_deriv(m, beta, b_arr) * i
        compare = load[:, None] * loss_maps + marginal[:, None]
        return np.argmin(compare, axis=0).astype(np.int64)

    best_power = power_of(masses, integrals)
    best_owner = owner.copy()
    gamma = damping
    prev_changes = None
    iterations = 0
    threshold = change_frac * grid.n_points
    for iterations in range(1, max_iters + 1):
        new_owner = assign(masses, integrals)
        changes = int(np.count_nonzero(new_owner != owner))
        owner = new_owner
        true_m = _masses(owner, fw, n_users, k)
        true_i = _loss_integrals(owner, fw, loss_maps, k)
        if power_of(true_m, true_i) < best_power:
            best_power = power_of(true_m, true_i)
            best_owner = owner.copy()
        if changes < threshold:
            break
        masses = (1.0 - gamma) * masses + gamma * true_m
        integrals = (1.0 - gamma) * integrals + gamma * true_i
        if prev_changes is not None:
            if changes >= prev_changes:
                gamma = max(gamma * 0.5, OT_DAMPING_MIN)
            else:
                gamma = min(damping, gamma * 1.25)
        prev_changes = changes

    owner = best_owner
    masses = _masses(owner, fw, n_users, k)
    integrals = _loss_integrals(owner, fw, loss_maps, k)
    scans = 0
    while True:
        wanted = assign(masses, integrals)
        moving = np.nonzero(wanted != owner)[0]
        residual = int(moving.size)
        if residual == 0 or scans >= OT_POLISH_MAX_SCANS:
            break
        scans += 1
        applied = 0
        for p in moving:
            src, dst = int(owner[p]), int(wanted[p])
            w_p = float(fw[p])
            mu = n_users * w_p
            li_dst = float(loss_maps[dst, p]) * w_p
            li_src = float(loss_maps[src, p]) * w_p
            delta = (_s_one(masses[dst] + mu, beta, b_arr[dst])
                     * (integrals[dst] + li_dst)
                     - _s_one(masses[dst], beta, b_arr[dst]) * integrals[dst]
                     + _s_one(masses[src] - mu, beta, b_arr[src])
                     * (integrals[src] - li_src)
                     - _s_one(masses[src], beta, b_arr[src]) * integrals[src])
            if delta < 0.0:
                owner[p] = dst
                masses[dst] += mu
                masses[src] -= mu
                integrals[dst] += li_dst
                integrals[src] -= li_src
                applied += 1
        if applied == 0:
            break

    converged = residual < threshold
    t_terms = (env.n0 * _load_factor_deriv(masses, beta, b_arr) * integrals)
    return CellPartition(grid=grid, owner=owner, masses=masses,
                         t_terms=t_terms, iterations=iterations + scans,
                         converged=converged)


def rect_partition(rects, field: DensityField, grid: Grid,
                   n_users) -> CellPartition:
    """Partition given by a list of rectangles tiling the region; boundary
    points go to the lowest-index rectangle containing them."""
    owner = np.full(grid.n_points, -1, dtype=np.int64)
    for i, r in enumerate(rects):
        m = ((grid.x >= r.x_lo) & (grid.x <= r.x_hi)
             & (grid.y >= r.y_lo) & (grid.y <= r.y_hi) & (owner < 0))
        owner[m] = i
    if np.any(owner < 0):
        raise ValueError("rectangles do not cover every lattice point")
    fw = field.values(grid.x, grid.y) * grid.cell_area
    masses = _masses(owner, fw, n_users, len(rects))
    return CellPartition(grid=grid, owner=owner, masses=masses,
                         t_terms=np.zeros(len(rects)), iterations=0,
                         converged=True)


def reassignment_changes(env: Environment, uavs, field: DensityField, beta,
                         b_list, n_users, part: CellPartition) -> int:
    """Points that would switch owner after recomputing masses and load
    terms from the partition's cells; a converged partition flips under
    0.1% of them."""
    grid = part.grid
    loss_maps = _loss_maps(env, uavs, grid)
    b_arr = np.asarray(b_list, dtype=float)
    fw = field.values(grid.x, grid.y) * grid.cell_area
    masses = _masses(part.owner, fw, n_users, len(uavs))
    integrals = _loss_integrals(part.owner, fw, loss_maps, len(uavs))
    load = _load_factor(masses, beta, b_arr)
    marginal = n_users * _load_factor_deriv(masses, beta, b_arr) * integrals
    compare = load[:, None] * loss_maps + marginal[:, None]
    fresh = np.argmin(compare, axis=0)
    return int(np.count_nonzero(fresh != part.owner))


def write_partition_csv(path, grid: Grid, owner, field: DensityField):
    """Owner map as CSV with columns x, y, owner, density."""
    dens = field.values(grid.x, grid.y)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x,y,owner,density\n")
        for i in range(grid.n_points):
            fh.write(f"{float(grid.x[i])!r},{float(grid.y[i])!r},"
                     f"{int(owner[i])},{float(dens[i])!r}\n")
