"""Top-level solvers: total-power evaluation, the alternating
placement/association loop, and the altitude and density sweeps.

Every routine is deterministic: identical scenarios and options produce
bit-identical reports. All watt outputs are exactly linear in the noise
power, so ratios, orderings and argmins are noise-calibration-free.
"""

import itertools
import json
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .density import DensityField, Grid, TRUNCATED_GAUSSIAN
from .errors import DomainError, EmptyCell, NoConvergence
from .model import Environment, Scenario
from .partition import (CellPartition, ot_partition, rect_partition,
                        voronoi_partition)
from .placement import (BRUTE_FORCE, CENTROID, NEWTON_RAPHSON,
                        brute_force_location, centroid_location,
                        newton_raphson_location)

ALTITUDE_MIN = 100.0
ALTITUDE_MAX = 2000.0

# A half-step of the alternating loop is reverted if it raises total power
# by more than this relative amount, which keeps trajectories monotone.
MONOTONE_GUARD = 1e-6

METHOD_VORONOI = "voronoi"
METHOD_OT = "ot"
METHOD_LOCATION = "location"
METHOD_COMBINED = "combined"
SWEEP_METHODS = (METHOD_VORONOI, METHOD_OT, METHOD_LOCATION, METHOD_COMBINED)


@dataclass(frozen=True)
class PowerReport:
    per_uav_power: tuple
    total_power: float
    masses: tuple
    iterations: int
    trajectory: tuple
    converged: bool


@dataclass(frozen=True)
class SweepResult:
    """One row per sweep point: axis value, total and per-UAV watts,
    masses and solver iterations."""

    axis_name: str
    axis_values: tuple
    total_power: tuple
    per_uav_power: tuple
    masses: tuple
    iterations: tuple
    converged: tuple

    @property
    def argmin_index(self):
        return min(range(len(self.total_power)), key=lambda i: self.total_power[i])

    @property
    def argmin_value(self):
        return self.axis_values[self.argmin_index]


@dataclass(frozen=True)
class AlternateOptions:
    max_rounds: int = 20
    tol: float = 1e-4
    placement_method: str = NEWTON_RAPHSON


def _per_uav_power(env, uavs, part, field, beta, b_list, n_users):
    """Per-UAV mean transmit power (W) with masses taken from the partition."""
    grid = part.grid
    fw = field.values(grid.x, grid.y) * grid.cell_area
    loads = 2.0 ** (beta * np.asarray(part.masses) / np.asarray(b_list)) - 1.0
    out = []
    for i, u in enumerate(uavs):
        idx = np.nonzero(part.owner == i)[0]
        if idx.size == 0:
            out.append(0.0)
            continue
        integral = kernels.weighted_loss_sum(
            grid.x[idx], grid.y[idx], fw[idx], u.x, u.y, u.h,
            env.c_env, env.d_env, env.eta, env.alpha)
        out.append(float(loads[i]) * env.n0 * integral)
    return out


def total_power(env: Environment, uavs, part: CellPartition,
                field: DensityField, beta, b_list, n_users) -> PowerReport:
    """Total and per-UAV expected transmit power for a given partition."""
    per = _per_uav_power(env, uavs, part, field, beta, b_list, n_users)
    total = float(sum(per))
    return PowerReport(per_uav_power=tuple(per), total_power=total,
                       masses=tuple(float(m) for m in part.masses),
                       iterations=part.iterations,
                       trajectory=((0, total),), converged=part.converged)


def _place_in_cells(env, uavs, part, field, method):
    """One placement half-step: optimal position per UAV in its cell.

    Cells with no mass leave their UAV untouched. A stalled Newton
    iteration falls back to the brute-force search.
    """
    placed = []
    for u in uavs:
        cell = part.cell(u.id)
        try:
            if method == NEWTON_RAPHSON:
                try:
                    r = newton_raphson_location(env, field, cell, u.h)
                except NoConvergence:
                    r = brute_force_location(env, field, cell, u.h)
                x, y = r.x_opt, r.y_opt
            elif method == BRUTE_FORCE:
                r = brute_force_location(env, field, cell, u.h)
                x, y = r.x_opt, r.y_opt
            elif method == CENTROID:
                x, y = centroid_location(field, cell)
            else:
                raise ValueError(f"unknown placement method {method!r}")
        except EmptyCell:
            placed.append(u)
            continue
        placed.append(u.moved_to(x, y))
    return placed


def alternate_optimize(scenario: Scenario, opts: AlternateOptions = None):
    """Alternate optimal placement and optimal association to a fixed point.

    Starts from the scenario's subareas as initial cells. Each half-step
    (move the UAVs, then recut the cells) is accepted only if it does not
    raise total power beyond the monotone guard; a worsening half-step is
    reverted and the loop stops. Convergence means the last full round
    improved total power by less than opts.tol relatively. Non-convergence
    is reported through the converged flag, never raised.

    Returns (uavs, partition, report); the report trajectory lists every
    accepted state as (half-step index, total watts).
    """
    opts = opts or AlternateOptions()
    env, field = scenario.env, scenario.density
    beta, n_users = scenario.rate_req, scenario.n_users
    b_list = scenario.bandwidths
    grid = Grid.from_spec(scenario.region, scenario.grid)

    uavs = list(scenario.uavs)
    part = rect_partition(scenario.subareas, field, grid, n_users)
    power = total_power(env, uavs, part, field, beta, b_list, n_users).total_power
    trajectory = [(0, power)]
    step = 0
    converged = False
    rounds = 0
    for rounds in range(1, opts.max_rounds + 1):
        round_start = power

        moved = _place_in_cells(env, uavs, part, field, opts.placement_method)
        p_moved = total_power(env, moved, part, field, beta, b_list,
                              n_users).total_power
        if p_moved > power * (1.0 + MONOTONE_GUARD):
            converged = True
            break
        uavs, power, step = moved, p_moved, step + 1
        trajectory.append((step, power))

        recut = ot_partition(env, uavs, field, beta, b_list, n_users, grid)
        p_recut = total_power(env, uavs, recut, field, beta, b_list,
                              n_users).total_power
        if p_recut > power * (1.0 + MONOTONE_GUARD):
            converged = True
            break
        part, power, step = recut, p_recut, step + 1
        trajectory.append((step, power))

        if (round_start - power) <= opts.tol * round_start:
            converged = True
            break

    report = PowerReport(
        per_uav_power=tuple(_per_uav_power(env, uavs, part, field, beta,
                                           b_list, n_users)),
        total_power=power,
        masses=tuple(float(m) for m in part.masses),
        iterations=rounds,
        trajectory=tuple(trajectory),
        converged=converged,
    )
    return uavs, part, report


def _partition_for(env, uavs, field, beta, b_list, n_users, grid, association):
    if association == METHOD_OT:
        return ot_partition(env, uavs, field, beta, b_list, n_users, grid)
    if association == METHOD_VORONOI:
        return voronoi_partition(uavs, field, grid, n_users)
    raise ValueError(f"unknown association {association!r}")


def altitude_sweep(scenario: Scenario, h_values, mode="joint_equal",
                   association=METHOD_OT) -> SweepResult:
    """Total power versus altitude.

    joint_equal moves every UAV through each common altitude against the
    cells solved once at the scenario's own state, so the per-UAV curves
    isolate the channel-altitude trade-off for a fixed user split.
    per_uav_grid scans the full Cartesian altitude grid, re-solving the
    association at every combination; it is exponential in the UAV count.
    """
    h_values = [float(h) for h in h_values]
    for h in h_values:
        if not (ALTITUDE_MIN <= h <= ALTITUDE_MAX):
            raise DomainError(
                f"altitude {h} outside [{ALTITUDE_MIN}, {ALTITUDE_MAX}]")
    env, field = scenario.env, scenario.density
    beta, n_users = scenario.rate_req, scenario.n_users
    b_list = scenario.bandwidths
    grid = Grid.from_spec(scenario.region, scenario.grid)

    if mode == "joint_equal":
        axis = [h for h in h_values]
        combos = [[h] * scenario.n_uavs for h in h_values]
        held = _partition_for(env, list(scenario.uavs), field, beta, b_list,
                              n_users, grid, association)
    elif mode == "per_uav_grid":
        combos = [list(c) for c in
                  itertools.product(h_values, repeat=scenario.n_uavs)]
        axis = [tuple(c) for c in combos]
        held = None
    else:
        raise ValueError(f"unknown sweep mode {mode!r}")

    totals, per_uav, masses, iters, conv = [], [], [], [], []
    for hs in combos:
        uavs = [u.at_altitude(h) for u, h in zip(scenario.uavs, hs)]
        part = held if held is not None else _partition_for(
            env, uavs, field, beta, b_list, n_users, grid, association)
        rep = total_power(env, uavs, part, field, beta, b_list, n_users)
        totals.append(rep.total_power)
        per_uav.append(rep.per_uav_power)
        masses.append(rep.masses)
        iters.append(part.iterations)
        conv.append(part.converged)
    name = "h" if mode == "joint_equal" else "h_per_uav"
    return SweepResult(axis_name=name, axis_values=tuple(axis),
                       total_power=tuple(totals), per_uav_power=tuple(per_uav),
                       masses=tuple(masses), iterations=tuple(iters),
                       converged=tuple(conv))


def _with_density(scenario: Scenario, rho) -> Scenario:
    """Scenario copy with hotspot spread set to 1/rho in both directions."""
    if scenario.density.kind != TRUNCATED_GAUSSIAN:
        raise ValueError("density sweep needs a truncated-gaussian scenario")
    grid = Grid.from_spec(scenario.region, scenario.grid)
    sigma = 1.0 / float(rho)
    field = DensityField.truncated_gaussian(
        scenario.region, scenario.density.mu_x, scenario.density.mu_y,
        sigma, sigma, grid)
    return replace(scenario, density=field)


def evaluate_method(scenario: Scenario, method: str) -> PowerReport:
    """Power of one deployment strategy on the scenario as given.

    voronoi: fixed UAVs, nearest-UAV cells. ot: fixed UAVs, optimal cells.
    location: UAVs placed optimally in their subareas, nearest-UAV cells.
    combined: the full alternating optimization.
    """
    env, field = scenario.env, scenario.density
    beta, n_users = scenario.rate_req, scenario.n_users
    b_list = scenario.bandwidths
    grid = Grid.from_spec(scenario.region, scenario.grid)
    if method == METHOD_COMBINED:
        _, _, rep = alternate_optimize(scenario)
        return rep
    if method == METHOD_LOCATION:
        start = rect_partition(scenario.subareas, field, grid, n_users)
        uavs = _place_in_cells(env, list(scenario.uavs), start, field,
                               NEWTON_RAPHSON)
        part = voronoi_partition(uavs, field, grid, n_users)
        return total_power(env, uavs, part, field, beta, b_list, n_users)
    part = _partition_for(env, list(scenario.uavs), field, beta, b_list,
                          n_users, grid, method)
    return total_power(env, list(scenario.uavs), part, field, beta, b_list,
                       n_users)


def density_sweep(scenario: Scenario, rho_values, methods):
    """Rows of (rho, method, PowerReport) over a hotspot-density sweep."""
    for m in methods:
        if m not in SWEEP_METHODS:
            raise ValueError(f"unknown method {m!r}; choose from {SWEEP_METHODS}")
    rows = []
    for rho in rho_values:
        if not rho > 0:
            raise ValueError("rho values must be positive")
        s = _with_density(scenario, rho)
        for method in methods:
            rows.append((float(rho), method, evaluate_method(s, method)))
    return rows


def _fmt(v):
    return repr(float(v))


def write_density_csv(path, rows, n_uavs):
    header = (["rho", "method", "total_w"]
              + [f"p{i}_w" for i in range(n_uavs)]
              + [f"m{i}" for i in range(n_uavs)] + ["iterations"])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for rho, method, rep in rows:
            cells = ([_fmt(rho), method, _fmt(rep.total_power)]
                     + [_fmt(p) for p in rep.per_uav_power]
                     + [_fmt(m) for m in rep.masses]
                     + [str(rep.iterations)])
            fh.write(",".join(cells) + "\n")


def write_sweep_csv(path, sweep: SweepResult, n_uavs):
    multi = sweep.axis_name == "h_per_uav"
    axis_cols = [f"h{i}" for i in range(n_uavs)] if multi else [sweep.axis_name]
    header = (axis_cols + ["total_w"] + [f"p{i}_w" for i in range(n_uavs)]
              + [f"m{i}" for i in range(n_uavs)] + ["iterations"])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for j, ax in enumerate(sweep.axis_values):
            axis_cells = [_fmt(a) for a in ax] if multi else [_fmt(ax)]
            cells = (axis_cells + [_fmt(sweep.total_power[j])]
                     + [_fmt(p) for p in sweep.per_uav_power[j]]
                     + [_fmt(m) for m in sweep.masses[j]]
                     + [str(sweep.iterations[j])])
            fh.write(",".join(cells) + "\n")


def report_to_dict(rep: PowerReport, uavs=None):
    doc = {
        "total_power_w": rep.total_power,
        "per_uav_power_w": list(rep.per_uav_power),
        "masses": list(rep.masses),
        "iterations": rep.iterations,
        "converged": rep.converged,
        "trajectory": [[step, value] for step, value in rep.trajectory],
    }
    if uavs is not None:
        doc["uavs"] = [{"x": u.x, "y": u.y, "h": u.h, "bandwidth": u.bandwidth}
                       for u in uavs]
    return doc


def write_report_json(path, rep: PowerReport, uavs=None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report_to_dict(rep, uavs), fh, indent=2)
        fh.write("\n")
