"""Core domain types, scenario configuration and validation.

Scenario files are flat JSON documents::

    {
      "region":   {"x_lo": -500, "x_hi": 500, "y_lo": -250, "y_hi": 250},
      "env":      {"c": 11.9, "d": 0.13, "eta": 100, "alpha": 2, "n0": 1e-13},
      "uavs":     [{"x": -250, "y": 0, "h": 200, "bandwidth": 5e7}, ...],
      "density":  {"kind": "uniform"} |
                  {"kind": "truncated_gaussian",
                   "params": {"mu_x": -100, "mu_y": 100,
                              "sigma_x": 100, "sigma_y": 100}},
      "n_users":  200,
      "rate_req": 1e6,
      "grid":     {"nx": 200, "ny": 100},
      "subareas": [{"x_lo": ..., "x_hi": ..., "y_lo": ..., "y_hi": ...}, ...]
    }

Subareas are the per-UAV starting rectangles; they must tile the region
(shared boundaries allowed). All types are immutable after validation and
safe to share across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

from .errors import InvalidScenario

if TYPE_CHECKING:
    from .density import DensityField

AREA_TILE_RTOL = 1e-9


@dataclass(frozen=True)
class Environment:
    """Propagation constants: sight-probability S-curve, excess NLOS
    attenuation, path-loss exponent and noise power (watts)."""

    c_env: float
    d_env: float
    eta: float
    alpha: float
    n0: float

    def check(self):
        if not self.c_env > 0:
            raise InvalidScenario("environment constant c must be > 0")
        if not self.d_env >= 0:
            raise InvalidScenario("environment constant d must be >= 0")
        if not self.eta >= 1:
            raise InvalidScenario("NLOS attenuation factor eta must be >= 1")
        if not self.alpha > 0:
            raise InvalidScenario("path-loss exponent alpha must be > 0")
        if not self.n0 > 0:
            raise InvalidScenario("noise power n0 must be > 0")


@dataclass(frozen=True)
class Region:
    """Axis-aligned rectangle in meters."""

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    @property
    def width(self):
        return self.x_hi - self.x_lo

    @property
    def height(self):
        return self.y_hi - self.y_lo

    @property
    def area(self):
        return self.width * self.height

    def contains(self, x, y):
        return (self.x_lo <= x <= self.x_hi) and (self.y_lo <= y <= self.y_hi)

    def check(self, what="region"):
        if not self.x_lo < self.x_hi:
            raise InvalidScenario(f"{what}: x_lo must be < x_hi")
        if not self.y_lo < self.y_hi:
            raise InvalidScenario(f"{what}: y_lo must be < y_hi")


@dataclass(frozen=True)
class UavState:
    """One UAV: horizontal position, altitude and total bandwidth (Hz)."""

    id: int
    x: float
    y: float
    h: float
    bandwidth: float

    def check(self):
        if not self.h > 0:
            raise InvalidScenario(f"uav {self.id}: altitude h must be > 0")
        if not self.bandwidth > 0:
            raise InvalidScenario(f"uav {self.id}: bandwidth must be > 0")

    def moved_to(self, x, y):
        return replace(self, x=x, y=y)

    def at_altitude(self, h):
        return replace(self, h=h)


@dataclass(frozen=True)
class GridSpec:
    """Cell counts of the uniform quadrature/assignment lattice."""

    nx: int
    ny: int

    def check(self):
        if not self.nx >= 2:
            raise InvalidScenario("grid nx must be >= 2")
        if not self.ny >= 2:
            raise InvalidScenario("grid ny must be >= 2")


@dataclass(frozen=True)
class Scenario:
    env: Environment
    region: Region
    uavs: tuple
    density: "DensityField"
    n_users: int
    rate_req: float
    grid: GridSpec
    subareas: tuple

    @property
    def n_uavs(self):
        return len(self.uavs)

    @property
    def bandwidths(self):
        return [u.bandwidth for u in self.uavs]


def validate_scenario(s: Scenario) -> Scenario:
    """Check every scenario invariant; return the scenario unchanged.

    Raises InvalidScenario naming the first violated invariant. Validation
    is idempotent: a validated scenario revalidates to the identical value.
    """
    s.env.check()
    s.region.check()
    if len(s.uavs) < 1:
        raise InvalidScenario("at least one uav is required")
    for u in s.uavs:
        u.check()
        if not s.region.contains(u.x, u.y):
            raise InvalidScenario(
                f"uav {u.id}: position ({u.x}, {u.y}) outside region footprint"
            )
    if not s.n_users >= 1:
        raise InvalidScenario("n_users must be >= 1")
    if not s.rate_req >= 0:
        raise InvalidScenario("rate_req must be >= 0")
    s.grid.check()
    if len(s.subareas) != len(s.uavs):
        raise InvalidScenario(
            f"{len(s.subareas)} subareas for {len(s.uavs)} uavs; counts must match"
        )
    for k, sub in enumerate(s.subareas):
        sub.check(what=f"subarea {k}")
        inside = (sub.x_lo >= s.region.x_lo and sub.x_hi <= s.region.x_hi
                  and sub.y_lo >= s.region.y_lo and sub.y_hi <= s.region.y_hi)
        if not inside:
            raise InvalidScenario(f"subarea {k} extends outside the region")
    for a in range(len(s.subareas)):
        for b in range(a + 1, len(s.subareas)):
            if _overlap_area(s.subareas[a], s.subareas[b]) > 0:
                raise InvalidScenario(f"subareas {a} and {b} overlap")
    total = sum(sub.area for sub in s.subareas)
    if abs(total - s.region.area) > AREA_TILE_RTOL * s.region.area:
        raise InvalidScenario("subareas do not tile the region")
    if s.density.region != s.region:
        raise InvalidScenario("density field is defined on a different region")
    return s


def _overlap_area(a: Region, b: Region):
    w = min(a.x_hi, b.x_hi) - max(a.x_lo, b.x_lo)
    h = min(a.y_hi, b.y_hi) - max(a.y_lo, b.y_lo)
    return max(0.0, w) * max(0.0, h)


def scenario_from_dict(doc: dict) -> Scenario:
    """Build and validate a Scenario from a parsed scenario document."""
    from .density import DensityField, Grid

    try:
        region = Region(**{k: float(doc["region"][k])
                           for k in ("x_lo", "x_hi", "y_lo", "y_hi")})
        e = doc["env"]
        env = Environment(c_env=float(e["c"]), d_env=float(e["d"]),
                          eta=float(e["eta"]), alpha=float(e["alpha"]),
                          n0=float(e["n0"]))
        uavs = tuple(
            UavState(id=i, x=float(u["x"]), y=float(u["y"]), h=float(u["h"]),
                     bandwidth=float(u["bandwidth"]))
            for i, u in enumerate(doc["uavs"])
        )
        gridspec = GridSpec(nx=int(doc["grid"]["nx"]), ny=int(doc["grid"]["ny"]))
        subareas = tuple(
            Region(**{k: float(r[k]) for k in ("x_lo", "x_hi", "y_lo", "y_hi")})
            for r in doc["subareas"]
        )
        n_users = int(doc["n_users"])
        rate_req = float(doc["rate_req"])
        dens = doc["density"]
        kind = dens["kind"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidScenario(f"malformed scenario document: {exc}") from exc

    region.check()
    gridspec.check()
    if kind == "uniform":
        field = DensityField.uniform(region)
    elif kind == "truncated_gaussian":
        try:
            p = dens["params"]
            mu_x, mu_y = float(p["mu_x"]), float(p["mu_y"])
            sigma_x, sigma_y = float(p["sigma_x"]), float(p["sigma_y"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidScenario(f"malformed density params: {exc}") from exc
        grid = Grid(region, gridspec.nx, gridspec.ny)
        field = DensityField.truncated_gaussian(region, mu_x, mu_y,
                                                sigma_x, sigma_y, grid)
    else:
        raise InvalidScenario(f"unknown density kind {kind!r}")

    return validate_scenario(Scenario(env=env, region=region, uavs=uavs,
                                      density=field, n_users=n_users,
                                      rate_req=rate_req, grid=gridspec,
                                      subareas=subareas))


def scenario_to_dict(s: Scenario) -> dict:
    """Inverse of scenario_from_dict (canonical key order)."""
    doc = {
        "region": {"x_lo": s.region.x_lo, "x_hi": s.region.x_hi,
                   "y_lo": s.region.y_lo, "y_hi": s.region.y_hi},
        "env": {"c": s.env.c_env, "d": s.env.d_env, "eta": s.env.eta,
                "alpha": s.env.alpha, "n0": s.env.n0},
        "uavs": [{"x": u.x, "y": u.y, "h": u.h, "bandwidth": u.bandwidth}
                 for u in s.uavs],
        "density": {"kind": s.density.kind},
        "n_users": s.n_users,
        "rate_req": s.rate_req,
        "grid": {"nx": s.grid.nx, "ny": s.grid.ny},
        "subareas": [{"x_lo": r.x_lo, "x_hi": r.x_hi,
                      "y_lo": r.y_lo, "y_hi": r.y_hi} for r in s.subareas],
    }
    if s.density.kind == "truncated_gaussian":
        doc["density"]["params"] = {
            "mu_x": s.density.mu_x, "mu_y": s.density.mu_y,
            "sigma_x": s.density.sigma_x, "sigma_y": s.density.sigma_y,
        }
    return doc


def load_scenario(path) -> Scenario:
    """Load and validate a scenario JSON file."""
    with open(path, encoding="utf-8") as fh:
        return scenario_from_dict(json.load(fh))


def save_scenario(s: Scenario, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(scenario_to_dict(s), fh, indent=2)
        fh.write("\n")
