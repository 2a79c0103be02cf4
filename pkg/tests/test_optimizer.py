import dataclasses
import json

import numpy as np
import pytest

import uavcell
from uavcell import AlternateOptions, DomainError, Grid
from uavcell.optimizer import (alternate_optimize, altitude_sweep,
                               density_sweep, evaluate_method,
                               report_to_dict, total_power, write_density_csv,
                               write_report_json, write_sweep_csv)
from uavcell.partition import voronoi_partition

from conftest import build_scenario


def vor_report(s):
    grid = Grid.from_spec(s.region, s.grid)
    part = voronoi_partition(list(s.uavs), s.density, grid, s.n_users)
    return total_power(s.env, list(s.uavs), part, s.density, s.rate_req,
                       s.bandwidths, s.n_users)


class TestTotalPower:
    def test_zero_rate(self):
        s = build_scenario(rate_req=0.0)
        rep = vor_report(s)
        assert rep.total_power == 0.0
        assert all(p == 0.0 for p in rep.per_uav_power)

    def test_linear_in_noise(self):
        s = build_scenario(kind="truncated_gaussian")
        s2 = dataclasses.replace(
            s, env=dataclasses.replace(s.env, n0=s.env.n0 * 2.0))
        assert vor_report(s2).total_power == pytest.approx(
            2.0 * vor_report(s).total_power, rel=1e-15)

    def test_total_is_sum_of_parts(self):
        s = build_scenario(kind="truncated_gaussian", sigma=(60.0, 60.0))
        rep = vor_report(s)
        assert rep.total_power == pytest.approx(sum(rep.per_uav_power),
                                                rel=1e-9)

    def test_masses_come_from_partition(self):
        s = build_scenario(kind="uniform")
        rep = vor_report(s)
        assert rep.masses[0] == pytest.approx(100.0, rel=1e-12)


class TestAlternate:
    def test_symmetric_scenario_fixed_point(self):
        s = build_scenario(kind="uniform", nx=100, ny=50)
        uavs, part, rep = alternate_optimize(s)
        assert rep.converged
        assert rep.iterations <= 3
        # symmetric optimum: subarea centroids and the boundary on the axis
        assert uavs[0].x == pytest.approx(-250.0, abs=1.0)
        assert uavs[1].x == pytest.approx(250.0, abs=1.0)
        assert uavs[0].y == pytest.approx(0.0, abs=1.0)
        assert rep.masses[0] == pytest.approx(100.0, abs=0.2)

    def test_monotone_trajectory(self, paper):
        _, _, rep = alternate_optimize(paper)
        values = [p for _, p in rep.trajectory]
        for prev, cur in zip(values, values[1:]):
            assert cur <= prev * (1 + 1e-6)

    def test_combined_beats_single_levers(self, paper):
        combined = evaluate_method(paper, "combined").total_power
        location = evaluate_method(paper, "location").total_power
        association = evaluate_method(paper, "ot").total_power
        voronoi = evaluate_method(paper, "voronoi").total_power
        assert combined <= location
        assert combined <= association
        assert location <= voronoi * (1 + 1e-3)

    def test_deterministic(self):
        s = build_scenario(kind="truncated_gaussian", sigma=(80.0, 80.0),
                           nx=80, ny=40)
        a = alternate_optimize(s)
        b = alternate_optimize(s)
        assert a[2] == b[2]
        assert [(u.x, u.y, u.h) for u in a[0]] == [(u.x, u.y, u.h) for u in b[0]]
        assert np.array_equal(a[1].owner, b[1].owner)

    def test_brute_force_placement_option(self):
        s = build_scenario(kind="truncated_gaussian", sigma=(60.0, 60.0),
                           nx=60, ny=30)
        _, _, rep = alternate_optimize(
            s, AlternateOptions(placement_method="brute-force"))
        assert rep.converged
        base = vor_report(s).total_power
        assert rep.total_power < base


class TestAltitudeSweep:
    def test_domain_checked(self, paper):
        with pytest.raises(DomainError):
            altitude_sweep(paper, [50.0, 200.0])
        with pytest.raises(DomainError):
            altitude_sweep(paper, [200.0, 2100.0])

    def test_zero_rate_gives_zero_curve(self):
        s = build_scenario(rate_req=0.0, nx=40, ny=20)
        sweep = altitude_sweep(s, [200.0, 400.0, 800.0])
        assert all(p == 0.0 for p in sweep.total_power)

    def test_joint_shape_and_argmin(self):
        s = build_scenario(kind="truncated_gaussian", nx=80, ny=40)
        hs = [200.0, 400.0, 800.0, 1600.0]
        sweep = altitude_sweep(s, hs)
        assert sweep.axis_values == tuple(hs)
        assert len(sweep.total_power) == 4
        assert len(sweep.per_uav_power[0]) == 2
        assert sweep.argmin_value == hs[sweep.argmin_index]
        assert min(sweep.total_power) == sweep.total_power[sweep.argmin_index]

    def test_per_uav_grid_is_cartesian(self):
        s = build_scenario(kind="truncated_gaussian", nx=40, ny=20)
        sweep = altitude_sweep(s, [200.0, 400.0, 600.0], mode="per_uav_grid")
        assert len(sweep.axis_values) == 9
        assert sweep.axis_values[0] == (200.0, 200.0)
        assert sweep.axis_values[-1] == (600.0, 600.0)

    def test_voronoi_association_mode(self):
        s = build_scenario(kind="uniform", nx=40, ny=20)
        sweep = altitude_sweep(s, [200.0, 400.0], association="voronoi")
        assert all(it == 0 for it in sweep.iterations)


class TestDensitySweep:
    def test_rows_and_ordering(self, paper):
        rows = density_sweep(paper, [0.01, 0.02], ["voronoi", "ot"])
        assert len(rows) == 4
        assert [r[0] for r in rows] == [0.01, 0.01, 0.02, 0.02]
        for rho in (0.01, 0.02):
            by_method = {m: rep for r, m, rep in rows if r == rho}
            assert (by_method["ot"].total_power
                    <= by_method["voronoi"].total_power * (1 + 1e-3))

    def test_unknown_method_rejected(self, paper):
        with pytest.raises(ValueError, match="unknown method"):
            density_sweep(paper, [0.01], ["voronoi", "lloyd"])

    def test_uniform_scenario_rejected(self):
        s = build_scenario(kind="uniform")
        with pytest.raises(ValueError, match="truncated-gaussian"):
            density_sweep(s, [0.01], ["voronoi"])

    def test_nonpositive_rho_rejected(self, paper):
        with pytest.raises(ValueError, match="positive"):
            density_sweep(paper, [0.0], ["voronoi"])


class TestExports:
    def test_density_csv(self, tmp_path, paper):
        rows = density_sweep(paper, [0.01, 0.02], ["voronoi", "ot"])
        out = tmp_path / "dens.csv"
        write_density_csv(out, rows, paper.n_uavs)
        lines = out.read_text().splitlines()
        assert lines[0] == "rho,method,total_w,p0_w,p1_w,m0,m1,iterations"
        assert len(lines) == 5
        assert lines[1].startswith("0.01,voronoi,")

    def test_sweep_csv_joint(self, tmp_path):
        s = build_scenario(kind="truncated_gaussian", nx=40, ny=20)
        sweep = altitude_sweep(s, [200.0, 400.0])
        out = tmp_path / "alt.csv"
        write_sweep_csv(out, sweep, 2)
        lines = out.read_text().splitlines()
        assert lines[0] == "h,total_w,p0_w,p1_w,m0,m1,iterations"
        assert len(lines) == 3

    def test_sweep_csv_per_uav(self, tmp_path):
        s = build_scenario(kind="truncated_gaussian", nx=40, ny=20)
        sweep = altitude_sweep(s, [200.0, 400.0], mode="per_uav_grid")
        out = tmp_path / "alt2.csv"
        write_sweep_csv(out, sweep, 2)
        lines = out.read_text().splitlines()
        assert lines[0].startswith("h0,h1,")
        assert len(lines) == 5

    def test_report_json(self, tmp_path, paper):
        uavs, _, rep = alternate_optimize(paper)
        out = tmp_path / "rep.json"
        write_report_json(out, rep, uavs)
        doc = json.loads(out.read_text())
        assert doc["total_power_w"] == rep.total_power
        assert doc["converged"] is True
        assert len(doc["per_uav_power_w"]) == 2
        assert len(doc["uavs"]) == 2
        assert doc == report_to_dict(rep, uavs)
