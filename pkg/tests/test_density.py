import numpy as np
import pytest

import uavcell
from uavcell import Cell, DensityField, Grid, OutOfRegion, Region
from uavcell.density import density_at, expected_users, integrate


REGION = Region(-500.0, 500.0, -250.0, 250.0)


def hotspot(grid, sigma=100.0, mu=(-100.0, 100.0)):
    return DensityField.truncated_gaussian(REGION, mu[0], mu[1], sigma, sigma,
                                           grid)


def fine_grid_integral(field, rect, weight_fn, factor=10, base=(200, 100)):
    """Independent midpoint quadrature on a (factor x) finer lattice."""
    nx, ny = base[0] * factor, base[1] * factor
    dx = (rect.x_hi - rect.x_lo) / nx
    dy = (rect.y_hi - rect.y_lo) / ny
    xs = rect.x_lo + (np.arange(nx) + 0.5) * dx
    ys = rect.y_lo + (np.arange(ny) + 0.5) * dy
    total = 0.0
    for yv in ys:
        row = field.values(xs, np.full(nx, yv))
        total += float(np.dot(weight_fn(xs, np.full(nx, yv)), row))
    return total * dx * dy


class TestDensityValues:
    def test_uniform_value(self):
        f = DensityField.uniform(REGION)
        assert density_at(f, 0.0, 0.0) == pytest.approx(2e-6, rel=1e-12)
        assert density_at(f, -499.0, 249.0) == pytest.approx(2e-6, rel=1e-12)

    def test_hotspot_mode_is_maximum(self):
        grid = Grid(REGION, 100, 50)
        f = hotspot(grid)
        peak = density_at(f, f.mu_x, f.mu_y)
        assert np.all(f.values(grid.x, grid.y) <= peak)

    def test_nonnegative_everywhere(self):
        grid = Grid(REGION, 100, 50)
        f = hotspot(grid, sigma=30.0)
        assert np.all(f.values(grid.x, grid.y) >= 0.0)

    def test_wide_spread_approaches_uniform(self):
        grid = Grid(REGION, 100, 50)
        wide = hotspot(grid, sigma=100.0 * REGION.width)
        flat = DensityField.uniform(REGION)
        v1 = wide.values(grid.x, grid.y)
        v2 = flat.values(grid.x, grid.y)
        assert np.max(np.abs(v1 - v2) / v2) < 0.01

    def test_out_of_region_raises(self):
        f = DensityField.uniform(REGION)
        with pytest.raises(OutOfRegion):
            density_at(f, 501.0, 0.0)
        with pytest.raises(OutOfRegion):
            density_at(f, np.array([0.0, 0.0]), np.array([0.0, -251.0]))

    def test_bad_sigma_rejected(self):
        grid = Grid(REGION, 20, 10)
        with pytest.raises(ValueError):
            DensityField.truncated_gaussian(REGION, 0, 0, -5.0, 10.0, grid)


class TestIntegrate:
    def test_unit_mass_uniform(self):
        grid = Grid(REGION, 200, 100)
        f = DensityField.uniform(REGION)
        assert integrate(f, grid) == pytest.approx(1.0, abs=1e-6)

    def test_unit_mass_hotspot(self):
        grid = Grid(REGION, 200, 100)
        f = hotspot(grid, sigma=50.0)
        assert integrate(f, grid) == pytest.approx(1.0, abs=1e-6)

    def test_odd_moment_vanishes(self):
        grid = Grid(REGION, 200, 100)
        f = DensityField.uniform(REGION)
        assert integrate(f, grid, weight=lambda x, y: x) == pytest.approx(
            0.0, abs=1e-6)

    def test_first_moment_matches_fine_grid(self):
        grid = Grid(REGION, 200, 100)
        f = hotspot(grid, sigma=100.0, mu=(-100.0, 100.0))
        coarse = integrate(f, grid, weight=lambda x, y: x)
        fine = fine_grid_integral(f, REGION, lambda x, y: x)
        assert coarse == pytest.approx(fine, rel=1e-3)
        assert coarse == pytest.approx(-100.0, abs=1.0)

    def test_uniform_cell_fraction_exact(self):
        grid = Grid(REGION, 40, 20)
        f = DensityField.uniform(REGION)
        cell = Cell(grid, grid.indices_in(Region(-500.0, 0.0, -250.0, 0.0)))
        assert integrate(f, cell) == pytest.approx(cell.area / REGION.area,
                                                   rel=1e-12)

    def test_array_weight(self):
        grid = Grid(REGION, 40, 20)
        f = DensityField.uniform(REGION)
        cell = grid.full_cell()
        w = np.ones(cell.n_points)
        assert integrate(f, cell, weight=w) == pytest.approx(1.0, rel=1e-12)

    def test_refinement_second_order(self):
        # halving the pitch shrinks the change in a smooth integral
        rects = [Grid(REGION, n, n // 2) for n in (50, 100, 200)]
        f = hotspot(rects[2], sigma=120.0)
        vals = [integrate(f, g, weight=lambda x, y: x * x) for g in rects]
        change1 = abs(vals[1] - vals[0])
        change2 = abs(vals[2] - vals[1])
        assert change2 < 0.5 * change1


class TestExpectedUsers:
    def test_full_region_mass(self):
        grid = Grid(REGION, 200, 100)
        f = hotspot(grid)
        assert expected_users(f, grid.full_cell(), 200) == pytest.approx(
            200.0, abs=2e-4)

    def test_symmetric_split_uniform(self):
        grid = Grid(REGION, 200, 100)
        f = DensityField.uniform(REGION)
        left = Cell(grid, grid.indices_in(Region(-500.0, 0.0, -250.0, 250.0)))
        right = Cell(grid, np.setdiff1d(np.arange(grid.n_points), left.indices))
        assert expected_users(f, left, 200) == pytest.approx(100.0, rel=1e-12)
        assert expected_users(f, right, 200) == pytest.approx(100.0, rel=1e-12)

    def test_hotspot_side_heavier(self):
        grid = Grid(REGION, 200, 100)
        f = hotspot(grid, sigma=100.0)  # centered at (-100, 100)
        left = Cell(grid, grid.indices_in(Region(-500.0, 0.0, -250.0, 250.0)))
        right = Cell(grid, np.setdiff1d(np.arange(grid.n_points), left.indices))
        assert (expected_users(f, left, 200) > expected_users(f, right, 200))

    def test_empty_cell(self):
        grid = Grid(REGION, 40, 20)
        f = DensityField.uniform(REGION)
        assert expected_users(f, Cell(grid, np.array([], dtype=np.int64)),
                              200) == 0.0

    def test_partition_additivity(self, rng):
        grid = Grid(REGION, 80, 40)
        f = hotspot(grid, sigma=60.0)
        owner = rng.integers(0, 5, grid.n_points)
        total = sum(
            expected_users(f, Cell(grid, np.nonzero(owner == i)[0]), 200)
            for i in range(5))
        assert total == pytest.approx(200.0, abs=1e-6 * 200)


class TestLattice:
    def test_cells_cover_grid(self):
        grid = Grid(REGION, 30, 20)
        left = grid.indices_in(Region(-500.0, 0.0, -250.0, 250.0))
        right = grid.indices_in(Region(0.0, 500.0, -250.0, 250.0))
        union = np.union1d(left, right)
        assert np.array_equal(union, np.arange(grid.n_points))

    def test_cell_weights_positive_unique(self):
        grid = Grid(REGION, 30, 20)
        cell = grid.full_cell()
        assert np.all(cell.weights > 0)
        assert len(np.unique(cell.indices)) == cell.n_points

    def test_point_count_and_area(self):
        grid = Grid(REGION, 25, 10)
        assert grid.n_points == 250
        assert grid.cell_area * grid.n_points == pytest.approx(REGION.area,
                                                               rel=1e-12)
