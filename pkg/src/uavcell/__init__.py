"""Power-minimizing deployment of UAV aerial base stations.

Solvers for the two coupled subproblems -- optimal UAV positions over fixed
coverage cells (facility location) and optimal cells for fixed positions
(load-aware transport) -- plus the alternating loop, altitude/density
sweeps, and a scenario-driven CLI.
"""

from .channel import (LinkGeometry, los_fit_coefficients, los_probability,
                      los_probability_approx, mean_path_loss,
                      min_power_per_user)
from .density import (Cell, DensityField, Grid, density_at, expected_users,
                      integrate)
from .errors import (DomainError, EmptyCell, InvalidScenario, NoConvergence,
                     OutOfRegion, UavcellError)
from .kernels import backend as kernel_backend
from .model import (Environment, GridSpec, Region, Scenario, UavState,
                    load_scenario, save_scenario, scenario_from_dict,
                    scenario_to_dict, validate_scenario)
from .optimizer import (AlternateOptions, PowerReport, SweepResult,
                        alternate_optimize, altitude_sweep, density_sweep,
                        evaluate_method, total_power)
from .partition import (CellPartition, cost_kernel, ot_partition,
                        rect_partition, t_term, voronoi_partition,
                        write_partition_csv)
from .placement import (PlacementResult, brute_force_location,
                        centroid_location, expected_power_over_cell,
                        newton_raphson_location)

__version__ = "0.1.0"

__all__ = [
    "AlternateOptions", "Cell", "CellPartition", "DensityField", "DomainError",
    "EmptyCell", "Environment", "Grid", "GridSpec", "InvalidScenario",
    "LinkGeometry", "NoConvergence", "OutOfRegion", "PlacementResult",
    "PowerReport", "Region", "Scenario", "SweepResult", "UavState",
    "UavcellError", "alternate_optimize", "altitude_sweep",
    "brute_force_location", "centroid_location", "cost_kernel", "density_at",
    "density_sweep", "evaluate_method", "expected_power_over_cell",
    "expected_users", "integrate", "kernel_backend", "load_scenario",
    "los_fit_coefficients", "los_probability", "los_probability_approx",
    "mean_path_loss", "min_power_per_user", "newton_raphson_location",
    "ot_partition", "rect_partition", "save_scenario", "scenario_from_dict",
    "scenario_to_dict", "t_term", "total_power", "validate_scenario",
    "voronoi_partition", "write_partition_csv",
]
