"""Command-line front end.

Subcommands: solve, sweep-altitude, sweep-density, compare, partition-dump.
Exit codes: 0 success, 1 validation/usage error, 2 solver non-convergence
(results are still written with converged=false).

Ranges use lo:hi:count with inclusive endpoints. --set KEY=VALUE applies
dotted-path overrides onto the scenario document before validation; unknown
keys are rejected. The bundled fixture is used when --scenario names a
non-existent path equal to 'paper' or 'paper.json'.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import optimizer
from .data import paper_scenario_path
from .density import Grid
from .errors import DomainError, InvalidScenario, OutOfRegion, UavcellError
from .model import scenario_from_dict, scenario_to_dict
from .optimizer import (METHOD_OT, METHOD_VORONOI, SWEEP_METHODS,
                        alternate_optimize, altitude_sweep, density_sweep,
                        evaluate_method, write_density_csv, write_sweep_csv)
from .partition import ot_partition, voronoi_partition, write_partition_csv

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NO_CONVERGENCE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _parse_range(text):
    """lo:hi:count with inclusive endpoints."""
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidScenario(f"range {text!r} is not of the form lo:hi:count")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise InvalidScenario("range count must be >= 1")
    if count == 1:
        return [lo]
    return list(np.linspace(lo, hi, count))


def _parse_grid(text):
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise InvalidScenario(f"grid {text!r} is not of the form NXxNY")
    return int(parts[0]), int(parts[1])


def _apply_override(doc, key, raw_value):
    """Set a dotted-path key in the scenario document; numeric segments
    index lists. Unknown keys are rejected, not ignored."""
    try:
        value = json.loads(raw_value)
    except json.JSONDecodeError:
        value = raw_value
    node = doc
    segments = key.split(".")
    for depth, seg in enumerate(segments):
        last = depth == len(segments) - 1
        if isinstance(node, list):
            try:
                idx = int(seg)
            except ValueError:
                raise InvalidScenario(f"override {key!r}: {seg!r} is not a list index")
            if not 0 <= idx < len(node):
                raise InvalidScenario(f"override {key!r}: index {idx} out of range")
            if last:
                node[idx] = value
            else:
                node = node[idx]
        elif isinstance(node, dict):
            if seg not in node:
                raise InvalidScenario(f"override {key!r}: unknown key {seg!r}")
            if last:
                node[seg] = value
            else:
                node = node[seg]
        else:
            raise InvalidScenario(f"override {key!r}: {seg!r} is not a container")


def _load_doc(args):
    path = args.scenario
    if not os.path.exists(path) and path in ("paper", "paper.json"):
        path = paper_scenario_path()
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidScenario(f"cannot read scenario: {exc}")
    except json.JSONDecodeError as exc:
        raise InvalidScenario(f"scenario is not valid JSON: {exc}")
    for item in args.set or []:
        if "=" not in item:
            raise InvalidScenario(f"--set {item!r} is not KEY=VALUE")
        key, _, raw = item.partition("=")
        _apply_override(doc, key, raw)
    if args.grid:
        nx, ny = _parse_grid(args.grid)
        if not isinstance(doc.get("grid"), dict):
            raise InvalidScenario("scenario document has no grid section")
        doc["grid"]["nx"] = nx
        doc["grid"]["ny"] = ny
    return doc


def _cmd_solve(args):
    doc = _load_doc(args)
    scenario = scenario_from_dict(doc)
    if args.echo_scenario:
        text = json.dumps(scenario_to_dict(scenario), indent=2) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    uavs, part, report = alternate_optimize(scenario)
    text = json.dumps(optimizer.report_to_dict(report, uavs), indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.partition_out:
        write_partition_csv(args.partition_out, part.grid, part.owner,
                            scenario.density)
    return EXIT_OK if report.converged else EXIT_NO_CONVERGENCE


def _cmd_sweep_altitude(args):
    doc = _load_doc(args)
    scenario = scenario_from_dict(doc)
    mode = args.mode.replace("-", "_")
    sweep = altitude_sweep(scenario, _parse_range(args.h), mode=mode,
                           association=args.association)
    out = args.out or "sweep_altitude.csv"
    write_sweep_csv(out, sweep, scenario.n_uavs)
    return EXIT_OK if all(sweep.converged) else EXIT_NO_CONVERGENCE


def _cmd_sweep_density(args):
    doc = _load_doc(args)
    scenario = scenario_from_dict(doc)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    rows = density_sweep(scenario, _parse_range(args.rho), methods)
    out = args.out or "sweep_density.csv"
    write_density_csv(out, rows, scenario.n_uavs)
    return EXIT_OK if all(rep.converged for _, _, rep in rows) \
        else EXIT_NO_CONVERGENCE


def _cmd_compare(args):
    doc = _load_doc(args)
    scenario = scenario_from_dict(doc)
    rows = [(method, evaluate_method(scenario, method))
            for method in SWEEP_METHODS]
    lines = ["method,total_w"
             + "".join(f",p{i}_w" for i in range(scenario.n_uavs))
             + "".join(f",m{i}" for i in range(scenario.n_uavs))
             + ",iterations"]
    for method, rep in rows:
        lines.append(",".join(
            [method, repr(rep.total_power)]
            + [repr(p) for p in rep.per_uav_power]
            + [repr(m) for m in rep.masses]
            + [str(rep.iterations)]))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(rep.converged for _, rep in rows) \
        else EXIT_NO_CONVERGENCE


def _cmd_partition_dump(args):
    doc = _load_doc(args)
    scenario = scenario_from_dict(doc)
    grid = Grid.from_spec(scenario.region, scenario.grid)
    if args.association == METHOD_VORONOI:
        part = voronoi_partition(list(scenario.uavs), scenario.density, grid,
                                 scenario.n_users)
    else:
        part = ot_partition(scenario.env, list(scenario.uavs),
                            scenario.density, scenario.rate_req,
                            scenario.bandwidths, scenario.n_users, grid)
    out = args.out or "partition.csv"
    write_partition_csv(out, grid, part.owner, scenario.density)
    return EXIT_OK if part.converged else EXIT_NO_CONVERGENCE


def build_parser():
    parser = _Parser(prog="uavcell",
                     description="Power-minimizing UAV base-station "
                                 "deployment experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scenario", required=True,
                       help="scenario JSON path ('paper' for the bundled one)")
        p.add_argument("--out", help="output file path")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a scenario key (repeatable)")
        p.add_argument("--grid", help="override the lattice, e.g. 200x100")
        p.add_argument("--seedless", action="store_true",
                       help="reserved; all computation is deterministic")

    p = sub.add_parser("solve", help="run the combined optimization")
    common(p)
    p.add_argument("--echo-scenario", action="store_true",
                   help="write the validated scenario back out and exit")
    p.add_argument("--partition-out", help="also dump the final cells as CSV")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("sweep-altitude", help="total power vs altitude")
    common(p)
    p.add_argument("--h", required=True, metavar="LO:HI:COUNT")
    p.add_argument("--mode", default="joint-equal",
                   choices=["joint-equal", "per-uav-grid"])
    p.add_argument("--association", default=METHOD_OT,
                   choices=[METHOD_OT, METHOD_VORONOI])
    p.set_defaults(fn=_cmd_sweep_altitude)

    p = sub.add_parser("sweep-density", help="total power vs hotspot density")
    common(p)
    p.add_argument("--rho", required=True, metavar="LO:HI:COUNT")
    p.add_argument("--methods", default="voronoi,ot",
                   help=f"comma list from {', '.join(SWEEP_METHODS)}")
    p.set_defaults(fn=_cmd_sweep_density)

    p = sub.add_parser("compare", help="all four methods on one scenario")
    common(p)
    p.set_defaults(fn=_cmd_compare)

    p = sub.add_parser("partition-dump", help="owner-map CSV")
    common(p)
    p.add_argument("--association", default=METHOD_OT,
                   choices=[METHOD_OT, METHOD_VORONOI])
    p.set_defaults(fn=_cmd_partition_dump)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (InvalidScenario, DomainError, OutOfRegion, ValueError) as exc:
        print(f"uavcell: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except UavcellError as exc:
        print(f"uavcell: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
