"""Command line entry point.

Exit status: 0 success, 1 input/usage error, 3 no BS-user route exists.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .experiments import (
    DEFAULT_RANDOM_SEEDS,
    SWEEP_PARAMS,
    SolutionMismatch,
    cmd_evaluate,
    cmd_route,
    cmd_sweep,
    parse_values,
    solution_from_json,
    solution_to_json,
    write_csv,
)
from .scenario import ScenarioError, parse_scenario

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 3

log = logging.getLogger("irsroute")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.add_argument("--k", type=int, default=None, help="number of Yen candidate paths")
    p.add_argument("--out", type=Path, default=None,
                   help="CSV destination (default: stdout, summary goes to stderr)")
    p.add_argument("--timing", action="store_true",
                   help="fill the runtime_ms column (makes output non-reproducible)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="irsroute", parents=[common],
                                     description="Multi-IRS multi-path beam routing.")
    sub = parser.add_subparsers(dest="command", required=True)

    r = sub.add_parser("route", parents=[common], help="select paths, beams and power split")
    r.add_argument("scenario", help="scenario YAML file or bundled scene name")
    r.add_argument("--solution-out", type=Path, help="write the routing solution as JSON")
    r.add_argument("--figure", type=Path, help="write a top-view PNG of the selected paths")

    e = sub.add_parser("evaluate", parents=[common],
                       help="composite channel, leakage gap and random-phase baseline")
    e.add_argument("scenario")
    e.add_argument("--solution", type=Path, help="solution JSON from 'route --solution-out'")
    e.add_argument("--n-seeds", type=int, default=DEFAULT_RANDOM_SEEDS,
                   help="random-phase draws (default %(default)s)")

    s = sub.add_parser("sweep", parents=[common], help="sweep K, M0 or rho")
    s.add_argument("scenario")
    s.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    s.add_argument("--values", required=True, help="comma-separated values, e.g. 1,2,3")
    s.add_argument("--n-seeds", type=int, default=DEFAULT_RANDOM_SEEDS)
    s.add_argument("--figure", type=Path, help="write a PNG of power versus the swept value")
    return parser


def _emit(rows, out: Path | None, summary: list[str]):
    text = write_csv(rows)
    if out is None:
        sys.stdout.write(text)
        for line in summary:
            print(line, file=sys.stderr)
    else:
        out.write_text(text)
        for line in summary:
            print(line)


def _summary(sol) -> list[str]:
    if not sol.feasible:
        return ["status: infeasible (no BS-user reflection path)"]
    lines = [f"status: ok  Q={sol.q}"]
    for p, a in zip(sol.paths, sol.alphas):
        lines.append(f"  path {p.label}: |h|^2={p.amplitude ** 2:.6e}  alpha={a:.6f}  "
                     f"bs_beam={p.bs_beam_index}")
    lines.append(f"  gamma_u (unit power) = {sol.gamma_u:.6e}")
    return lines


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        scenario = parse_scenario(args.scenario)
        if args.seed is not None:
            scenario = scenario.replace(seed=args.seed)
        if args.k is not None:
            if args.k < 1:
                raise ValueError("--k must be >= 1")
            scenario = scenario.replace(k_candidates=args.k)

        if args.command == "route":
            sol, row = cmd_route(scenario, timing=args.timing)
            _emit([row], args.out, _summary(sol))
            if args.solution_out:
                args.solution_out.write_text(solution_to_json(scenario, sol))
            if args.figure:
                from .beamrouting import build_los_graph
                from .plotting import plot_scene
                plot_scene(scenario, build_los_graph(scenario), sol, args.figure)
            return EXIT_OK if sol.feasible else EXIT_INFEASIBLE

        if args.command == "evaluate":
            solution = None
            if args.solution:
                solution = solution_from_json(args.solution.read_text(), scenario)
            row = cmd_evaluate(scenario, solution, n_random=args.n_seeds, timing=args.timing)
            _emit([row], args.out, [f"status: {row.status}  gamma_free={row.gamma_free_dbm} dBm  "
                                    f"gamma_dp={row.gamma_dp_dbm} dBm  gap={row.gap_db} dB"])
            return EXIT_OK if row.status == "ok" else EXIT_INFEASIBLE

        rows = cmd_sweep(scenario, args.param, parse_values(args.values), n_random=args.n_seeds,
                         timing=args.timing)
        _emit(rows, args.out, [f"{args.param}={r.value}: {r.status} Q={r.q} "
                               f"gamma={r.gamma_free_dbm} dBm" for r in rows])
        if args.figure:
            from .plotting import plot_sweep
            plot_sweep(rows, args.param, args.figure, title=scenario.name)
        return EXIT_OK
    except (ScenarioError, SolutionMismatch, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
