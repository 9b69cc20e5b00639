"""Command-line front end: solve, sweep, simulate, and grid subcommands.

Exit codes: 0 success, 1 configuration problem, 2 the closed form does not
exist at the requested parameters, 3 simulation failed its consistency check
against the analytic profit.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Sequence

from specres.config import ConfigError, ExperimentConfig, load_config
from specres.core import (
    FEASIBILITY_EPS,
    ContractMenu,
    constraint_slacks,
    operator_profit,
)
from specres.grid import channel_cost, generate_grid, grid_to_text, time_average_cost
from specres.sim import simulate
from specres.solver import (
    ExistenceViolated,
    SolveResult,
    SolverError,
    default_r_max,
    solve,
)
from specres.sweeps import format_float, run_sweep, write_csv
from specres.plotting import write_line_chart_svg

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFICATION = 3

_SWEEP_AXIS_LABELS = {
    "pi_c": "proportion of MC applications",
    "lambda_c": "MC utility intensity (1/MU)",
    "kappa": "average channel cost (MU)",
}


def _fmt(value: float) -> str:
    return format_float(value)


def _print_kv(key: str, value: str) -> None:
    print(f"{key:<16} {value}")


def _print_solve_result(cfg: ExperimentConfig, result: SolveResult) -> None:
    params, menu = cfg.params, result.menu
    _print_kv("mode", result.mode.value)
    _print_kv(
        "params",
        f"lambda_c={_fmt(params.lambda_c)} lambda_n={_fmt(params.lambda_n)} "
        f"pi_c={_fmt(params.pi_c)} kappa={_fmt(params.kappa)}",
    )
    _print_kv("p_c", _fmt(menu.p_c))
    _print_kv("r_c", _fmt(menu.r_c))
    _print_kv("p_n", _fmt(menu.p_n))
    _print_kv("r_n", _fmt(menu.r_n))
    _print_kv("profit", _fmt(result.profit))
    slacks = result.constraints
    _print_kv("ir_c_slack", _fmt(slacks.ir_c_slack))
    _print_kv("ir_n_slack", _fmt(slacks.ir_n_slack))
    _print_kv("ic_cn_slack", _fmt(slacks.ic_cn_slack))
    _print_kv("ic_nc_slack", _fmt(slacks.ic_nc_slack))
    _print_kv(
        "r_n_candidates",
        ", ".join(_fmt(r) for r in result.r_n_candidates) or "(none)",
    )
    _print_kv("boundary_flag", "true" if result.boundary_flag else "false")
    _print_kv("existence_ok", "true" if result.existence_ok else "false")
    if result.boundary_flag:
        r_max = cfg.r_max if cfg.r_max is not None else default_r_max(params)
        print(
            f"warning: relaxed objective is higher at the search bound "
            f"r_max={_fmt(r_max)} than at any interior candidate; pricing the "
            f"non-MC type out dominates interior screening"
        )
    if not slacks.feasible():
        print(
            f"warning: menu violates a constraint (min slack "
            f"{_fmt(slacks.min_slack())} < -{FEASIBILITY_EPS:g})"
        )


def _solve_record(cfg: ExperimentConfig, result: SolveResult) -> dict:
    return {
        "params": dataclasses.asdict(cfg.params),
        "mode": result.mode.value,
        "menu": dataclasses.asdict(result.menu),
        "profit": result.profit,
        "slacks": dataclasses.asdict(result.constraints),
        "r_n_candidates": list(result.r_n_candidates),
        "boundary_flag": result.boundary_flag,
        "existence_ok": result.existence_ok,
    }


def _write_json(path: str, record: dict) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(record, handle, indent=2)
        handle.write("\n")


def cmd_solve(cfg: ExperimentConfig) -> int:
    result = solve(cfg.params, cfg.mode, cfg.r_max)
    _print_solve_result(cfg, result)
    if cfg.out:
        _write_json(cfg.out, _solve_record(cfg, result))
        print(f"record written to {cfg.out}")
    return EXIT_OK


def cmd_sweep(cfg: ExperimentConfig) -> int:
    if cfg.sweep is None:
        raise ConfigError("sweep requires a [sweep] section (or sweep.* overrides)")
    if cfg.out is None:
        raise ConfigError("sweep requires an output CSV path (--out PATH)")
    rows = run_sweep(cfg.params, cfg.sweep, cfg.mode, cfg.r_max)
    write_csv(rows, cfg.out)
    print(f"{len(rows)} rows written to {cfg.out}")
    if cfg.svg:
        xs = [row.swept_value for row in rows]
        series = [
            ("p_c", [row.p_c for row in rows]),
            ("r_c", [row.r_c for row in rows]),
            ("p_n", [row.p_n for row in rows]),
            ("r_n", [row.r_n for row in rows]),
        ]
        write_line_chart_svg(
            cfg.svg,
            xs,
            series,
            title=f"Optimal menu vs {cfg.sweep.variable} ({cfg.mode.value} mode)",
            x_label=_SWEEP_AXIS_LABELS[cfg.sweep.variable],
            y_label="monetary units",
        )
        print(f"chart written to {cfg.svg}")
    return EXIT_OK


def _apply_menu_override(menu: ContractMenu, override: dict[str, float]) -> ContractMenu:
    if not override:
        return menu
    return dataclasses.replace(menu, **override)


def cmd_simulate(cfg: ExperimentConfig) -> int:
    if cfg.sim is None:
        raise ConfigError("simulate requires a [sim] section (or sim.* overrides)")
    result = solve(cfg.params, cfg.mode, cfg.r_max)
    menu = _apply_menu_override(result.menu, cfg.menu_override)
    analytic = operator_profit(cfg.params, menu)
    report = simulate(cfg.params, menu, cfg.sim)

    _print_kv("mode", result.mode.value)
    _print_kv(
        "menu",
        f"p_c={_fmt(menu.p_c)} r_c={_fmt(menu.r_c)} "
        f"p_n={_fmt(menu.p_n)} r_n={_fmt(menu.r_n)}"
        + (" (overridden)" if cfg.menu_override else ""),
    )
    _print_kv("n_agents", str(cfg.sim.n_agents))
    _print_kv("seed", str(cfg.sim.seed))
    _print_kv("analytic_profit", _fmt(analytic))
    _print_kv("empirical_profit", _fmt(report.empirical_profit))
    _print_kv("std_error", _fmt(report.std_error))
    _print_kv("hold_rate_c", _fmt(report.hold_rate_c))
    _print_kv("hold_rate_n", _fmt(report.hold_rate_n))
    _print_kv("truthful_rate", _fmt(report.truthful_rate))
    _print_kv("opt_out_rate", _fmt(report.opt_out_rate))

    gap = abs(report.empirical_profit - analytic)
    bound = 3.0 * report.std_error
    passed = gap <= bound
    _print_kv(
        "verdict",
        f"{'PASS' if passed else 'FAIL'} (|empirical - analytic| = {_fmt(gap)}, "
        f"3*std_error = {_fmt(bound)})",
    )
    if cfg.out:
        record = {
            "menu": dataclasses.asdict(menu),
            "analytic_profit": analytic,
            "report": dataclasses.asdict(report),
            "verdict": "PASS" if passed else "FAIL",
        }
        _write_json(cfg.out, record)
        print(f"record written to {cfg.out}")
    return EXIT_OK if passed else EXIT_VERIFICATION


def cmd_grid(cfg: ExperimentConfig, chain_solve: bool) -> int:
    if cfg.grid is None:
        raise ConfigError("grid requires a [grid] section (or grid.* overrides)")
    spec = cfg.grid
    tf_grid = generate_grid(spec.slots, spec.channels, spec.occupancy_prob, spec.seed)
    free = tf_grid.free_per_slot
    kappa = time_average_cost(tf_grid, spec.cost)

    _print_kv("slots", str(spec.slots))
    _print_kv("channels", str(spec.channels))
    _print_kv("occupancy_prob", _fmt(spec.occupancy_prob))
    _print_kv("seed", str(spec.seed))
    _print_kv("mean_free", _fmt(float(free.mean())))
    _print_kv("min_free", str(int(free.min())))
    _print_kv("max_free", str(int(free.max())))
    _print_kv("cost_model", spec.cost.kind.value)
    _print_kv("kappa", _fmt(kappa))
    saturated = int((free == 0).sum())
    if saturated:
        print(
            f"warning: {saturated} of {spec.slots} slots have no free channel; "
            f"their cost is the configured maximum "
            f"{_fmt(channel_cost(0, spec.cost))}"
        )
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(grid_to_text(tf_grid))
        print(f"grid written to {cfg.out}")
    if chain_solve:
        solve_cfg = dataclasses.replace(
            cfg, params=dataclasses.replace(cfg.params, kappa=kappa), out=None
        )
        print(f"solving with kappa={_fmt(kappa)}")
        result = solve(solve_cfg.params, solve_cfg.mode, solve_cfg.r_max)
        _print_solve_result(solve_cfg, result)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specres",
        description=(
            "Two-type spectrum-reservation contracts: solve the optimal menu, "
            "sweep parameters, simulate the market, and model the channel grid."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("solve", "solve the optimal contract menu and print diagnostics"),
        ("sweep", "solve across a parameter range and write a CSV (and SVG chart)"),
        ("simulate", "run the agent-based market simulation against the analytic profit"),
        ("grid", "generate a time-frequency grid and report its average channel cost"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", metavar="PATH", help="TOML configuration file")
        cmd.add_argument(
            "--mode",
            choices=("paper", "numerical"),
            help="closed-form ('paper') or numerical solver route",
        )
        cmd.add_argument("--seed", type=int, metavar="N", help="RNG seed override")
        cmd.add_argument("--out", metavar="PATH", help="output file (CSV, JSON, or grid text)")
        cmd.add_argument("--svg", metavar="PATH", help="write an SVG chart (sweep only)")
        cmd.add_argument(
            "--override",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config value, e.g. params.pi_c=0.3 (repeatable)",
        )
        if name == "grid":
            cmd.add_argument(
                "--solve",
                action="store_true",
                help="feed the computed kappa into a solve run",
            )
    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    overrides = list(args.override)
    if args.mode:
        overrides.append(f"solve.mode={args.mode}")
    if args.seed is not None:
        section = "grid" if args.command == "grid" else "sim"
        overrides.append(f"{section}.seed={args.seed}")
    if args.out:
        overrides.append(f"output.out={args.out}")
    if args.svg:
        overrides.append(f"output.svg={args.svg}")
    return load_config(args.config, tuple(overrides))


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        if args.command == "solve":
            return cmd_solve(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        return cmd_grid(cfg, chain_solve=args.solve)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ExistenceViolated as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
