"""Parameter sweeps over the contract solver, with fixed-schema CSV output.

Sweep points are independent of one another (the solver is pure), so they
could run in parallel; rows are emitted in sweep order either way. The CSV
schema is stable: columns are exactly ``CSV_COLUMNS`` in that order, floats
carry 12 significant digits with a '.' decimal separator, booleans are
``true``/``false``, and points where the closed form does not exist carry
``nan`` menu columns with existence_ok false.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from specres.config import SweepSpec
from specres.core import MarketParams
from specres.solver import ExistenceViolated, SolveMode, solve

CSV_COLUMNS = (
    "swept_value",
    "p_c",
    "r_c",
    "p_n",
    "r_n",
    "profit",
    "existence_ok",
    "boundary_flag",
)


@dataclass(frozen=True)
class SweepRow:
    swept_value: float
    p_c: float
    r_c: float
    p_n: float
    r_n: float
    profit: float
    existence_ok: bool
    boundary_flag: bool


def sweep_values(spec: SweepSpec) -> list[float]:
    """The swept grid: steps evenly spaced values from start to stop inclusive."""
    if spec.steps == 1:
        return [spec.start]
    step = (spec.stop - spec.start) / (spec.steps - 1)
    values = [spec.start + i * step for i in range(spec.steps)]
    values[-1] = spec.stop  # exact endpoint regardless of rounding
    return values


def run_sweep(
    params: MarketParams,
    spec: SweepSpec,
    mode: SolveMode,
    r_max: float | None = None,
) -> list[SweepRow]:
    """Solve the menu at every sweep point.

    Points where the closed form's existence condition fails (paper mode) are
    recorded rather than fatal: the menu columns are NaN and existence_ok is
    false.
    """
    rows: list[SweepRow] = []
    for value in sweep_values(spec):
        point = replace(params, **{spec.variable: value})
        try:
            result = solve(point, mode, r_max)
        except ExistenceViolated:
            rows.append(
                SweepRow(
                    swept_value=value,
                    p_c=math.nan,
                    r_c=math.nan,
                    p_n=math.nan,
                    r_n=math.nan,
                    profit=math.nan,
                    existence_ok=False,
                    boundary_flag=False,
                )
            )
            continue
        rows.append(
            SweepRow(
                swept_value=value,
                p_c=result.menu.p_c,
                r_c=result.menu.r_c,
                p_n=result.menu.p_n,
                r_n=result.menu.r_n,
                profit=result.profit,
                existence_ok=result.existence_ok,
                boundary_flag=result.boundary_flag,
            )
        )
    return rows


def format_float(value: float) -> str:
    return f"{value:.12g}"


def format_csv(rows: list[SweepRow]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(
            ",".join(
                (
                    format_float(row.swept_value),
                    format_float(row.p_c),
                    format_float(row.r_c),
                    format_float(row.p_n),
                    format_float(row.r_n),
                    format_float(row.profit),
                    "true" if row.existence_ok else "false",
                    "true" if row.boundary_flag else "false",
                )
            )
        )
    return "\n".join(lines) + "\n"


def write_csv(rows: list[SweepRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(format_csv(rows))
