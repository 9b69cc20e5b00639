"""Experiment configuration: TOML files plus dotted-key overrides.

A config file is plain TOML with sections [params], [solve], [sweep], [sim],
[grid], [grid.cost], [menu], and [output]; every key has a default or is
validated with an actionable message. CLI overrides ("section.key=value")
take precedence over the file, which takes precedence over defaults.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from specres.core import MarketParams
from specres.grid import ChannelCostModel, CostKind
from specres.sim import SimConfig
from specres.solver import SolveMode


class ConfigError(ValueError):
    """A configuration file, flag, or override is invalid."""


SWEEP_VARIABLES = ("pi_c", "lambda_c", "kappa")

_DEFAULTS: dict[str, dict[str, Any]] = {
    "params": {"lambda_c": 0.2, "lambda_n": 1.0, "pi_c": 0.2, "kappa": 0.1},
    "solve": {"mode": "paper", "r_max": None},
    "sweep": None,
    "sim": None,
    "grid": None,
    "menu": None,
    "output": {"out": None, "svg": None},
}

_SIM_DEFAULTS = {"n_agents": 10000, "seed": 0, "opt_out_allowed": True}
_GRID_DEFAULTS = {"slots": 1000, "channels": 10, "occupancy_prob": 0.3, "seed": 0}
_COST_DEFAULTS = {"kind": "constant", "a": 0.1, "b": 0.0, "zero_channel_cost": None}


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    steps: int


@dataclass(frozen=True)
class GridSpec:
    slots: int
    channels: int
    occupancy_prob: float
    seed: int
    cost: ChannelCostModel


@dataclass(frozen=True)
class ExperimentConfig:
    params: MarketParams
    mode: SolveMode
    r_max: float | None
    sweep: SweepSpec | None
    sim: SimConfig | None
    grid: GridSpec | None
    menu_override: dict[str, float] = field(default_factory=dict)
    out: str | None = None
    svg: str | None = None


def parse_override_value(raw: str) -> Any:
    """Interpret an override value: bool, int, float, or bare string."""
    lowered = raw.lower()
    if lowered == "true":
        return True
    if lowered == "false":
        return False
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw


def _apply_override(data: dict[str, Any], spec: str) -> None:
    if "=" not in spec:
        raise ConfigError(f"override must look like section.key=value, got {spec!r}")
    path, raw = spec.split("=", 1)
    keys = path.strip().split(".")
    if len(keys) < 2 or not all(keys):
        raise ConfigError(f"override key must be dotted (section.key), got {path!r}")
    node = data
    for key in keys[:-1]:
        child = node.get(key)
        if child is None:
            child = {}
            node[key] = child
        elif not isinstance(child, dict):
            raise ConfigError(f"{'.'.join(keys[:-1])} is not a section")
        node = child
    node[keys[-1]] = parse_override_value(raw.strip())


def _merge(base: dict[str, Any], extra: dict[str, Any]) -> None:
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _merge(base[key], value)
        else:
            base[key] = value


def _section(data: dict[str, Any], name: str) -> dict[str, Any] | None:
    value = data.get(name)
    if value is None:
        return None
    if not isinstance(value, dict):
        raise ConfigError(f"[{name}] must be a table of key = value pairs")
    return value


def _with_defaults(
    section: dict[str, Any], defaults: dict[str, Any], name: str
) -> dict[str, Any]:
    unknown = set(section) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown key {name}.{sorted(unknown)[0]}")
    merged = dict(defaults)
    merged.update(section)
    return merged


def _number(section: dict[str, Any], name: str, key: str) -> float:
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name}.{key} must be a number, got {value!r}")
    return float(value)


def _integer(section: dict[str, Any], name: str, key: str) -> int:
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name}.{key} must be an integer, got {value!r}")
    return value


def _boolean(section: dict[str, Any], name: str, key: str) -> bool:
    value = section[key]
    if not isinstance(value, bool):
        raise ConfigError(f"{name}.{key} must be true or false, got {value!r}")
    return value


def _build_params(section: dict[str, Any]) -> MarketParams:
    merged = _with_defaults(section, _DEFAULTS["params"], "params")
    lambda_c = _number(merged, "params", "lambda_c")
    lambda_n = _number(merged, "params", "lambda_n")
    pi_c = _number(merged, "params", "pi_c")
    kappa = _number(merged, "params", "kappa")
    if lambda_c <= 0.0 or lambda_n <= 0.0:
        raise ConfigError(
            f"params.lambda_c and params.lambda_n must be positive, got "
            f"{lambda_c} and {lambda_n}"
        )
    if lambda_c >= lambda_n:
        raise ConfigError(
            f"params.lambda_c must be strictly less than params.lambda_n so the "
            f"two types are distinguishable, got {lambda_c} >= {lambda_n}"
        )
    if not 0.0 <= pi_c <= 1.0:
        raise ConfigError(f"params.pi_c must lie in [0, 1], got {pi_c}")
    if kappa < 0.0:
        raise ConfigError(f"params.kappa must be nonnegative, got {kappa}")
    return MarketParams(lambda_c=lambda_c, lambda_n=lambda_n, pi_c=pi_c, kappa=kappa)


def _build_solve(section: dict[str, Any]) -> tuple[SolveMode, float | None]:
    merged = _with_defaults(section, _DEFAULTS["solve"], "solve")
    mode_raw = merged["mode"]
    try:
        mode = SolveMode(mode_raw)
    except ValueError:
        raise ConfigError(
            f"solve.mode must be 'paper' or 'numerical', got {mode_raw!r}"
        ) from None
    r_max = merged["r_max"]
    if r_max is not None:
        r_max = _number(merged, "solve", "r_max")
        if r_max <= 0.0:
            raise ConfigError(f"solve.r_max must be positive, got {r_max}")
    return mode, r_max


def _build_sweep(section: dict[str, Any], params: MarketParams) -> SweepSpec:
    defaults = {"variable": None, "from": None, "to": None, "steps": None}
    merged = _with_defaults(section, defaults, "sweep")
    for key in defaults:
        if merged[key] is None:
            raise ConfigError(f"sweep.{key} is required")
    variable = merged["variable"]
    if variable not in SWEEP_VARIABLES:
        raise ConfigError(
            f"sweep.variable must be one of {', '.join(SWEEP_VARIABLES)}, got {variable!r}"
        )
    start = _number(merged, "sweep", "from")
    stop = _number(merged, "sweep", "to")
    steps = _integer(merged, "sweep", "steps")
    if steps < 1:
        raise ConfigError(f"sweep.steps must be at least 1, got {steps}")
    if start > stop:
        raise ConfigError(f"sweep range is empty: from={start} > to={stop}")
    if variable == "pi_c" and not (0.0 <= start and stop <= 1.0):
        raise ConfigError(f"pi_c sweep must stay inside [0, 1], got [{start}, {stop}]")
    if variable == "lambda_c" and not (0.0 < start and stop < params.lambda_n):
        raise ConfigError(
            f"lambda_c sweep must stay inside (0, lambda_n={params.lambda_n}), "
            f"got [{start}, {stop}]"
        )
    if variable == "kappa" and start < 0.0:
        raise ConfigError(f"kappa sweep must be nonnegative, got from={start}")
    return SweepSpec(variable=variable, start=start, stop=stop, steps=steps)


def _build_sim(section: dict[str, Any]) -> SimConfig:
    merged = _with_defaults(section, _SIM_DEFAULTS, "sim")
    n_agents = _integer(merged, "sim", "n_agents")
    if n_agents < 1:
        raise ConfigError(f"sim.n_agents must be at least 1, got {n_agents}")
    return SimConfig(
        n_agents=n_agents,
        seed=_integer(merged, "sim", "seed"),
        opt_out_allowed=_boolean(merged, "sim", "opt_out_allowed"),
    )


def _build_grid(section: dict[str, Any]) -> GridSpec:
    cost_section = section.pop("cost", {})
    if not isinstance(cost_section, dict):
        raise ConfigError("[grid.cost] must be a table")
    merged = _with_defaults(section, _GRID_DEFAULTS, "grid")
    slots = _integer(merged, "grid", "slots")
    channels = _integer(merged, "grid", "channels")
    if slots < 1 or channels < 1:
        raise ConfigError(
            f"grid.slots and grid.channels must be at least 1, got {slots} and {channels}"
        )
    occupancy_prob = _number(merged, "grid", "occupancy_prob")
    if not 0.0 <= occupancy_prob <= 1.0:
        raise ConfigError(
            f"grid.occupancy_prob must lie in [0, 1], got {occupancy_prob}"
        )
    cost_merged = _with_defaults(cost_section, _COST_DEFAULTS, "grid.cost")
    try:
        kind = CostKind(cost_merged["kind"])
    except ValueError:
        raise ConfigError(
            f"grid.cost.kind must be one of constant, inverse, linear; "
            f"got {cost_merged['kind']!r}"
        ) from None
    zero_cost = cost_merged["zero_channel_cost"]
    try:
        cost = ChannelCostModel(
            kind=kind,
            a=_number(cost_merged, "grid.cost", "a"),
            b=_number(cost_merged, "grid.cost", "b"),
            zero_channel_cost=None if zero_cost is None else float(zero_cost),
        )
    except ValueError as exc:
        raise ConfigError(f"grid.cost: {exc}") from exc
    return GridSpec(
        slots=slots,
        channels=channels,
        occupancy_prob=occupancy_prob,
        seed=_integer(merged, "grid", "seed"),
        cost=cost,
    )


def _build_menu_override(section: dict[str, Any]) -> dict[str, float]:
    allowed = {"p_c", "r_c", "p_n", "r_n"}
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown key menu.{sorted(unknown)[0]}")
    override: dict[str, float] = {}
    for key, value in section.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"menu.{key} must be a number, got {value!r}")
        if value < 0.0:
            raise ConfigError(f"menu.{key} must be nonnegative, got {value}")
        override[key] = float(value)
    return override


def load_config(path: str | None = None, overrides: tuple[str, ...] = ()) -> ExperimentConfig:
    """Load, merge, and validate a configuration.

    Raises ConfigError on syntax problems, unknown keys, or values outside
    each field's validity region.
    """
    data: dict[str, Any] = copy.deepcopy(
        {k: v for k, v in _DEFAULTS.items() if isinstance(v, dict)}
    )
    if path is not None:
        try:
            with open(path, "rb") as handle:
                file_data = tomllib.load(handle)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid TOML: {exc}") from exc
        unknown = set(file_data) - set(_DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config section [{sorted(unknown)[0]}]")
        _merge(data, file_data)
    for spec in overrides:
        _apply_override(data, spec)
    unknown = set(data) - set(_DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config section [{sorted(unknown)[0]}]")

    params = _build_params(_section(data, "params") or {})
    mode, r_max = _build_solve(_section(data, "solve") or {})
    sweep_section = _section(data, "sweep")
    sim_section = _section(data, "sim")
    grid_section = _section(data, "grid")
    menu_section = _section(data, "menu")
    output = _with_defaults(_section(data, "output") or {}, _DEFAULTS["output"], "output")

    return ExperimentConfig(
        params=params,
        mode=mode,
        r_max=r_max,
        sweep=_build_sweep(sweep_section, params) if sweep_section is not None else None,
        sim=_build_sim(sim_section) if sim_section is not None else None,
        grid=_build_grid(dict(grid_section)) if grid_section is not None else None,
        menu_override=_build_menu_override(menu_section) if menu_section else {},
        out=None if output["out"] is None else str(output["out"]),
        svg=None if output["svg"] is None else str(output["svg"]),
    )
