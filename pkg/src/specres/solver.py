"""Optimal-menu solver for the two-type reservation-contract market.

The operator maximizes expected profit subject to participation and
truth-telling constraints. With exponential utilities the problem reduces to
choosing the two rebates: the non-MC participation constraint and the MC
truth-telling constraint bind at the optimum and pin the payments down
(``advance_payments``), the MC rebate equals the channel cost, and the non-MC
rebate maximizes a one-dimensional relaxed objective whose critical points
satisfy a fixed-point equation (``fixed_point_residual``).

The published closed form for the non-MC rebate,
log(lambda_n*pi_n / (pi_c*(lambda_n - lambda_c))), is internally inconsistent:
it is neither a root of the fixed-point equation nor the maximizer of the
relaxed objective in general. The solver therefore runs in one of two modes
and always reports both diagnostics:

* ``SolveMode.PAPER_FAITHFUL`` uses the closed form verbatim, matching the
  published parameter sweeps.
* ``SolveMode.NUMERICAL`` maximizes the relaxed objective directly over the
  bounded search domain [0, r_max].

The relaxed objective approaches 0 from below as r_n grows at many parameter
settings, meaning "price the non-MC type out entirely" can dominate interior
screening; ``boundary_flag`` surfaces that instead of returning an unbounded
answer.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from specres.core import (
    ContractMenu,
    MarketParams,
    ConstraintReport,
    constraint_slacks,
    operator_profit,
    reservation_value,
)

#: Grid resolution for sign-change bracketing of the fixed-point residual.
DEFAULT_GRID_POINTS = 4096

# Bisection is run to 1e-12 in r (tighter than strictly needed) so that the
# residual at a reported root stays below 1e-9 even where the residual is
# steep near the search bound.
_BISECT_XTOL = 1e-12
_MAX_BISECT_ITER = 200

# Two candidates whose objective values differ by no more than this are a tie;
# ties resolve to the smaller rebate for deterministic output.
_TIE_EPS = 1e-12


class SolverError(Exception):
    """Base class for solver failures."""


class ExistenceViolated(SolverError):
    """The closed form has no nonnegative solution at these parameters."""


class TypesIndistinguishable(SolverError):
    """lambda_c equals lambda_n; the closed form divides by their difference."""


class DegenerateMarket(SolverError):
    """pi_c is 0 or 1; there is only one type to screen."""


class SolveMode(enum.Enum):
    PAPER_FAITHFUL = "paper"
    NUMERICAL = "numerical"


@dataclass(frozen=True)
class SolveResult:
    """A solved menu plus the diagnostics needed to audit it.

    r_n_candidates holds every fixed point of the non-MC rebate equation found
    in [0, r_max] (these are exactly the critical points of the relaxed
    objective). boundary_flag is true when the relaxed objective is higher at
    r_max than at the best interior candidate. existence_ok reports whether
    the closed form's existence condition pi_c <= lambda_n/(2*lambda_n -
    lambda_c) holds (always true for the degenerate single-type cases, where
    no screening happens).
    """

    menu: ContractMenu
    mode: SolveMode
    profit: float
    constraints: ConstraintReport
    r_n_candidates: tuple[float, ...]
    boundary_flag: bool
    existence_ok: bool


def default_r_max(params: MarketParams) -> float:
    """Default search bound: utility mass beyond 50/lambda_n is below e^-50."""
    return 50.0 / params.lambda_n


def rebate_mc(params: MarketParams) -> float:
    """Optimal MC rebate: exactly the average channel cost."""
    return params.kappa


def existence_threshold(params: MarketParams) -> float:
    """Largest pi_c for which the closed-form non-MC rebate is nonnegative."""
    return params.lambda_n / (2.0 * params.lambda_n - params.lambda_c)


def rebate_nonmc_closed_form(params: MarketParams) -> float:
    """The closed-form non-MC rebate, log(lambda_n*pi_n/(pi_c*(lambda_n-lambda_c))).

    Raises TypesIndistinguishable when lambda_c == lambda_n, DegenerateMarket
    when pi_c is 0 or 1, and ExistenceViolated when pi_c exceeds
    ``existence_threshold`` (equivalently, when the logarithm would be
    negative).
    """
    if params.lambda_c == params.lambda_n:
        raise TypesIndistinguishable(
            f"closed form requires lambda_c < lambda_n, got both equal to "
            f"{params.lambda_c}"
        )
    if params.pi_c in (0.0, 1.0):
        raise DegenerateMarket(
            f"closed form requires 0 < pi_c < 1, got pi_c={params.pi_c}"
        )
    threshold = existence_threshold(params)
    if params.pi_c > threshold:
        raise ExistenceViolated(
            f"no nonnegative closed-form rebate: pi_c={params.pi_c} exceeds "
            f"lambda_n/(2*lambda_n - lambda_c) = {threshold:.12g}"
        )
    argument = (
        params.lambda_n * params.pi_n / (params.pi_c * (params.lambda_n - params.lambda_c))
    )
    # The threshold test already passed; clamp the hairline-negative rounding
    # that can occur when pi_c sits exactly on the boundary.
    return max(0.0, math.log(argument))


def fixed_point_residual(params: MarketParams, r: float) -> float:
    """Residual of the non-MC rebate fixed-point equation at r.

    Zero exactly at the critical points of the relaxed objective. Requires
    pi_n > 0.
    """
    if params.pi_n == 0.0:
        raise DegenerateMarket("fixed-point equation is undefined when pi_n = 0")
    exponent = (params.lambda_n - params.lambda_c) * r
    if exponent > 700.0:  # exp would overflow; the residual is +inf there
        return math.inf
    scale = params.pi_c / (params.pi_n * params.lambda_n)
    return params.kappa + scale * math.expm1(exponent) - r


def relaxed_objective(params: MarketParams, r_n: float) -> float:
    """Non-MC part of the profit after substituting the binding constraints.

    The full relaxed objective separates into an MC term (maximized at rebate
    kappa) plus this function of r_n alone; the second term is the information
    rent conceded to the MC type.
    """
    return (
        math.exp(-params.lambda_n * r_n)
        * (1.0 / params.lambda_n + params.pi_n * (r_n - params.kappa))
        - (params.pi_c / params.lambda_c) * math.exp(-params.lambda_c * r_n)
    )


def _bisect_root(params: MarketParams, lo: float, hi: float, f_lo: float) -> float:
    """Bisection on the fixed-point residual within a sign-changing bracket."""
    for _ in range(_MAX_BISECT_ITER):
        mid = 0.5 * (lo + hi)
        if hi - lo <= _BISECT_XTOL or mid in (lo, hi):
            break
        f_mid = fixed_point_residual(params, mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def rebate_nonmc_fixed_points(
    params: MarketParams, r_max: float, grid_points: int = DEFAULT_GRID_POINTS
) -> list[float]:
    """All roots of the fixed-point equation in [0, r_max], sorted ascending.

    Sign-change bracketing on a uniform grid followed by bisection. The
    residual is smooth and convex, so it has at most two roots; an empty list
    is a valid answer (no interior critical point in range).
    """
    if r_max <= 0.0:
        raise ValueError(f"r_max must be positive, got {r_max}")
    if grid_points < 2:
        raise ValueError(f"grid_points must be at least 2, got {grid_points}")
    if params.pi_n == 0.0:
        return []

    grid = np.linspace(0.0, r_max, grid_points + 1)
    scale = params.pi_c / (params.pi_n * params.lambda_n)
    with np.errstate(over="ignore"):
        residuals = params.kappa + scale * np.expm1(
            (params.lambda_n - params.lambda_c) * grid
        ) - grid

    roots: list[float] = []
    for i in range(grid_points):
        f_lo, f_hi = residuals[i], residuals[i + 1]
        if f_lo == 0.0:
            roots.append(float(grid[i]))
        elif math.isfinite(f_lo) and math.isfinite(f_hi) and f_lo * f_hi < 0.0:
            roots.append(_bisect_root(params, float(grid[i]), float(grid[i + 1]), float(f_lo)))
    if residuals[-1] == 0.0:
        roots.append(float(grid[-1]))

    deduped: list[float] = []
    for r in sorted(roots):
        if not deduped or r - deduped[-1] > 1e-9:
            deduped.append(r)
    return deduped


def _pick_numeric_rebate(
    params: MarketParams, roots: list[float], r_max: float
) -> tuple[float, bool]:
    """Choose the interior maximizer of the relaxed objective and flag the boundary.

    Candidates are r=0 plus every fixed point strictly inside (0, r_max); ties
    within _TIE_EPS keep the smaller rebate. boundary_flag reports whether the
    objective at r_max beats the best interior candidate (pricing the non-MC
    type out dominates interior screening). Only when there is no interior
    fixed point at all does a dominant boundary become the returned rebate.
    """
    interior = [0.0] + [r for r in roots if 0.0 < r < r_max]
    best = interior[0]
    best_value = relaxed_objective(params, best)
    for r in interior[1:]:
        value = relaxed_objective(params, r)
        if value > best_value + _TIE_EPS:
            best, best_value = r, value
    boundary = relaxed_objective(params, r_max) > best_value + _TIE_EPS
    if boundary and len(interior) == 1:
        return r_max, True
    return best, boundary


def rebate_nonmc_numeric(
    params: MarketParams, r_max: float, grid_points: int = DEFAULT_GRID_POINTS
) -> tuple[float, bool]:
    """Maximize the relaxed objective over [0, r_max].

    Returns (rebate, boundary_flag); see ``_pick_numeric_rebate`` for the
    candidate and tie rules.
    """
    roots = rebate_nonmc_fixed_points(params, r_max, grid_points)
    return _pick_numeric_rebate(params, roots, r_max)


def advance_payments(params: MarketParams, r_c: float, r_n: float) -> tuple[float, float]:
    """Payments that bind the non-MC participation and MC truth-telling constraints.

    p_n extracts the non-MC type's full expected return; p_c charges the MC
    type its own expected return minus the rent it could earn by taking the
    non-MC contract.
    """
    if r_c < 0.0 or r_n < 0.0:
        raise ValueError(f"rebates must be nonnegative, got r_c={r_c}, r_n={r_n}")
    p_n = r_n + math.exp(-params.lambda_n * r_n) / params.lambda_n
    p_c = p_n + r_c - r_n + (
        math.exp(-params.lambda_c * r_c) - math.exp(-params.lambda_c * r_n)
    ) / params.lambda_c
    return p_c, p_n


def verify_ic_nc(params: MarketParams, r_c: float, r_n: float) -> float:
    """Slack of the non-MC truth-telling constraint under binding payments.

    Equals (e^{-lambda_n r_n} - e^{-lambda_n r_c})/lambda_n +
    (e^{-lambda_c r_c} - e^{-lambda_c r_n})/lambda_c, which is nonnegative
    whenever r_n >= r_c and lambda_c <= lambda_n. A nonnegative value
    certifies that menus built by ``advance_payments`` leave the non-MC type
    no incentive to take the MC contract.
    """
    return (
        (math.exp(-params.lambda_n * r_n) - math.exp(-params.lambda_n * r_c))
        / params.lambda_n
        + (math.exp(-params.lambda_c * r_c) - math.exp(-params.lambda_c * r_n))
        / params.lambda_c
    )


def first_best(params: MarketParams) -> ContractMenu:
    """Full-information benchmark: both rebates at cost, full surplus extracted.

    With the type observable the operator sets each rebate to kappa (the
    per-type profit e^{-lam r}(1/lam + r - kappa) peaks there) and charges each
    type its entire expected return. Screening profit can never exceed this.
    """
    r = params.kappa
    return ContractMenu(
        p_c=reservation_value(r, params.lambda_c),
        r_c=r,
        p_n=reservation_value(r, params.lambda_n),
        r_n=r,
    )


def _solve_single_type(params: MarketParams, mode: SolveMode, r_max: float) -> SolveResult:
    # Continuous limit of the menu: with one type present, both entries carry
    # that type's full-information contract, so the menu stays incentive-safe
    # for whichever agents exist.
    lam = params.lambda_n if params.pi_c == 0.0 else params.lambda_c
    r = params.kappa
    p = reservation_value(r, lam)
    menu = ContractMenu(p_c=p, r_c=r, p_n=p, r_n=r)
    roots = rebate_nonmc_fixed_points(params, r_max) if params.pi_n > 0.0 else []
    return SolveResult(
        menu=menu,
        mode=mode,
        profit=operator_profit(params, menu),
        constraints=constraint_slacks(params, menu),
        r_n_candidates=tuple(roots),
        boundary_flag=False,
        existence_ok=True,
    )


def solve(params: MarketParams, mode: SolveMode, r_max: float | None = None) -> SolveResult:
    """Compute the optimal menu in the requested mode, with full diagnostics.

    The MC rebate is always kappa. The non-MC rebate comes from the closed
    form (PAPER_FAITHFUL, which propagates ExistenceViolated and
    TypesIndistinguishable) or from maximizing the relaxed objective
    (NUMERICAL). Payments bind the non-MC participation and MC truth-telling
    constraints in both modes. Degenerate markets (pi_c of 0 or 1) collapse to
    the single-type full-information contract instead of erroring.
    """
    if r_max is None:
        r_max = default_r_max(params)
    if r_max <= 0.0:
        raise ValueError(f"r_max must be positive, got {r_max}")

    if params.pi_c in (0.0, 1.0):
        return _solve_single_type(params, mode, r_max)

    r_c = rebate_mc(params)
    roots = rebate_nonmc_fixed_points(params, r_max)
    numeric_r_n, boundary_flag = _pick_numeric_rebate(params, roots, r_max)
    existence_ok = (
        params.lambda_c < params.lambda_n
        and params.pi_c <= existence_threshold(params)
    )

    if mode is SolveMode.PAPER_FAITHFUL:
        r_n = rebate_nonmc_closed_form(params)
    else:
        r_n = numeric_r_n

    p_c, p_n = advance_payments(params, r_c, r_n)
    menu = ContractMenu(p_c=p_c, r_c=r_c, p_n=p_n, r_n=r_n)
    return SolveResult(
        menu=menu,
        mode=mode,
        profit=operator_profit(params, menu),
        constraints=constraint_slacks(params, menu),
        r_n_candidates=tuple(roots),
        boundary_flag=boundary_flag,
        existence_ok=existence_ok,
    )
