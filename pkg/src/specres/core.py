"""Analytics for two-type advance-payment/rebate reservation contracts.

A reservation contract is a pair (advance payment p, rebate r): the buyer pays
p up front, later learns the realized value v of the reserved block, and either
holds it (v > r) or releases it for the rebate r. Values are exponentially
distributed; the mission-critical (MC) type has intensity lambda_c, the
non-mission-critical type lambda_n, with lambda_c <= lambda_n so the MC type
expects more value from a reservation.

This module holds the pure closed-form layer: the value distribution, the
expected return of a reservation, the operator's expected profit, and the
slacks of the four screening constraints (participation and truth-telling for
each type). Everything is a pure function of its inputs; the dataclasses are
frozen and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

#: Default tolerance (in monetary units) below which a constraint slack is
#: treated as a violation.
FEASIBILITY_EPS = 1e-9


class DomainError(ValueError):
    """An argument lies outside a function's mathematical domain."""


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class MarketParams:
    """A problem instance: type intensities, MC share, and channel cost.

    Lower intensity means higher expected utility (mean 1/lambda), so the
    ordering lambda_c <= lambda_n encodes that MC applications value a
    reservation at least as much as non-MC ones. The non-MC share pi_n is
    always derived from pi_c, never stored.
    """

    lambda_c: float
    lambda_n: float
    pi_c: float
    kappa: float

    def __post_init__(self) -> None:
        for name in ("lambda_c", "lambda_n", "pi_c", "kappa"):
            _require_finite(name, getattr(self, name))
        if self.lambda_c <= 0.0 or self.lambda_n <= 0.0:
            raise ValueError(
                f"intensities must be positive, got lambda_c={self.lambda_c}, "
                f"lambda_n={self.lambda_n}"
            )
        if self.lambda_c > self.lambda_n:
            raise ValueError(
                f"lambda_c must not exceed lambda_n (the MC type has the higher "
                f"expected utility), got lambda_c={self.lambda_c} > "
                f"lambda_n={self.lambda_n}"
            )
        if not 0.0 <= self.pi_c <= 1.0:
            raise ValueError(f"pi_c must lie in [0, 1], got {self.pi_c}")
        if self.kappa < 0.0:
            raise ValueError(f"kappa must be nonnegative, got {self.kappa}")

    @property
    def pi_n(self) -> float:
        """Share of non-MC applications, always 1 - pi_c."""
        return 1.0 - self.pi_c


@dataclass(frozen=True)
class ContractMenu:
    """The offered menu: one (payment, rebate) pair per application type."""

    p_c: float
    r_c: float
    p_n: float
    r_n: float

    def __post_init__(self) -> None:
        for name in ("p_c", "r_c", "p_n", "r_n"):
            value = getattr(self, name)
            _require_finite(name, value)
            if value < 0.0:
                raise ValueError(f"{name} must be nonnegative, got {value}")


@dataclass(frozen=True)
class ConstraintReport:
    """Slacks of the four screening constraints (nonnegative = satisfied).

    ir_*: each type's expected return from its own contract minus its payment.
    ic_cn: the MC type's gain from its own contract over the non-MC contract.
    ic_nc: the non-MC type's gain from its own contract over the MC contract.
    """

    ir_c_slack: float
    ir_n_slack: float
    ic_cn_slack: float
    ic_nc_slack: float

    def min_slack(self) -> float:
        return min(self.ir_c_slack, self.ir_n_slack, self.ic_cn_slack, self.ic_nc_slack)

    def feasible(self, eps: float = FEASIBILITY_EPS) -> bool:
        """True iff every slack is at least -eps."""
        return self.min_slack() >= -eps


def exp_cdf(v: float, lam: float) -> float:
    """P(V <= v) for V exponentially distributed with intensity lam."""
    if lam <= 0.0:
        raise DomainError(f"intensity must be positive, got {lam}")
    if v < 0.0:
        raise DomainError(f"value must be nonnegative, got {v}")
    return -math.expm1(-lam * v)


def reservation_value(r: float, lam: float) -> float:
    """Expected return E[max(r, V)] of a reservation with rebate r.

    The holder releases for r when the realized value falls below r and keeps
    the block otherwise, so the expectation is r*F(r) + integral of v*f(v) over
    v > r, which closes to r + exp(-lam*r)/lam.
    """
    if lam <= 0.0:
        raise DomainError(f"intensity must be positive, got {lam}")
    if r < 0.0:
        raise DomainError(f"rebate must be nonnegative, got {r}")
    return r + math.exp(-lam * r) / lam


def operator_profit(params: MarketParams, menu: ContractMenu) -> float:
    """Expected per-application operator profit under truthful selection.

    Per type: the payment, minus the rebate paid back on release (probability
    F(r)), minus the channel cost kappa incurred on hold (probability 1-F(r)).
    """
    total = 0.0
    for share, lam, p, r in (
        (params.pi_c, params.lambda_c, menu.p_c, menu.r_c),
        (params.pi_n, params.lambda_n, menu.p_n, menu.r_n),
    ):
        total += share * (p - r + math.exp(-lam * r) * (r - params.kappa))
    return total


def constraint_slacks(params: MarketParams, menu: ContractMenu) -> ConstraintReport:
    """Evaluate all four participation/truth-telling slacks for a menu."""
    own_c = reservation_value(menu.r_c, params.lambda_c) - menu.p_c
    own_n = reservation_value(menu.r_n, params.lambda_n) - menu.p_n
    c_mimics_n = reservation_value(menu.r_n, params.lambda_c) - menu.p_n
    n_mimics_c = reservation_value(menu.r_c, params.lambda_n) - menu.p_c
    return ConstraintReport(
        ir_c_slack=own_c,
        ir_n_slack=own_n,
        ic_cn_slack=own_c - c_mimics_n,
        ic_nc_slack=own_n - n_mimics_c,
    )


def fsd_dominates(lambda_a: float, lambda_b: float) -> bool:
    """True iff Exp(lambda_a) first-order stochastically dominates Exp(lambda_b).

    For exponentials F_a(x) <= F_b(x) for all x holds exactly when
    lambda_a <= lambda_b.
    """
    return lambda_a <= lambda_b
