"""Tests for the pure contract analytics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from specres import (
    ConstraintReport,
    ContractMenu,
    DomainError,
    MarketParams,
    constraint_slacks,
    exp_cdf,
    fsd_dominates,
    operator_profit,
    reservation_value,
)

import frozen


def quad_reservation_value(r: float, lam: float) -> float:
    """Oracle: r*F(r) + integral of v*f(v) over v > r, by adaptive quadrature."""
    cdf_at_r = 1.0 - math.exp(-lam * r)
    tail, _ = integrate.quad(lambda v: v * lam * math.exp(-lam * v), r, np.inf)
    return r * cdf_at_r + tail


def quad_profit(params: MarketParams, menu: ContractMenu) -> float:
    """Oracle: payment minus expected rebate payout minus expected channel cost,
    each expectation integrated against the utility density."""
    total = 0.0
    for share, lam, p, r in (
        (params.pi_c, params.lambda_c, menu.p_c, menu.r_c),
        (params.pi_n, params.lambda_n, menu.p_n, menu.r_n),
    ):
        rebate, _ = integrate.quad(lambda v: r * lam * math.exp(-lam * v), 0.0, r)
        cost, _ = integrate.quad(
            lambda v: params.kappa * lam * math.exp(-lam * v), r, np.inf
        )
        total += share * (p - rebate - cost)
    return total


class TestMarketParams:
    def test_valid_construction(self, base_params):
        assert base_params.pi_n == pytest.approx(0.8, abs=0)

    def test_rejects_reversed_intensities(self):
        with pytest.raises(ValueError, match="lambda_c"):
            MarketParams(lambda_c=2.0, lambda_n=1.0, pi_c=0.2, kappa=0.1)

    def test_allows_equal_intensities(self):
        params = MarketParams(lambda_c=1.0, lambda_n=1.0, pi_c=0.2, kappa=0.1)
        assert params.lambda_c == params.lambda_n

    @pytest.mark.parametrize("pi_c", [-0.1, 1.1, math.nan])
    def test_rejects_bad_share(self, pi_c):
        with pytest.raises(ValueError):
            MarketParams(lambda_c=0.2, lambda_n=1.0, pi_c=pi_c, kappa=0.1)

    def test_rejects_negative_cost(self):
        with pytest.raises(ValueError, match="kappa"):
            MarketParams(lambda_c=0.2, lambda_n=1.0, pi_c=0.2, kappa=-0.1)

    @pytest.mark.parametrize("lam", [0.0, -1.0, math.nan, math.inf])
    def test_rejects_bad_intensity(self, lam):
        with pytest.raises(ValueError):
            MarketParams(lambda_c=lam, lambda_n=1.0, pi_c=0.2, kappa=0.1)


class TestContractMenu:
    def test_rejects_negative_component(self):
        with pytest.raises(ValueError, match="r_n"):
            ContractMenu(p_c=1.0, r_c=0.1, p_n=1.0, r_n=-0.2)

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            ContractMenu(p_c=math.nan, r_c=0.1, p_n=1.0, r_n=0.2)


class TestExpCdf:
    def test_at_origin(self):
        assert exp_cdf(0.0, 1.0) == 0.0

    def test_known_point(self):
        assert exp_cdf(math.log(5), 1.0) == pytest.approx(0.8, abs=1e-12)

    def test_small_argument(self):
        assert exp_cdf(0.1, 0.2) == pytest.approx(frozen.EXP_CDF_SMALL, abs=1e-15)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            exp_cdf(-0.1, 1.0)
        with pytest.raises(DomainError):
            exp_cdf(0.1, 0.0)

    @given(
        v1=st.floats(0.0, 50.0),
        v2=st.floats(0.0, 50.0),
        lam=st.floats(0.01, 10.0),
    )
    def test_monotone_into_unit_interval(self, v1, v2, lam):
        # Doubles round 1 - e^-x to exactly 1.0 once x exceeds ~37, so the
        # strict upper bound is only representable below that.
        lo, hi = sorted((v1, v2))
        assert 0.0 <= exp_cdf(lo, lam) <= exp_cdf(hi, lam) <= 1.0
        if lam * hi < 36.0:
            assert exp_cdf(hi, lam) < 1.0


class TestReservationValue:
    def test_zero_rebate_gives_mean(self):
        assert reservation_value(0.0, 0.2) == pytest.approx(5.0, abs=1e-12)

    def test_known_point(self):
        expected = math.log(5) + 0.2
        assert reservation_value(math.log(5), 1.0) == pytest.approx(expected, abs=1e-12)

    def test_small_rebate(self):
        assert reservation_value(0.1, 0.2) == pytest.approx(
            frozen.RESERVATION_SMALL, abs=1e-12
        )

    @pytest.mark.parametrize(
        "r,lam", [(0.0, 0.2), (0.1, 0.2), (math.log(5), 1.0), (3.7, 0.9), (12.0, 2.5)]
    )
    def test_matches_quadrature_oracle(self, r, lam):
        assert reservation_value(r, lam) == pytest.approx(
            quad_reservation_value(r, lam), abs=1e-9
        )

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            reservation_value(-1.0, 1.0)
        with pytest.raises(DomainError):
            reservation_value(1.0, -1.0)

    @given(r=st.floats(0.0, 100.0), lam=st.floats(0.01, 10.0))
    def test_dominates_both_arguments(self, r, lam):
        value = reservation_value(r, lam)
        assert value >= max(r, 1.0 / lam) - 1e-12

    @given(
        r1=st.floats(0.0, 100.0),
        r2=st.floats(0.0, 100.0),
        lam=st.floats(0.01, 10.0),
    )
    def test_nondecreasing_in_rebate(self, r1, r2, lam):
        lo, hi = sorted((r1, r2))
        assert reservation_value(lo, lam) <= reservation_value(hi, lam) + 1e-12


class TestOperatorProfit:
    def test_zero_when_payment_rebate_and_cost_coincide(self, base_params):
        k = base_params.kappa
        menu = ContractMenu(p_c=k, r_c=k, p_n=k, r_n=k)
        assert operator_profit(base_params, menu) == 0.0

    def test_base_menu_value(self, base_params, base_paper_result):
        assert operator_profit(base_params, base_paper_result.menu) == pytest.approx(
            frozen.BASE_PROFIT, abs=1e-9
        )

    def test_all_mc_market_ignores_non_mc_branch(self):
        params = MarketParams(lambda_c=0.2, lambda_n=1.0, pi_c=1.0, kappa=0.1)
        menu_a = ContractMenu(p_c=2.0, r_c=0.5, p_n=1.0, r_n=0.3)
        menu_b = ContractMenu(p_c=2.0, r_c=0.5, p_n=9.0, r_n=4.0)
        assert operator_profit(params, menu_a) == operator_profit(params, menu_b)

    def test_agrees_with_integral_form_on_random_corpus(self):
        # 1000 random instances: the closed form must match quadrature of the
        # payment/rebate/cost integrals to 1e-8.
        rng = np.random.default_rng(20240817)
        for _ in range(1000):
            lambda_c = rng.uniform(0.05, 2.0)
            params = MarketParams(
                lambda_c=lambda_c,
                lambda_n=lambda_c + rng.uniform(0.0, 2.0),
                pi_c=rng.uniform(0.0, 1.0),
                kappa=rng.uniform(0.0, 2.0),
            )
            menu = ContractMenu(
                p_c=rng.uniform(0.0, 5.0),
                r_c=rng.uniform(0.0, 5.0),
                p_n=rng.uniform(0.0, 5.0),
                r_n=rng.uniform(0.0, 5.0),
            )
            assert operator_profit(params, menu) == pytest.approx(
                quad_profit(params, menu), abs=1e-8
            )


class TestConstraintSlacks:
    def test_identical_contracts_zero_ic_slacks(self, base_params):
        menu = ContractMenu(p_c=1.3, r_c=0.4, p_n=1.3, r_n=0.4)
        report = constraint_slacks(base_params, menu)
        assert report.ic_cn_slack == 0.0
        assert report.ic_nc_slack == 0.0

    def test_base_menu_binding_structure(self, base_params, base_paper_result):
        report = constraint_slacks(base_params, base_paper_result.menu)
        assert abs(report.ir_n_slack) <= 1e-9
        assert abs(report.ic_cn_slack) <= 1e-9
        assert report.ic_nc_slack == pytest.approx(frozen.BASE_IC_NC_SLACK, abs=1e-9)
        assert report.ir_c_slack == pytest.approx(frozen.BASE_NET_MC, abs=1e-9)

    def test_feasible_tolerance(self):
        report = ConstraintReport(
            ir_c_slack=0.5, ir_n_slack=-5e-10, ic_cn_slack=0.0, ic_nc_slack=0.2
        )
        assert report.feasible()
        assert not report.feasible(eps=1e-10)
        assert report.min_slack() == -5e-10

    @given(
        lambda_c=st.floats(0.05, 3.0),
        spread=st.floats(0.0, 3.0),
        r_c=st.floats(0.0, 5.0),
        r_n=st.floats(0.0, 5.0),
        ir_n_gap=st.floats(0.0, 2.0),
        ic_cn_gap=st.floats(0.0, 2.0),
    )
    @settings(max_examples=300)
    def test_mc_participation_implied(
        self, lambda_c, spread, r_c, r_n, ir_n_gap, ic_cn_gap
    ):
        # Construct menus that satisfy non-MC participation and MC
        # truth-telling by design; MC participation must then follow from
        # first-order stochastic dominance of the MC utility.
        params = MarketParams(
            lambda_c=lambda_c, lambda_n=lambda_c + spread, pi_c=0.5, kappa=0.0
        )
        p_n = reservation_value(r_n, params.lambda_n) - ir_n_gap
        p_c = (
            p_n
            + reservation_value(r_c, params.lambda_c)
            - reservation_value(r_n, params.lambda_c)
            - ic_cn_gap
        )
        if p_n < 0.0 or p_c < 0.0:
            return
        report = constraint_slacks(params, ContractMenu(p_c=p_c, r_c=r_c, p_n=p_n, r_n=r_n))
        assert report.ir_n_slack >= -1e-9
        assert report.ic_cn_slack >= -1e-9
        assert report.ir_c_slack >= -1e-9


class TestFsdDominates:
    def test_mc_dominates_non_mc(self):
        assert fsd_dominates(0.2, 1.0)

    def test_equal_rates_weakly_dominate(self):
        assert fsd_dominates(1.0, 1.0)

    def test_reversed(self):
        assert not fsd_dominates(2.0, 1.0)
