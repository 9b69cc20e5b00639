import pytest

from specres import MarketParams, SolveMode, solve

import frozen


@pytest.fixture(scope="session")
def base_params() -> MarketParams:
    return MarketParams(
        lambda_c=frozen.BASE_LAMBDA_C,
        lambda_n=frozen.BASE_LAMBDA_N,
        pi_c=frozen.BASE_PI_C,
        kappa=frozen.BASE_KAPPA,
    )


@pytest.fixture(scope="session")
def base_paper_result(base_params):
    return solve(base_params, SolveMode.PAPER_FAITHFUL)


@pytest.fixture(scope="session")
def base_numerical_result(base_params):
    return solve(base_params, SolveMode.NUMERICAL)
