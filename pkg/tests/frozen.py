"""Frozen expected values, each derived from an independent oracle.

Derivations (reproduced at runtime by the tests that cite them):

* The base market is lambda_c=0.2, lambda_n=1.0, pi_c=0.2, kappa=0.1.
* BASE_P_C / BASE_P_N come from solving the 2x2 linear system "non-MC
  participation binds, MC truth-telling binds" with the reservation values
  computed by scipy quadrature (test_solver.py re-derives them).
* BASE_PROFIT is the per-type payment/rebate/cost accounting evaluated
  termwise and cross-checked against quadrature of the integral form.
* FIXED_POINT_LO / FIXED_POINT_HI are the roots of the rebate fixed-point
  equation located by a 100k-point sign scan polished with scipy brentq.
* BASE_IC_NC_SLACK is the non-MC truth-telling slack under binding payments.
* BASE_NET_MC is the MC type's expected net under either base contract (the
  two are equal because MC truth-telling binds).
* NUMERICAL_PROFIT is the relaxed objective evaluated at FIXED_POINT_LO plus
  the MC term at rebate kappa.
* FIRST_BEST_* are reservation values at rebate kappa.
"""

import math

BASE_LAMBDA_C = 0.2
BASE_LAMBDA_N = 1.0
BASE_PI_C = 0.2
BASE_KAPPA = 0.1

BASE_R_N = math.log(5)  # 1.6094379124341003
BASE_P_N = 1.8094379124341002
BASE_P_C = 1.5770950481452821
BASE_PROFIT = 0.6969290756185127
BASE_IC_NC_SLACK = 0.5722576301093389
BASE_NET_MC = 3.4238983183884333

FIXED_POINT_LO = 0.12665985873940458
FIXED_POINT_HI = 3.2698717726388042
NUMERICAL_PROFIT = 0.9050363588947543

EXISTENCE_THRESHOLD = 1.0 / 1.8  # lambda_n / (2*lambda_n - lambda_c) at base rates

FIRST_BEST_P_C = 5.000993366533776  # reservation value of (kappa, lambda_c)
FIRST_BEST_P_N = 1.0048374180359596  # reservation value of (kappa, lambda_n)

HOLD_RATE_C = math.exp(-BASE_LAMBDA_C * BASE_KAPPA)  # e^-0.02
HOLD_RATE_N = 0.2  # e^-ln5

EXP_CDF_SMALL = 0.019801326693244702  # 1 - e^-0.02
RESERVATION_SMALL = 5.000993366533776  # 0.1 + 5 e^-0.02
