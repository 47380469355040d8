"""High-precision reference values for the accountant regression tests.

Evaluates every closed-form amplification bound with mpmath at 50 digits,
independently of the Rust implementation. The printed constants are frozen
into tests/accountant_regression.rs; rerun this script to regenerate them.
"""
from mpmath import mp, mpf, exp, log, sqrt, log1p

mp.dps = 50


def compose(eps, delta):
    first = sum((exp(e) - 1) * e / (exp(e) + 1) for e in eps)
    return first + sqrt(2 * log(1 / delta) * sum(e * e for e in eps))


def all_core(e0, eps1, delta):
    a = (exp(e0) - 1) ** 2 * exp(4 * e0)
    return a * eps1 ** 2 / 2 + eps1 * sqrt(2 * a * log(1 / delta))


def eps1_all(n, sp2, rho, delta2):
    return sqrt((1 - mpf(1) / n) * rho ** 2 * sp2) + sqrt(log(1 / delta2) / n)


def single_core(e0, sp2, delta):
    return exp(2 * e0) * (exp(e0) - 1) ** 2 / 2 * sp2 + exp(e0) * (exp(e0) - 1) * sqrt(2 * log(1 / delta) * sp2)


def threshold(e0, d1):
    return (1 - exp(-e0)) * d1 / (4 * exp(e0) * (2 + log(2 / d1) / log(1 / (1 - exp(-5 * e0)))))


def approx_delta(delta, delta2, n, eps_prime, delta1):
    return delta + delta2 + n * (exp(eps_prime) + 1) * delta1


def show(name, v):
    print(f"{name} = {mp.nstr(v, 25)}")


# heterogeneous composition
show("COMPOSE", compose([mpf("0.1"), mpf("0.5"), mpf("1.0"), mpf("2.0")], mpf("1e-5")))

# all reports, stationary, pure: Facebook-like profile
n = 22470
sp2 = mpf("5.0064") / n
e1 = eps1_all(n, sp2, 1, mpf("1e-6"))
show("ALL_STAT_PURE_EPS1", e1)
show("ALL_STAT_PURE_EPS", all_core(mpf(1), e1, mpf("1e-6")))

# all reports, stationary, approximate (delta0 > 0)
e0 = mpf("0.05")
d1 = mpf("1e-12")
ep = all_core(8 * e0, e1, mpf("1e-6"))
show("ALL_STAT_APPROX_EPS", ep)
show("ALL_STAT_APPROX_DELTA", approx_delta(mpf("1e-6"), mpf("1e-6"), n, ep, d1))

# all reports, symmetric, pure and approximate
n = 4096
sp2 = mpf("3e-4")
rho = mpf("1.7")
e1 = eps1_all(n, sp2, rho, mpf("1e-6"))
show("ALL_SYM_PURE_EPS1", e1)
show("ALL_SYM_PURE_EPS", all_core(mpf("0.5"), e1, mpf("1e-6")))
ep = all_core(8 * mpf("0.05"), e1, mpf("1e-6"))
show("ALL_SYM_APPROX_EPS", ep)
show("ALL_SYM_APPROX_DELTA", approx_delta(mpf("1e-6"), mpf("1e-6"), n, ep, mpf("1e-12")))

# single report, pure: Twitch-like profile
n = 9498
sp2 = mpf("7.584") / n
show("SINGLE_PURE_EPS", single_core(mpf(1), sp2, mpf("1e-6")))
ep = single_core(8 * mpf("0.05"), sp2, mpf("1e-6"))
show("SINGLE_APPROX_EPS", ep)
show("SINGLE_APPROX_DELTA", approx_delta(mpf("1e-6"), mpf("1e-6"), n, ep, mpf("1e-12")))
e0 = mpf("0.05")
show("SINGLE_SIMPLIFIED_EPS", 800 * e0 ** 2 * sp2 + 40 * e0 * sqrt(2 * log(1 / mpf("1e-6")) * sp2))

# delta0 threshold
show("THRESHOLD_E1_D1E-6", threshold(mpf(1), mpf("1e-6")))
show("THRESHOLD_E005_D1E-12", threshold(mpf("0.05"), mpf("1e-12")))

# data-dependent accountant for a fixed allocation
ell = [3, 0, 1, 0, 2, 0, 0, 4, 0, 0]
n = len(ell)
e0 = mpf("0.5")
eps_i = [log1p(exp(2 * e0) * (exp(e0) - 1) * l / n) for l in ell]
show("EMPIRICAL_EPS", compose(eps_i, mpf("1e-3")))
