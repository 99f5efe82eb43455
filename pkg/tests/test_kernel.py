"""Gamma kernel: closed forms, envelopes, tails, and sampling.

Reference values frozen from mpmath (scripts/freeze_oracles.py).
"""

import math

import numpy as np
import pytest

from gkde.errors import ValidationError
from gkde.kernel import (
    KernelPoint,
    chernoff_unit_tail,
    kernel_bounds,
    kernel_mean_var,
    kernel_pdf,
    kernel_pdf_grid,
    l2_envelope,
    l2_integral,
    l2_integral_ratio_form,
    local_ratio,
    sample_kernel,
    sup_envelope,
    sup_on_unit_interval,
    tail_envelope,
    tail_prob,
)
from gkde.quadrature import adaptive_integral
from gkde.specfun import reg_gamma_upper

PDF_TABLE = [
    (0.0, 0.1, 0.2, 1.3533528323661268),
    (0.5, 0.1, 0.5, 1.7546736976785071),
    (0.5, 0.01, 0.55, 4.4551578653469885),
    (0.02, 0.005, 0.01, 18.044704431548357),
    (2.5, 0.2, 1.0, 0.010751990934100179),
]

L2_TABLE = [
    (0.0, 0.1, 5.0),
    (0.25, 0.05, 2.4609375),
    (0.5, 0.01, 3.979461869358938),
    (1.0, 0.2, 0.615234375),
    (0.05, 0.002, 28.068793164804262),
]

LOCAL_RATIO_TABLE = [
    (0.5, 1e-06, 2.5, 0.0019709404182571898),
    (0.5, 0.01, 1.0, 0.4131592528179352),
    (0.25, 0.0001, 2.5, 8.092680966169796e-06),
]


@pytest.mark.parametrize("x,b,t,expected", PDF_TABLE)
def test_kernel_pdf_reference(x, b, t, expected):
    assert kernel_pdf(KernelPoint(x, b), t) == pytest.approx(expected, rel=1e-12)


def test_kernel_pdf_at_origin():
    # x = 0 degenerates to the exponential density with mean b
    kp = KernelPoint(0.0, 0.1)
    assert kernel_pdf(kp, 0.0) == pytest.approx(10.0, rel=1e-14)
    assert kernel_pdf(kp, 0.3) == pytest.approx(10.0 * math.exp(-3.0), rel=1e-13)
    # positive shape puts zero density at t = 0
    assert kernel_pdf(KernelPoint(0.5, 0.1), 0.0) == 0.0


def test_kernel_pdf_grid_matches_scalar():
    kp = KernelPoint(0.3, 0.05)
    ts = np.linspace(0.0, 1.5, 7)
    grid = kernel_pdf_grid(kp, ts)
    for t, v in zip(ts, grid):
        assert v == kernel_pdf(kp, float(t))


def test_kernel_normalization_by_quadrature():
    for x, b in [(0.0, 0.1), (0.3, 0.05), (1.0, 0.02), (2.0, 0.2)]:
        kp = KernelPoint(x, b)
        mean, var = kernel_mean_var(kp)
        hi = mean + 40.0 * math.sqrt(var) + 40.0 * b
        mass = adaptive_integral(
            lambda ts: kernel_pdf_grid(kp, ts), 0.0, hi, 1e-12, breakpoints=[x, mean]
        )
        assert mass == pytest.approx(1.0, abs=1e-11)


def test_kernel_mean_var_exact():
    for x, b in [(0.0, 0.1), (0.5, 0.1), (0.37, 0.002), (2.0, 0.5)]:
        mean, var = kernel_mean_var(KernelPoint(x, b))
        assert mean == pytest.approx(x + b, rel=1e-15)
        assert var == pytest.approx(x * b + b * b, rel=1e-15)


def test_kernel_moments_by_quadrature():
    kp = KernelPoint(0.4, 0.05)
    mean, var = kernel_mean_var(kp)
    hi = mean + 40.0 * math.sqrt(var) + 40.0 * kp.b
    m1 = adaptive_integral(lambda ts: ts * kernel_pdf_grid(kp, ts), 0.0, hi, 1e-12)
    m2 = adaptive_integral(lambda ts: ts**2 * kernel_pdf_grid(kp, ts), 0.0, hi, 1e-12)
    assert m1 == pytest.approx(mean, rel=1e-10)
    assert m2 - m1 * m1 == pytest.approx(var, rel=1e-8)


@pytest.mark.parametrize("x,b,expected", L2_TABLE)
def test_l2_integral_reference(x, b, expected):
    assert l2_integral(KernelPoint(x, b)) == pytest.approx(expected, rel=1e-12)


def test_l2_integral_matches_quadrature():
    for x, b in [(0.0, 0.1), (0.25, 0.05), (0.5, 0.02), (1.5, 0.2)]:
        kp = KernelPoint(x, b)
        mean, var = kernel_mean_var(kp)
        hi = mean + 40.0 * math.sqrt(var) + 40.0 * b
        quad = adaptive_integral(
            lambda ts: kernel_pdf_grid(kp, ts) ** 2, 0.0, hi, 1e-9 / b
        )
        assert quad == pytest.approx(l2_integral(kp), rel=1e-6)


def test_l2_ratio_identity():
    # the two closed forms agree to near machine precision for x > 0
    for x in (0.05, 0.25, 0.5, 1.0, 2.9):
        for b in (0.2, 0.05, 0.01, 0.001):
            kp = KernelPoint(x, b)
            assert l2_integral_ratio_form(kp) == pytest.approx(l2_integral(kp), rel=1e-10)


def test_tail_prob_is_regularized_gamma():
    kp = KernelPoint(0.3, 0.05)
    assert tail_prob(kp, 1.0) == pytest.approx(reg_gamma_upper(7.0, 20.0), rel=1e-13)
    assert tail_prob(KernelPoint(0.0, 0.25), 1.0) == pytest.approx(0.01831563888873418, rel=1e-12)


def test_tail_prob_matches_quadrature():
    kp = KernelPoint(0.5, 0.1)
    mean, var = kernel_mean_var(kp)
    hi = mean + 40.0 * math.sqrt(var) + 40.0 * kp.b
    mass = adaptive_integral(lambda ts: kernel_pdf_grid(kp, ts), 1.0, hi, 1e-12)
    assert tail_prob(kp, 1.0) == pytest.approx(mass, rel=1e-9)


def test_sup_envelope_grid():
    # sup_t K(x,t) * sqrt(b) * sqrt(x+b) <= 1, tight at x = 0
    for b in (0.2, 0.05, 0.01, 0.001):
        for x in np.linspace(0.0, 3.0, 31):
            kp = KernelPoint(float(x), b)
            sup = sup_on_unit_interval(kp)
            assert sup <= sup_envelope(kp) * (1.0 + 1e-12)
        kp0 = KernelPoint(0.0, b)
        assert sup_on_unit_interval(kp0) == pytest.approx(sup_envelope(kp0), rel=1e-14)


def test_l2_envelope_grid():
    # l2_integral * sqrt(b) * sqrt(x+b) <= 1/2, tight at x = 0
    for b in (0.2, 0.05, 0.01, 0.001):
        for x in np.linspace(0.0, 3.0, 31):
            kp = KernelPoint(float(x), b)
            assert l2_integral(kp) <= l2_envelope(kp) * (1.0 + 1e-12)
        kp0 = KernelPoint(0.0, b)
        assert l2_integral(kp0) == pytest.approx(l2_envelope(kp0), rel=1e-14)


def test_tail_envelope_beyond_three():
    # K(x, 1) <= e^{-c x / b} / sqrt(2 pi x b) for x >= 3
    for b in (0.2, 0.05, 0.01):
        for x in (3.0, 3.5, 4.0, 6.0, 10.0):
            kp = KernelPoint(x, b)
            assert kernel_pdf(kp, 1.0) <= tail_envelope(kp) * (1.0 + 1e-12)
    with pytest.raises(ValidationError):
        tail_envelope(KernelPoint(2.0, 0.1))


def test_chernoff_unit_tail_grid():
    # P(xi_x > 1) <= 2 exp(-(1 - ln 2)/(2b)) for all x in [0, 1/2]
    for b in (0.2, 0.1, 0.05, 0.02):
        bound = chernoff_unit_tail(b)
        for x in np.linspace(0.0, 0.5, 21):
            assert tail_prob(KernelPoint(float(x), b), 1.0) <= bound


@pytest.mark.parametrize("x,b,delta,expected", LOCAL_RATIO_TABLE)
def test_local_ratio_reference(x, b, delta, expected):
    assert local_ratio(KernelPoint(x, b), delta) == pytest.approx(expected, rel=1e-12)


def test_local_ratio_small_b_limit():
    # K(x, x + d sqrt(b)) / K(x, x) -> exp(-d^2/(2x)) as b -> 0
    x, delta = 0.5, 2.5
    limit = math.exp(-(delta**2) / (2.0 * x))
    # the leading correction is delta^3 sqrt(b)/(3 x^2), so rel 1e-3 needs
    # bandwidths well below 1e-8 at this (x, delta)
    vals = [local_ratio(KernelPoint(x, b), delta) for b in (1e-4, 1e-6, 1e-10)]
    errs = [abs(v - limit) for v in vals]
    assert errs[0] > errs[1] > errs[2]
    assert vals[-1] == pytest.approx(limit, rel=1e-3)


def test_local_ratio_is_kernel_quotient():
    for x, b, delta in [(0.5, 0.01, 1.0), (0.25, 0.02, -1.5), (1.0, 0.05, 2.0)]:
        kp = KernelPoint(x, b)
        direct = kernel_pdf(kp, x + delta * math.sqrt(b)) / kernel_pdf(kp, x)
        assert local_ratio(kp, delta) == pytest.approx(direct, rel=1e-12)


def test_sample_kernel_ks():
    # empirical CDF of draws vs 1 - tail_prob
    kp = KernelPoint(0.3, 0.05)
    rng = np.random.default_rng(1234)
    xs = np.sort(sample_kernel(kp, 20000, rng))
    grid = np.linspace(0.05, 1.2, 24)
    emp = np.searchsorted(xs, grid) / xs.size
    cdf = np.array([1.0 - tail_prob(kp, float(g)) for g in grid])
    # KS bound: critical value at alpha=0.001 is 1.95/sqrt(n) ~ 0.0138
    assert np.max(np.abs(emp - cdf)) < 0.0138


def test_sample_kernel_moments():
    kp = KernelPoint(0.5, 0.1)
    mean, var = kernel_mean_var(kp)
    rng = np.random.default_rng(99)
    xs = sample_kernel(kp, 40000, rng)
    se = math.sqrt(var / xs.size)
    assert abs(xs.mean() - mean) < 4.0 * se


def test_kernel_bounds_container():
    kb = kernel_bounds(KernelPoint(0.25, 0.05))
    assert kb.sup_bound > 0 and kb.l2_value > 0 and kb.tail_bound > 0
    assert kb.l2_value == pytest.approx(2.4609375, rel=1e-12)


def test_kernel_point_validation():
    with pytest.raises(ValidationError):
        KernelPoint(-0.1, 0.05)
    with pytest.raises(ValidationError):
        KernelPoint(0.5, 0.0)
    with pytest.raises(ValidationError):
        KernelPoint(0.5, 1.5)
