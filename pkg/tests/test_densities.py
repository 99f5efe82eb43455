"""Test densities: normalization, mollification, bumps, and smoothness scans."""

import math

import numpy as np
import pytest

from gkde.densities import (
    HolderClass,
    MirroredGamma,
    compensation_bump,
    density_from_json,
    endpoint_weight,
    gamma_pdf,
    holder_member_mirrored,
    holder_quotient_scan,
    linear_tilt,
    mirrored_gamma,
    molli_bump,
    molli_linear,
    molli_uniform,
    mollify,
    bump_density,
    raw_uniform,
    sample,
)
from gkde.errors import BandwidthTooLarge, ValidationError
from gkde.quadrature import adaptive_integral

MIRROR_NORM_TABLE = [
    (4.0, 0.2, 1.3605921906819178),
    (3.0, 0.2, 1.142402818373409),
    (1.5, 1.0, 2.338670906340012),
    (2.0, 0.5, 1.683518262783408),
    (1.0, 0.3, 1.0369937065900354),
]

_BREAKPOINTS = [0.25, 0.5, 0.75, 7.0 / 8.0, 29.0 / 32.0, 15.0 / 16.0]


def _mass(d, tol=1e-11):
    return adaptive_integral(
        lambda ts: np.asarray(d.pdf(ts)), 0.0, 1.0, tol, breakpoints=_BREAKPOINTS
    )


def test_gamma_pdf_reference():
    assert gamma_pdf(1.0, 0.2, 0.1) == pytest.approx(3.032653298563167, rel=1e-13)
    # s = 0 boundary cases by shape
    assert gamma_pdf(1.0, 0.5, 0.0) == 2.0
    assert gamma_pdf(2.0, 0.5, 0.0) == 0.0
    assert math.isinf(gamma_pdf(0.5, 0.5, 0.0))


def test_holder_class_derived_order():
    assert HolderClass(beta=0.5, L=2.0).m == 0
    assert HolderClass(beta=1.0, L=2.0).m == 0
    assert HolderClass(beta=1.5, L=2.0).m == 1
    assert HolderClass(beta=2.0, L=2.0).m == 1
    with pytest.raises(ValidationError):
        HolderClass(beta=0.0, L=2.0)
    with pytest.raises(ValidationError):
        HolderClass(beta=1.0, L=0.0)


def test_endpoint_weight_shape():
    xs = np.array([0.0, 0.5, 7.0 / 8.0, 0.9, 0.95, 1.0, 1.1])
    w = endpoint_weight(xs)
    assert np.all(w[:3] == 1.0)
    assert 0.0 < w[3] < 1.0 and 0.0 < w[4] < w[3]
    assert w[5] == 0.0 and w[6] == 0.0
    assert np.all(np.diff(w) <= 1e-15)


def test_compensation_bump_unit_mass():
    mass = adaptive_integral(
        lambda ts: np.asarray(compensation_bump(ts)), 7.0 / 8.0, 1.0, 1e-13,
        breakpoints=[29.0 / 32.0],
    )
    assert mass == pytest.approx(1.0, abs=1e-11)
    # supported on [7/8, 15/16]: vanishes at and beyond both edges
    assert compensation_bump(7.0 / 8.0) == 0.0
    assert compensation_bump(15.0 / 16.0) == 0.0
    assert compensation_bump(0.95) == 0.0
    assert compensation_bump(29.0 / 32.0) > 0.0


@pytest.mark.parametrize(
    "d",
    [
        raw_uniform(),
        linear_tilt(2.0),
        linear_tilt(1.2),
        bump_density(2.0, 1e-4, 2.0),
        mirrored_gamma(4.0, 0.2),
        mirrored_gamma(1.5, 1.0),
        molli_uniform(),
        molli_linear(2.0),
        molli_bump(1.0, 1e-4, 2.0),
        bump_density(0.5, 5e-5, 1.5),
    ],
    ids=lambda d: d.kind,
)
def test_density_mass_is_one(d):
    assert _mass(d) == pytest.approx(1.0, abs=1e-9)


def test_density_nonnegative_and_zero_outside():
    xs = np.linspace(0.0, 1.0, 2001)
    beyond = np.array([1.0 + 1e-12, 1.5, 2.0])
    for d in [raw_uniform(), molli_linear(2.0), mirrored_gamma(4.0, 0.2),
              molli_bump(2.0, 1e-4, 2.0)]:
        assert np.all(np.asarray(d.pdf(xs)) >= 0.0)
        assert np.all(np.asarray(d.pdf(beyond)) == 0.0)


def test_raw_uniform_values():
    d = raw_uniform()
    assert float(d.pdf(np.array([0.3]))[0]) == 1.0
    assert d.sup_norm == 1.0


def test_linear_tilt_values():
    d = linear_tilt(2.0)
    # 1 + eps*(2x - 1) with eps = (L-1)/2 = 0.5
    assert float(d.pdf(np.array([0.5]))[0]) == pytest.approx(1.0, rel=1e-15)
    assert float(d.pdf(np.array([0.0]))[0]) == pytest.approx(0.5, rel=1e-15)
    assert float(d.pdf(np.array([1.0]))[0]) == pytest.approx(1.5, rel=1e-15)
    assert d.sup_norm == 1.5
    with pytest.raises(ValidationError):
        linear_tilt(1.0)


def test_bump_density_structure():
    beta, b, L = 2.0, 1e-4, 2.0
    d = bump_density(beta, b, L)
    hw = 3.0 * math.sqrt(b)
    amp = (L / 16.0) * hw**beta
    # flat outside the perturbation zone
    assert float(d.pdf(np.array([0.1]))[0]) == 1.0
    # first bump is a downward excursion centered at 1/4 + hw
    v = float(d.pdf(np.array([0.25 + hw]))[0])
    assert v == pytest.approx(1.0 - amp, rel=1e-12)
    # second bump points up
    v2 = float(d.pdf(np.array([0.25 + 3.0 * hw]))[0])
    assert v2 == pytest.approx(1.0 + amp, rel=1e-12)
    # bumps vanish at the shared edges
    assert float(d.pdf(np.array([0.25 + 2.0 * hw]))[0]) == pytest.approx(1.0, abs=1e-12)


def test_bump_density_rejects_large_bandwidth():
    with pytest.raises(BandwidthTooLarge):
        bump_density(2.0, 0.01, 2.0)


def test_mollified_matches_raw_below_seven_eighths():
    raw = linear_tilt(2.0)
    mol = molli_linear(2.0)
    xs = np.linspace(0.0, 7.0 / 8.0, 100)
    np.testing.assert_allclose(np.asarray(mol.pdf(xs)), np.asarray(raw.pdf(xs)), rtol=1e-14)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_mollified_derivatives_vanish_at_one(k):
    # finite-difference derivative of order k at 1 - h must vanish as h -> 0
    mol = molli_uniform()
    vals = []
    for j in (8, 10, 12):
        h = 2.0**-j
        step = h / (k + 1)
        pts = 1.0 - h + step * np.arange(-(k + 1), 1)
        fd = np.diff(np.asarray(mol.pdf(pts)), n=k) / step**k
        vals.append(abs(float(fd[-1])))
    assert vals[0] < 1e-2 or vals[2] < vals[0] * 0.1
    assert vals[2] < 1e-4


def test_mirrored_gamma_normalizers():
    for alpha, theta, expected in MIRROR_NORM_TABLE:
        d = mirrored_gamma(alpha, theta)
        assert d.c_norm == pytest.approx(expected, rel=1e-12)


def test_mirrored_gamma_pdf_values():
    d = mirrored_gamma(4.0, 0.2)
    # f(x) = c * g(1 - x)
    x = 0.3
    expected = 1.3605921906819178 * gamma_pdf(4.0, 0.2, 1.0 - x)
    assert float(d.pdf(np.array([x]))[0]) == pytest.approx(expected, rel=1e-13)
    assert float(d.pdf(np.array([1.0]))[0]) == 0.0


def test_mirrored_gamma_derivatives_match_fd():
    d = mirrored_gamma(4.0, 0.2)
    assert isinstance(d, MirroredGamma)
    h = 1e-6
    for x in (0.2, 0.55, 0.9):
        xs = np.array([x - h, x, x + h])
        f = np.asarray(d.pdf(xs))
        fd1 = (f[2] - f[0]) / (2.0 * h)
        fd2 = (f[2] - 2.0 * f[1] + f[0]) / h**2
        assert d.derivative(x, 1) == pytest.approx(fd1, rel=1e-8)
        assert d.derivative(x, 2) == pytest.approx(fd2, rel=1e-3)


def test_sampler_agrees_with_density():
    rng = np.random.default_rng(777)
    for d in [molli_linear(2.0), mirrored_gamma(4.0, 0.2)]:
        xs = sample(d, 20000, rng)
        assert xs.shape == (20000,)
        assert np.all((xs >= 0.0) & (xs <= 1.0))
        grid = np.linspace(0.0, 1.0, 201)
        f = np.asarray(d.pdf(grid))
        exact_mean = np.trapezoid(grid * f, grid)
        se = float(np.std(xs)) / math.sqrt(xs.size)
        assert abs(xs.mean() - exact_mean) < 5.0 * se + 1e-3


def test_sampler_deterministic_given_seed():
    d = mirrored_gamma(4.0, 0.2)
    a = sample(d, 100, np.random.default_rng(5))
    b = sample(d, 100, np.random.default_rng(5))
    np.testing.assert_array_equal(a, b)


def test_holder_member_predicate():
    assert holder_member_mirrored(4.0, 2.0)
    assert holder_member_mirrored(3.0, 2.0)
    assert holder_member_mirrored(1.5, 0.5)
    assert not holder_member_mirrored(1.5, 1.0)
    assert not holder_member_mirrored(2.0, 2.0)


def test_holder_quotient_scan_contrast():
    member = mirrored_gamma(4.0, 0.2)
    non = mirrored_gamma(1.5, 0.2)
    _, q_m, growth_m = holder_quotient_scan(member, 2.0)
    _, q_n, growth_n = holder_quotient_scan(non, 2.0)
    assert growth_m < 0.25
    assert growth_n > 0.5
    assert np.all(np.isfinite(q_m))


def test_json_round_trip():
    for d in [raw_uniform(), linear_tilt(1.7), bump_density(1.5, 1e-4, 2.0),
              mirrored_gamma(2.5, 0.3), molli_uniform(), molli_linear(2.0),
              molli_bump(2.0, 1e-4, 2.0)]:
        spec = d.to_json()
        d2 = density_from_json(spec)
        assert d2.kind == d.kind
        xs = np.linspace(0.0, 1.0, 57)
        np.testing.assert_allclose(np.asarray(d2.pdf(xs)), np.asarray(d.pdf(xs)), rtol=1e-14)


def test_density_from_json_validates():
    with pytest.raises(ValidationError):
        density_from_json({"kind": "NoSuchDensity", "params": {}})
    with pytest.raises(ValidationError):
        density_from_json({"params": {}})
