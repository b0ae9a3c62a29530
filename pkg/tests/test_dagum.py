import math

import numpy as np
import pytest
from oracles import central_moment_oracle, logx_quad, pwm_quad, raw_moment_quad

from dagum_qr.dagum import DagumParams

FIG1 = DagumParams(0.6396, 3.2403, 4961.36)
SHAPES = (0.1, 0.5, 1.0, 2.0, 5.0)


def test_params_validation():
    for bad in [(0, 1, 1), (1, -1, 1), (1, 1, 0), (float("nan"), 1, 1)]:
        with pytest.raises(ValueError):
            DagumParams(*bad)


def test_cdf_examples():
    assert DagumParams(1, 2, 3).cdf(3.0) == pytest.approx(0.5, abs=1e-15)
    assert DagumParams(1, 2, 3).cdf(0.0) == 0.0
    assert DagumParams(1, 2, 3).cdf(-5.0) == 0.0
    assert FIG1.cdf(4961.36) == pytest.approx(2 ** -0.6396, rel=1e-14)
    assert FIG1.cdf(4961.36) == pytest.approx(0.6420, abs=2e-4)


def test_pdf_examples():
    assert DagumParams(1, 1, 1).pdf(1.0) == pytest.approx(0.25, rel=1e-15)
    assert DagumParams(2, 1, 1).pdf(1e-12) == pytest.approx(0.0, abs=1e-10)
    assert DagumParams(1, 2, 1).pdf(2.0) == pytest.approx(0.16, rel=1e-14)
    assert DagumParams(1, 2, 1).pdf(-1.0) == 0.0


def test_quantile_examples():
    assert DagumParams(1, 2, 5).quantile(0.5) == pytest.approx(5.0, rel=1e-15)
    assert DagumParams(1, 1, 1).quantile(0.8) == pytest.approx(4.0, rel=1e-14)
    ratio = FIG1.quantile(0.8) / FIG1.quantile(0.2)
    # model ratio at the fitted parameters sits near the sample value 2.76
    assert ratio == pytest.approx(2.76, abs=0.05)


@pytest.mark.parametrize("q", [0.0, 1.0, -0.1, 1.5])
def test_quantile_domain(q):
    with pytest.raises(ValueError):
        DagumParams(1, 1, 1).quantile(q)


@pytest.mark.parametrize("a", SHAPES)
@pytest.mark.parametrize("v", SHAPES)
@pytest.mark.parametrize("lam", [1.0, 4961.36])
def test_round_trip_cdf_quantile(a, v, lam):
    p = DagumParams(a, v, lam)
    q = np.linspace(0.01, 0.99, 99)
    x = p.quantile(q)
    assert np.max(np.abs(p.cdf(x) - q)) <= 1e-10
    assert np.all(np.diff(x) > 0)


def test_quantile_extreme_tail_stays_finite():
    p = DagumParams(0.05, 2.0, 1.0)
    x = p.quantile(np.array([1e-300, 1e-12, 1 - 1e-12]))
    assert np.all(np.isfinite(x)) and np.all(x >= 0)


@pytest.mark.parametrize("a", SHAPES)
@pytest.mark.parametrize("v", SHAPES)
def test_pdf_matches_numeric_cdf_derivative(a, v):
    p = DagumParams(a, v, 3.0)
    for q in (0.05, 0.3, 0.5, 0.7, 0.95):
        x = p.quantile(q)
        h = x * 1e-5
        deriv = (p.cdf(x + h) - p.cdf(x - h)) / (2 * h)
        assert p.pdf(x) == pytest.approx(deriv, rel=1e-6)


@pytest.mark.parametrize("a", SHAPES)
@pytest.mark.parametrize("v", SHAPES)
def test_pdf_integrates_to_one(a, v):
    p = DagumParams(a, v, 2.0)
    assert logx_quad(lambda x, t: 0.0, p) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("c", [0.01, 7.0, 1e4])
def test_quantile_scale_equivariance(c):
    p = DagumParams(0.7, 2.5, 3.0)
    q = np.linspace(0.05, 0.95, 19)
    np.testing.assert_allclose(p.scaled(c).quantile(q), c * p.quantile(q), rtol=1e-13)


def test_sampling():
    p = DagumParams(1, 2, 5)
    assert p.quantile(np.array([0.5]))[0] == pytest.approx(5.0)
    a = p.sample(np.random.default_rng(11), 10)
    b = p.sample(np.random.default_rng(11), 10)
    np.testing.assert_array_equal(a, b)
    assert p.sample(np.random.default_rng(0), 0).shape == (0,)


def test_sample_glivenko_cantelli():
    p = DagumParams(1, 3, 1)
    x = np.sort(p.sample(np.random.default_rng(2024), 100_000))
    n = x.size
    F = p.cdf(x)
    d = max(np.max(np.arange(1, n + 1) / n - F), np.max(F - np.arange(n) / n))
    assert d < 0.01


def test_raw_moment_examples():
    assert DagumParams(1, 2, 1).raw_moment(1) == pytest.approx(math.pi / 2, rel=1e-13)
    base = DagumParams(1.3, 5.0, 1.0)
    for m in (1, 2, 3, 4):
        assert base.scaled(3.5).raw_moment(m) == pytest.approx(3.5**m * base.raw_moment(m), rel=1e-13)
    with pytest.raises(ValueError, match="does not exist"):
        DagumParams(1, 1, 1).raw_moment(1)


MOMENT_GRID = [(0.1, 5.0), (0.5, 4.5), (1.0, 6.0), (2.0, 5.0), (5.0, 10.0), (0.6396, 3.2403)]


@pytest.mark.parametrize("a,v", MOMENT_GRID)
def test_raw_moment_vs_quadrature(a, v):
    p = DagumParams(a, v, 2.0)
    for m in range(1, 5):
        if m >= v:
            continue
        assert p.raw_moment(m) == pytest.approx(raw_moment_quad(p, m), rel=1e-6)


def test_pwm_examples():
    p = DagumParams(1, 2, 1)
    assert p.pwm(0) == pytest.approx(p.raw_moment(1), rel=1e-14)
    # mpmath quadrature of x F(x) f(x): 3 pi / 8
    assert p.pwm(1) == pytest.approx(1.1780972450961724, rel=1e-13)
    assert DagumParams(0.5, 2, 1).pwm(2) == pytest.approx(2.0 / 3.0, rel=1e-13)
    with pytest.raises(ValueError, match="mean does not exist"):
        DagumParams(1, 1, 1).pwm(0)


@pytest.mark.parametrize("a,v", MOMENT_GRID + [(0.5, 1.5), (2.0, 1.2)])
def test_pwm_vs_quadrature(a, v):
    p = DagumParams(a, v, 3.0)
    for m in range(4):
        assert p.pwm(m) == pytest.approx(pwm_quad(p, m), rel=1e-6)


def test_mode():
    assert DagumParams(2, 1, 1).mode() == pytest.approx(0.5)
    assert DagumParams(1, 1, 1).mode() is None
    assert DagumParams(0.2, 2, 1).mode() is None
    p = DagumParams(1, 3, 2)
    assert p.mode() == pytest.approx(2 * 0.5 ** (1 / 3), rel=1e-14)
    # numeric maximization of the density
    x = np.linspace(0.5, 3.0, 2_000_001)
    assert x[np.argmax(p.pdf(x))] == pytest.approx(p.mode(), abs=2e-6)


@pytest.mark.parametrize("a,v", [(0.1, 5.0), (0.5, 4.5), (1.0, 6.0), (2.0, 5.0), (5.0, 10.0), (1.5, 8.0)])
def test_skewness_kurtosis_vs_central_moments(a, v):
    p = DagumParams(a, v, 7.0)
    skew, kurt = central_moment_oracle(a, v)
    assert p.skewness() == pytest.approx(skew, rel=1e-8)
    assert p.kurtosis() == pytest.approx(kurt, rel=1e-8)


def test_skewness_scale_invariant_and_domains():
    assert DagumParams(1, 5, 7).skewness() == pytest.approx(DagumParams(1, 5, 1).skewness(), rel=1e-14)
    with pytest.raises(ValueError):
        DagumParams(1, 3, 1).skewness()
    with pytest.raises(ValueError):
        DagumParams(1, 4, 1).kurtosis()
