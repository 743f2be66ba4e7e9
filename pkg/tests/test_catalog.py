import json
import math

import numpy as np
import pytest
from scipy.integrate import quad

from orliczlab import catalog, fourier
from orliczlab.catalog import z_bracket, z_series
from orliczlab.measures import SpaceSpec


@pytest.mark.parametrize("m", [1, 2, 3])
def test_g_m_moments_against_quadrature(m):
    item = catalog.make("g_m", m=m)
    for p in (2.0, 5.0, 12.0):
        # substitute y = x/2pi; integrate |log y|^{p/m} on (0, 1)
        val = quad(lambda y: abs(math.log(y)) ** (p / m), 0, 1, limit=200)[0]
        assert item.moments(p) == pytest.approx(val ** (1 / p), rel=1e-8)


def test_f_ab_moments_against_quadrature():
    item = catalog.make("f_ab", a=2, b=4)
    p = 3.0
    val = quad(lambda x: x ** (-p / 4), 0, 1)[0] + quad(lambda x: x ** (-p / 2), 1, np.inf)[0]
    assert item.moments(p) == pytest.approx(val ** (1 / p), rel=1e-8)
    assert math.isinf(item.moments(4.5))
    with pytest.raises(ValueError):
        catalog.make("f_ab", a=3, b=2)


def test_z_series_truncated_equals_direct_sum():
    x = np.array([0.01, 0.3, 1.7, -0.4])
    n = np.arange(8, 3001)
    direct = np.sin(np.outer(x, n)) @ (np.log(n) / n)
    assert np.allclose(z_series(x, "log", n_max=3000, tail=False), direct, atol=1e-12)


def test_z_series_tail_against_long_direct_sum():
    x = np.array([0.05, 0.5, 2.0])
    n = np.arange(8, 2 ** 21 + 1, dtype=float)
    a = np.log(n) / n
    direct = np.array([np.sum(a * np.sin(n * xi)) for xi in x])
    # the remainder after 2^21 terms is of size a(2^21)/x
    assert np.allclose(z_series(x, "log", n_max=2 ** 21, tail=False), direct, atol=1e-8)
    full = z_series(x, "log")
    assert np.allclose(full, direct, atol=30 * math.log(2 ** 21) / 2 ** 21 / x.min())


def test_z_log_bracket_and_oddness():
    lo, hi = z_bracket("log")
    assert 0 < lo <= hi < 2
    x = np.array([0.1, 1.0, 2.5])
    assert np.allclose(z_series(-x, "loglog"), -z_series(x, "loglog"))


def test_z_coefficients_reproduce_samples():
    item = catalog.make("z_L", L="log", n_max=200, tail=False)
    x = np.linspace(0.2, 3.0, 7)
    assert np.allclose(fourier.synthesize(item.coefficients, x), item(x), atol=1e-12)


@pytest.mark.parametrize("k", [2, 3])
def test_bernoulli_closed_forms(k):
    item = catalog.make("bernoulli", k=k)
    x = np.array([0.3, 2.0, 5.5])
    n = np.arange(1, 200001, dtype=float)
    trig = np.cos if k == 2 else np.sin
    direct = np.array([np.sum(trig(n * xi) / n ** k) for xi in x])
    assert np.allclose(item(x), direct, atol=1e-5)
    assert np.allclose(fourier.synthesize(item.coefficients, x), item(x), atol=1e-8)


def test_poisson_coefficients():
    f = catalog.make("poisson", r=0.5).sample(SpaceSpec("torus", 2 ** 10, grading="none"))
    c = fourier.coeffs(f, 6)
    assert np.allclose([c[n].real for n in range(-6, 7)], 0.5 ** np.abs(np.arange(-6, 7)))


def test_random_trig_is_reproducible():
    a = catalog.random_trig(7, 16)
    b = catalog.random_trig(7, 16)
    c = catalog.random_trig(8, 16)
    assert np.array_equal(a.values, b.values)
    assert not np.allclose(a.values, c.values)
    assert a.meta["coefficients"].is_hermitian()
    assert np.isrealobj(a.values)
    with pytest.raises(ValueError):
        catalog.random_trig(0, 4, coefficient_law="cauchy")


def test_listing_and_make():
    data = json.loads(catalog.listing())
    assert {d["name"] for d in data} == set(catalog.entries())
    assert len(data) >= 8
    with pytest.raises(ValueError, match="unknown catalog entry"):
        catalog.make("sinc")
