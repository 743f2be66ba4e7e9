import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orliczlab import catalog, fourier, norms
from orliczlab.measures import GridFunction, SpaceSpec, sample
from orliczlab.psi_calculus import psi_power

U = SpaceSpec("torus", 2 ** 10, grading="none")
G = SpaceSpec("torus", 2 ** 12, ratio=1.25)
LINE = SpaceSpec("line", 2 ** 12, truncation=30.0, grading="none")


def trig(x):
    return np.cos(2 * x) + np.sin(3 * x)


@pytest.mark.parametrize("space, tol", [(U, 1e-13), (G, 1e-4)])
def test_coefficients_sign_convention(space, tol):
    # c(n) = int e^{inx} f dx / 2pi, so sin 3x = (e^{3ix} - e^{-3ix})/2i gives c(3) = i/2
    c = fourier.coeffs(sample(trig, space), 4)
    assert abs(c[2] - 0.5) < tol and abs(c[-2] - 0.5) < tol
    assert abs(c[3] - 0.5j) < tol and abs(c[-3] + 0.5j) < tol
    assert abs(c[0]) < tol and abs(c[4]) < tol
    assert c.is_hermitian(1e-10)


def test_coefficient_of_single_exponential():
    f = sample(lambda x: np.exp(-2j * x), U)
    c = fourier.coeffs(f, 5)
    assert abs(c[2] - 1) < 1e-13
    assert np.sum(np.abs(c.values)) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ValueError):
        fourier.coeffs(f, U.resolution)


def test_partial_sum_is_a_projection():
    f = sample(lambda x: np.cos(x) + np.cos(5 * x), U)
    assert np.allclose(fourier.s_M(f, 2).values, np.cos(U.nodes), atol=1e-12)
    g = sample(lambda x: np.cos(x) + np.cos(5 * x), G)
    assert np.allclose(fourier.s_M(g, 2).values, np.cos(G.nodes), atol=1e-4)


def test_partial_sums_generator_matches_direct():
    f = sample(trig, U)
    c = fourier.coeffs(f, 8)
    for M, vals in fourier.partial_sums(c, U.nodes, [1, 2, 3, 8]):
        assert np.allclose(vals, fourier.s_M(f, M).values, atol=1e-12)


def test_conjugate_of_cos_is_sin():
    for k in (1, 4):
        H = fourier.hilbert(sample(lambda x: np.cos(k * x), U))
        assert np.max(np.abs(H.values - np.sin(k * U.nodes))) < 1e-12


def test_graded_conjugate_converges_first_order():
    errs = []
    for n in (2 ** 10, 2 ** 11, 2 ** 12):
        space = SpaceSpec("torus", n, ratio=1.25)
        H = fourier.hilbert(sample(lambda x: np.cos(4 * x), space))
        errs.append(np.max(np.abs(H.values - np.sin(4 * space.nodes))))
    rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(rates > 0.8)
    assert errs[-1] < 5e-3


def test_transform_of_gaussian():
    f = sample(lambda x: np.exp(-0.5 * x * x), LINE)
    t, F = fourier.fourier_transform(f)
    assert np.max(np.abs(F - math.sqrt(2 * math.pi) * np.exp(-0.5 * t * t))) < 1e-12
    assert t[1] - t[0] == pytest.approx(math.pi / 30.0)


def test_band_limit_keeps_low_frequencies():
    f = sample(lambda x: np.exp(-0.5 * x * x), LINE)
    assert np.max(np.abs(fourier.S_M(f, 20.0).values - f.values)) < 1e-12
    # dropping everything past t=1 must change a unit-width gaussian visibly
    assert np.max(np.abs(fourier.S_M(f, 1.0).values - f.values)) > 0.1


def test_haar_projection():
    f = sample(trig, U)
    assert np.allclose(fourier.haar_partial(f, 1).values, np.mean(f.values))
    assert np.allclose(fourier.haar_partial(f, U.resolution).values, f.values, atol=1e-12)
    # a step on the dyadic halves is reproduced by two Haar functions
    step = GridFunction(U, np.where(U.nodes < math.pi, 2.0, -1.0))
    assert np.allclose(fourier.haar_partial(step, 2).values, step.values)


def test_flags():
    M = np.geomspace(8, 4096, 30)
    assert fourier.floor_flag(np.full(30, 0.6))
    assert not fourier.floor_flag(1 / M)
    assert fourier.decay_flag(M, 1 / M)
    assert not fourier.decay_flag(M, 1 / M + 0.01 * np.sin(M))


def test_growth_report_smooth_function_converges():
    f = catalog.make("bernoulli", k=2).sample(SpaceSpec("torus", 2 ** 12, grading="none"))
    M = np.unique(np.geomspace(8, 1024, 12).astype(int))
    rep = fourier.growth_report(f, "s_M", np.geomspace(2, 64, 10), M, psi_power(1), d=0)
    assert rep.checks["bounded_across_M"]
    assert rep.metadata["decays_theta"] and not rep.metadata["non_convergent_psi_d"]
    assert rep.constants["riesz_ratio"]["value"] <= 2 * math.pi


real_coef = st.lists(st.floats(-5, 5, allow_nan=False), min_size=9, max_size=9)


@settings(max_examples=30, deadline=None)
@given(a=real_coef, b=real_coef)
def test_parseval_and_double_conjugate(a, b):
    n = np.arange(9)

    def expr(x):
        return np.cos(np.outer(x, n)) @ np.array(a) + np.sin(np.outer(x, n)) @ np.array(b)

    f = sample(expr, U)
    c = fourier.coeffs(f, 16)
    assert norms.lp(f, 2) ** 2 == pytest.approx(c.parseval(), rel=1e-10, abs=1e-10)
    HH = fourier.hilbert(fourier.hilbert(f))
    assert np.allclose(HH.values, -(f.values - np.mean(f.values)), atol=1e-9)
