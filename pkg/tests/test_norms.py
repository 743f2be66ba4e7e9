import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import gammaln

from orliczlab import catalog, norms
from orliczlab.fourier import SequenceData
from orliczlab.measures import GridFunction, SpaceSpec, sample
from orliczlab.psi_calculus import n_mr, n_power, psi_power

UNIFORM = SpaceSpec("torus", 256, grading="none")


def const(c, space=UNIFORM):
    return GridFunction(space, np.full(space.resolution, float(c)))


def test_lp_of_constant_and_monotone_in_p():
    assert norms.lp(const(3), 7) == pytest.approx(3.0)
    f = sample(lambda x: 1 + np.cos(x), UNIFORM)
    curve = norms.lp_curve(f, [1, 2, 4, 8, 64])
    assert np.all(np.diff(curve) > 0)
    assert curve[1] == pytest.approx(math.sqrt(1.5), rel=1e-12)


def test_orlicz_constant_against_calculus():
    # inf_v (1 + v^2 c^2)/v = 2c for N(u) = u^2 on a probability space
    r = norms.orlicz(const(3), n_power(2))
    assert r.value == pytest.approx(6.0, rel=1e-9)
    assert r.argmin_v == pytest.approx(1 / 3, rel=1e-5)
    assert norms.orlicz(const(0), n_power(2)).value == 0.0


def test_orlicz_exponential_of_constant():
    # N(u) = e^u - 1: minimise (e^{vc}) / v -> v = 1/c, value e c
    r = norms.orlicz(const(2), n_mr(1))
    assert r.value == pytest.approx(2 * math.e, rel=1e-8)


def test_moments_of_g_m_match_gamma():
    space = SpaceSpec("torus", 2 ** 14, ratio=1.25)
    p = np.array([2.0, 8.0, 32.0, 64.0])
    for m in (1, 2):
        f = catalog.make("g_m", m=m).sample(space)
        exact = np.exp(gammaln(p / m + 1) / p)
        assert np.allclose(norms.lp_curve(f, p), exact, rtol=0.02)


def test_layer_cake_matches_lp():
    f = sample(lambda x: np.abs(np.sin(x)) ** 0.3 + 0.1, SpaceSpec("torus", 2 ** 12, grading="none"))
    for p in (1.0, 2.0, 5.0):
        assert norms.layer_cake(f, p) == pytest.approx(norms.lp(f, p), rel=2e-3)


def test_g_psi_of_constant_is_attained_at_alpha():
    r = norms.g_psi(const(2), 3.0, psi_power(1))
    assert r.value == pytest.approx(2 / 3)
    assert r.argmax_p == pytest.approx(3.0)
    assert not r.possibly_infinite


def test_g_psi_flags_growth_at_top():
    f = catalog.make("g_m", m=1).sample(SpaceSpec("torus", 2 ** 12, ratio=1.25))
    r = norms.g_psi(f, 2.0, psi_power(2), p_max=64)
    assert r.possibly_infinite


def test_g_abab_constant_and_weight():
    a, b, al, be = 2.0, 5.0, 1.0, 2.0
    h = min((a + b) / 2, 2 * a)
    r = norms.g_abab(const(1), a, b, al, be)
    assert r.value == pytest.approx(max((h - a) ** al, (b - h) ** be), rel=1e-6)
    assert norms.zeta_weight(2.5, a, b, al, be) == pytest.approx(0.5)


def test_sequence_norms():
    c = SequenceData(np.array([-2, 0, 3]), np.array([1.0, 2.0, -2.0]))
    assert norms.seq_lp(c, 2) == pytest.approx(3.0)
    # nu weight: |n|^(p-2) + 1, with 0^0 = 1 at p = 2
    assert norms.seq_lp_nu(c, 2) == pytest.approx(math.sqrt(2 * 9))
    assert norms.seq_lp_nu(c, 4) == pytest.approx((1 * 5 + 16 * 1 + 16 * 10) ** 0.25)
    with pytest.raises(ValueError):
        norms.seq_lp_nu(c, 1.5)


def test_lp_nu_on_line():
    s = SpaceSpec("line-nu", 2 ** 14, truncation=30.0, grading="none")
    f = sample(lambda x: np.exp(-x * x), s)
    # int |x|^2 e^{-4x^2} dx = sqrt(pi)/16
    assert norms.lp_nu(f, 4) == pytest.approx((math.sqrt(math.pi) / 16) ** 0.25, rel=1e-6)
    with pytest.raises(ValueError):
        norms.lp_nu(sample(np.cos, UNIFORM), 4)


def test_orlicz_flags_function_outside_the_space():
    space = SpaceSpec("torus", 2 ** 16, ratio=1.1)
    g1 = catalog.make("g_m", m=1).sample(space)
    assert norms.orlicz(g1, n_mr(2)).infinite
    assert math.isfinite(norms.orlicz(g1, n_mr(1)).value)


def test_fit_tail_bound_and_membership():
    space = SpaceSpec("torus", 2 ** 14, ratio=1.25)
    g2 = catalog.make("g_m", m=2).sample(space)
    out = norms.fit_tail_bound(g2, n_mr(2))
    assert out["ok"] and out["heldout_max_ratio"] <= 1
    assert norms.membership_proxy(g2, psi_power(2))[0] == "finite"
    assert norms.membership_proxy(g2, psi_power(4))[0] == "infinite"
    # this grid bottoms out at |g_2| ~ 26, so moments are trustworthy for p << 26^2
    assert norms.l0_test(g2, psi_power(1), p_max=500) == "in-L0"
    assert norms.l0_test(g2, psi_power(2), p_max=500) == "not-in-L0"


vectors = st.lists(st.floats(-50, 50, allow_nan=False), min_size=16, max_size=16)
SMALL = SpaceSpec("torus", 16, grading="none")


@settings(max_examples=40, deadline=None)
@given(x=vectors, y=vectors, lam=st.floats(0.01, 100))
def test_orlicz_is_a_norm(x, y, lam):
    N = n_mr(1)
    f, g = GridFunction(SMALL, np.array(x)), GridFunction(SMALL, np.array(y))
    nf, ng = norms.orlicz(f, N).value, norms.orlicz(g, N).value
    assert norms.orlicz(f + g, N).value <= (nf + ng) * (1 + 1e-7) + 1e-12
    assert norms.orlicz(f * lam, N).value == pytest.approx(lam * nf, rel=1e-6, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(x=vectors, y=vectors)
def test_g_psi_triangle_inequality(x, y):
    psi = psi_power(1)
    f, g = GridFunction(SMALL, np.array(x)), GridFunction(SMALL, np.array(y))
    lhs = norms.g_psi(f + g, 2.0, psi, p_max=64, n=40).value
    rhs = norms.g_psi(f, 2.0, psi, p_max=64, n=40).value + norms.g_psi(g, 2.0, psi, p_max=64, n=40).value
    assert lhs <= rhs * (1 + 1e-12) + 1e-12
