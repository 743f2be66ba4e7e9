import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orliczlab import fundamental as fu
from orliczlab import norms
from orliczlab.measures import SpaceSpec
from orliczlab.psi_calculus import psi_power


def brute_alpha_m(delta, alpha, m):
    p = np.geomspace(alpha, 1e5, 400000)
    return float(np.max(delta ** (1 / p) * p ** (-1 / m)))


def brute_abab(delta, a, b, alpha, beta):
    h = min((a + b) / 2, 2 * a)
    p = np.concatenate([a + (h - a) * np.geomspace(1e-9, 1, 200000),
                        b - (b - h) * np.geomspace(1e-9, 1, 200000)])
    return float(np.max(delta ** (1 / p) * norms.zeta_weight(p, a, b, alpha, beta)))


@pytest.mark.parametrize("alpha, m", [(2, 1), (2, 2), (5, 0.5), (1, 3)])
def test_alpha_m_against_brute_force(alpha, m):
    for delta in (1e-8, math.exp(-6), math.exp(-1), 0.5, 0.99):
        assert fu.phi_g_alpha_m(delta, alpha, m) == pytest.approx(brute_alpha_m(delta, alpha, m), rel=1e-6)


def test_alpha_m_branches():
    assert fu.phi_g_alpha_m(math.exp(-6), 2, 1, with_branch=True)[1] == "interior"
    assert fu.phi_g_alpha_m(0.5, 2, 1, with_branch=True)[1] == "endpoint"
    # value at delta = e^{-1}: endpoint branch 2^{-1} e^{-1/2}
    assert fu.phi_g_alpha_m(math.exp(-1), 2, 1) == pytest.approx(0.5 * math.exp(-0.5))


@pytest.mark.parametrize("a, b, alpha, beta", [(2, 4, 1, 1), (1, 5, 0.5, 2), (3, 4, 2, 0.5)])
def test_abab_against_brute_force(a, b, alpha, beta):
    for delta in (1e-12, 1e-4, 0.3, 1.0, 7.0, 1e3, 1e9):
        assert fu.phi_g_abab(delta, a, b, alpha, beta) == pytest.approx(
            brute_abab(delta, a, b, alpha, beta), rel=1e-6)


@pytest.mark.parametrize("a, b, alpha, beta", [(2, 4, 1, 1), (1, 5, 0.5, 2)])
def test_abab_continuous_at_switch_points(a, b, alpha, beta):
    d1, d2 = fu.delta_1(a, b, alpha), fu.delta_2(a, b, beta)
    for d in (d1, d2):
        lo = fu.phi_g_abab(d * (1 - 1e-13), a, b, alpha, beta)
        hi = fu.phi_g_abab(d * (1 + 1e-13), a, b, alpha, beta)
        assert abs(lo - hi) <= 1e-9 * hi


def test_stationary_points_reject_wrong_side():
    with pytest.raises(ValueError, match="right branch"):
        fu.p_2(2.0, 2, 4, 1)
    with pytest.raises(ValueError, match="left branch"):
        fu.p_1(2.0, 2, 4, 0)


def test_asymptotes_track_the_closed_form():
    a, b, alpha, beta = 2, 4, 1, 1
    for d in (1e-80, 1e-200):
        ratio = fu.abab_asymptotes(d, a, b, alpha, beta)["small"] / fu.phi_g_abab(d, a, b, alpha, beta)
        assert ratio == pytest.approx(1, rel=0.05)
    d = 1e150
    assert fu.abab_asymptotes(d, a, b, alpha, beta)["large"] / fu.phi_g_abab(d, a, b, alpha, beta) == pytest.approx(1, rel=0.05)


def test_empirical_curve_matches_closed_form():
    space = SpaceSpec("torus", 2 ** 14, grading="none")
    deltas = np.geomspace(math.exp(-6), math.exp(-1), 8)
    psi = psi_power(1)
    emp = fu.phi_empirical(lambda f: norms.g_psi(f, 2.0, psi, p_max=1e4, n=800), space, deltas)
    ref = np.array([fu.phi_g_alpha_m(d, 2.0, 1.0) for d in emp.measures])
    assert np.allclose(emp.values, ref, rtol=0.05)
    assert emp.quasi_concave(1e-6)


def test_curve_csv(tmp_path):
    curve = fu.closed_form_curve("G(alpha,m)", fu.delta_grid(1e-3, 1, 10), alpha=2, m=1)
    assert curve.quasi_concave()
    curve.write_csv(tmp_path / "c.csv")
    rows = (tmp_path / "c.csv").read_text().splitlines()
    assert rows[0] == "delta,value,branch" and len(rows) == len(curve.values) + 1
    with pytest.raises(ValueError):
        fu.FundamentalCurve([1.0], [1.0], "nonsense")


@settings(max_examples=40, deadline=None)
@given(alpha=st.floats(1, 8), m=st.floats(0.3, 4), d1=st.floats(-30, 3), d2=st.floats(-30, 3))
def test_quasi_concavity(alpha, m, d1, d2):
    lo, hi = sorted((math.exp(d1), math.exp(d2)))
    if hi <= lo * (1 + 1e-9):
        return
    f_lo, f_hi = fu.phi_g_alpha_m(lo, alpha, m), fu.phi_g_alpha_m(hi, alpha, m)
    assert f_lo <= f_hi * (1 + 1e-12)
    assert f_hi / hi <= f_lo / lo * (1 + 1e-12)
