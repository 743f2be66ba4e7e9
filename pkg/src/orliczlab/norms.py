"""Norm functionals: Lebesgue, weighted Lebesgue, Orlicz, grand-Lebesgue type.

Sup-over-``p`` norms are taken on finite exponent grids.  When the supremum
sits at the grid edge that leans toward a singularity the report carries a
``possibly-infinite`` flag instead of a claim of divergence.

Functions accepted by the sup-type norms are either :class:`GridFunction`
instances or *moment profiles*: callables ``p -> |f|_p`` (handy when the
moments are known in closed form and no truncation should interfere).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy.special import logsumexp

from .measures import GridFunction, tail
from .psi_calculus import P_MAX_DEFAULT, P_POINTS_DEFAULT, trend_classify

__all__ = [
    "NormReport",
    "lp",
    "lp_curve",
    "lp_nu",
    "lp_nu_curve",
    "orlicz",
    "g_psi",
    "g_psi_nu",
    "g_abab",
    "zeta_weight",
    "seq_lp",
    "seq_lp_nu",
    "seq_g",
    "l0_test",
    "membership_proxy",
    "layer_cake",
    "fit_tail_bound",
    "fit_lower_moment",
    "INFINITE_THRESHOLD",
]

INFINITE_THRESHOLD = 1e12
V_SCAN = np.geomspace(1e-6, 1e6, 49)


@dataclass
class NormReport:
    value: float
    argmax_p: float | None = None
    argmin_v: float | None = None
    flags: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def infinite(self):
        return "infinite" in self.flags

    @property
    def possibly_infinite(self):
        return "possibly-infinite" in self.flags

    def to_json(self):
        data = asdict(self)
        if not math.isfinite(data["value"]):
            data["value"] = "inf"
        return json.dumps(data, sort_keys=True)


# --------------------------------------------------------------------------
# Lebesgue norms


def _log_moments(f, p_grid, nu=False):
    """``log sum_i w_i |f_i|^p`` (optionally times ``|x_i|^(p-2)``) per ``p``."""
    a = f.abs
    keep = a > 0
    if nu:
        keep &= f.nodes != 0
    if not keep.any():
        return np.full(len(p_grid), -np.inf)
    la = np.log(a[keep])
    lw = np.log(f.weights[keep])
    lx = np.log(np.abs(f.nodes[keep])) if nu else None
    out = np.empty(len(p_grid))
    for k, p in enumerate(p_grid):
        terms = lw + p * la
        if nu:
            terms = terms + (p - 2.0) * lx
        out[k] = logsumexp(terms)
    return out


def lp_curve(f, p_grid):
    """``|f|_p`` for every ``p`` in ``p_grid``."""
    p = np.atleast_1d(np.asarray(p_grid, dtype=float))
    if callable(f) and not isinstance(f, GridFunction):
        return np.asarray([f(q) for q in p], dtype=float)
    if np.any(p < 1):
        raise ValueError("p must be >= 1")
    return np.exp(_log_moments(f, p) / p)


def lp(f, p):
    """``|f|_p = (sum w |f|^p)^(1/p)`` evaluated in log space."""
    return float(lp_curve(f, [p])[0])


def lp_nu_curve(f, p_grid):
    p = np.atleast_1d(np.asarray(p_grid, dtype=float))
    if callable(f) and not isinstance(f, GridFunction):
        return np.asarray([f(q) for q in p], dtype=float)
    if f.space.kind != "line-nu":
        raise ValueError("the nu-weighted norm lives on a 'line-nu' space")
    if np.any(p < 2):
        raise ValueError("p must be >= 2 for the nu-weighted norm")
    return np.exp(_log_moments(f, p, nu=True) / p)


def lp_nu(f, p):
    """``[int |x|^(p-2) |f(x)|^p dx]^(1/p)``."""
    return float(lp_nu_curve(f, [p])[0])


# --------------------------------------------------------------------------
# Orlicz norm


def _orlicz_log_objective(a, lw, N, v):
    with np.errstate(over="ignore", invalid="ignore"):
        ln = N.log(v * a)
        s = logsumexp(lw + ln)
    return np.logaddexp(0.0, s) - math.log(v)


def _orlicz_core(a, lw, N, v_grid):
    lv = np.log(v_grid)
    objs = np.array([_orlicz_log_objective(a, lw, N, v) for v in v_grid])
    objs = np.where(np.isnan(objs), np.inf, objs)
    i = int(np.argmin(objs))
    if not np.isfinite(objs[i]) or objs[i] > math.log(INFINITE_THRESHOLD):
        return math.inf, None, i
    lo = lv[max(i - 1, 0)]
    hi = lv[min(i + 1, len(lv) - 1)]
    g = (math.sqrt(5) - 1) / 2
    x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
    f1 = _orlicz_log_objective(a, lw, N, math.exp(x1))
    f2 = _orlicz_log_objective(a, lw, N, math.exp(x2))
    for _ in range(80):
        if f1 > f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + g * (hi - lo)
            f2 = _orlicz_log_objective(a, lw, N, math.exp(x2))
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - g * (hi - lo)
            f1 = _orlicz_log_objective(a, lw, N, math.exp(x1))
        if hi - lo < 1e-10:
            break
    best_lv, best = (x1, f1) if f1 < f2 else (x2, f2)
    if objs[i] < best:
        best_lv, best = lv[i], objs[i]
    return math.exp(best), math.exp(best_lv), i


def orlicz(f, N, v_grid=None, truncation_check=True, sensitivity=0.1):
    """``inf_v v^-1 (1 + int N(v|f|))`` by a log-spaced scan plus golden refinement.

    The norm is reported infinite when the scan minimum exceeds 1e12, or, on
    grids that resolve tiny measures, when capping ``|f|`` at the level whose
    tail measure is ``sqrt(min weight)`` moves the value by more than
    ``sensitivity`` (the finite value is then an artefact of the grid floor).
    """
    a = f.abs
    keep = a > 0
    if not keep.any():
        return NormReport(0.0, argmin_v=None)
    a = a[keep]
    w = f.weights[keep]
    lw = np.log(w)
    v_grid = V_SCAN if v_grid is None else np.asarray(v_grid, dtype=float)
    # the scan is centred on |f| ~ 1; rescale then undo (the norm is homogeneous)
    scale = float(a.max())
    a = a / scale
    value, v_star, i = _orlicz_core(a, lw, N, v_grid)
    if not math.isfinite(value):
        return NormReport(math.inf, flags=["infinite"], diagnostics={"reason": "threshold"})
    flags = []
    if i in (0, len(v_grid) - 1):
        flags.append("scan-edge")
    diagnostics = {}
    w_min = float(w.min()) / f.space.total_measure
    if truncation_check and w_min < 1e-40:
        eps = math.sqrt(w_min) * f.space.total_measure
        order = np.argsort(a)[::-1]
        cum = np.cumsum(w[order])
        k = int(np.searchsorted(cum, eps))
        if k < a.size:
            cap = a[order[k]]
            capped, _, _ = _orlicz_core(np.minimum(a, cap), lw, N, v_grid)
            change = abs(value - capped) / value
            diagnostics = {"capped_value": capped * scale, "cap_level": float(cap) * scale,
                           "relative_change": change}
            if change > sensitivity:
                flags.append("infinite")
                diagnostics["grid_value"] = value * scale
                return NormReport(math.inf, argmin_v=v_star / scale, flags=flags,
                                  diagnostics=diagnostics)
    return NormReport(float(value) * scale, argmin_v=float(v_star) / scale, flags=flags,
                      diagnostics=diagnostics)


# --------------------------------------------------------------------------
# sup-over-p norms


def _sup_report(p, values, growth_edges=("high",)):
    values = np.asarray(values, dtype=float)
    k = int(np.argmax(values))
    flags = []
    if "high" in growth_edges and k == len(p) - 1:
        flags.append("possibly-infinite")
    if "low" in growth_edges and k == 0:
        flags.append("possibly-infinite")
    return NormReport(float(values[k]), argmax_p=float(p[k]), flags=flags,
                      diagnostics={"p_min": float(p[0]), "p_max": float(p[-1]),
                                   "n_p": int(len(p))})


def _is_zero(f):
    return isinstance(f, GridFunction) and not np.any(f.values)


def g_psi(f, alpha, psi, p_max=P_MAX_DEFAULT, n=P_POINTS_DEFAULT, p_grid=None):
    """``sup_{p >= alpha} |f|_p / psi(p)`` on a log-spaced grid."""
    p = np.geomspace(alpha, p_max, n) if p_grid is None else np.asarray(p_grid, dtype=float)
    if _is_zero(f):
        return NormReport(0.0, argmax_p=float(p[0]))
    return _sup_report(p, lp_curve(f, p) / psi(p))


def g_psi_nu(f, alpha, psi, p_max=P_MAX_DEFAULT, n=P_POINTS_DEFAULT, p_grid=None):
    """``sup_{p >= alpha} |f|_p(nu) / psi(p)``."""
    if alpha < 2:
        raise ValueError("alpha must be >= 2 for the nu-weighted norm")
    p = np.geomspace(alpha, p_max, n) if p_grid is None else np.asarray(p_grid, dtype=float)
    if _is_zero(f):
        return NormReport(0.0, argmax_p=float(p[0]))
    return _sup_report(p, lp_nu_curve(f, p) / psi(p))


def zeta_weight(p, a, b, alpha, beta):
    """``(p-a)^alpha`` on ``(a, h)`` and ``(b-p)^beta`` on ``[h, b)``, ``h = min((a+b)/2, 2a)``."""
    p = np.asarray(p, dtype=float)
    h = min(0.5 * (a + b), 2.0 * a)
    return np.where(p < h, (p - a) ** alpha, (b - p) ** beta)


def _two_sided_grid(a, b, n=60, eps=1e-8):
    h = min(0.5 * (a + b), 2.0 * a)
    s = np.geomspace(eps, 1.0, n)
    left = a + (h - a) * s
    right = b - (b - h) * s[::-1]
    return np.unique(np.concatenate([left, right[right > h]]))


def g_abab(f, a, b, alpha, beta, n=60, eps=1e-8):
    """``sup_{a<p<b} |f|_p zeta(p)``, grid graded geometrically toward both ends."""
    if not 1 <= a < b:
        raise ValueError("need 1 <= a < b")
    p = _two_sided_grid(a, b, n, eps)
    if _is_zero(f):
        return NormReport(0.0, argmax_p=float(p[0]))
    vals = lp_curve(f, p) * zeta_weight(p, a, b, alpha, beta)
    return _sup_report(p, vals, growth_edges=("low", "high"))


# --------------------------------------------------------------------------
# sequence norms


def _seq_arrays(c):
    n = np.asarray(c.support, dtype=float)
    v = np.abs(np.asarray(c.values))
    keep = v > 0
    return n[keep], v[keep]


def seq_lp(c, p):
    n, v = _seq_arrays(c)
    if v.size == 0:
        return 0.0
    return float(np.exp(logsumexp(p * np.log(v)) / p))


def seq_lp_nu(c, p):
    """``[sum |c(n)|^p (|n|^(p-2) + 1)]^(1/p)`` (with ``0^0 = 1``)."""
    if p < 2:
        raise ValueError("p must be >= 2")
    n, v = _seq_arrays(c)
    if v.size == 0:
        return 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        log_pow = np.where(n == 0, 0.0 if p == 2 else -np.inf, (p - 2) * np.log(np.abs(n)))
    log_w = np.logaddexp(log_pow, 0.0)
    return float(np.exp(logsumexp(p * np.log(v) + log_w) / p))


def seq_g(c, variant, psi=None, a=1.0, b=2.0, alpha=1.0, p_max=P_MAX_DEFAULT,
          n=P_POINTS_DEFAULT):
    """Discrete grand norms.

    ``variant='g(psi,nu)'``: ``sup_{p>=2} |c|_p(nu) / psi(p)``.
    ``variant='g(a,alpha)'``: ``sup_{a<p<b} |c|_p (p-a)^alpha`` (the
    ``beta = 0`` member of the ``g(a,b,alpha,beta)`` family).
    """
    if variant == "g(psi,nu)":
        p = np.geomspace(2.0, p_max, n)
        vals = np.array([seq_lp_nu(c, q) for q in p]) / psi(p)
        return _sup_report(p, vals)
    if variant == "g(a,alpha)":
        if a < 1:
            raise ValueError("a must be >= 1")
        p = a + (b - a) * np.geomspace(1e-8, 1.0, 60)[:-1]
        vals = np.array([seq_lp(c, q) for q in p]) * (p - a) ** alpha
        return _sup_report(p, vals, growth_edges=("low",))
    raise ValueError(f"unknown variant {variant!r}")


def l0_test(f, psi, p_max=P_MAX_DEFAULT, alpha=None, n=P_POINTS_DEFAULT):
    """Trend test of ``|f|_p / psi(p) -> 0``: ``'in-L0'``, ``'not-in-L0'``, ``'inconclusive'``."""
    lo = max(psi.alpha, 2.0) if alpha is None else alpha
    p = np.geomspace(lo, p_max, n)
    verdict = trend_classify(p, lp_curve(f, p) / psi(p))
    return {"to-zero": "in-L0", "bounded-below": "not-in-L0"}.get(verdict, "inconclusive")


def membership_proxy(f, psi, p_grid=None, slope_tol=0.05):
    """Decide ``sup_p |f|_p / psi(p) < inf`` from the trend of the ratio.

    ``'infinite'`` when the ratio peaks at the top of the grid and its log-log
    slope over the upper half of the grid exceeds ``slope_tol``; otherwise
    ``'finite'``.  Returns ``(verdict, slope, ratio)``.
    """
    p = np.geomspace(2.0, 128.0, 60) if p_grid is None else np.asarray(p_grid, dtype=float)
    r = lp_curve(f, p) / psi(p)
    upper = p >= p[len(p) // 2]
    slope = float(np.polyfit(np.log(p[upper]), np.log(r[upper]), 1)[0])
    growing = slope > slope_tol and int(np.argmax(r)) == len(p) - 1
    return ("infinite" if growing else "finite"), slope, r


# --------------------------------------------------------------------------
# tails and moments


def layer_cake(f, p, n_u=4000):
    """``p int_0^inf u^(p-1) T(|f|, u) du`` by quadrature in ``log u``.

    Independent of :func:`lp`: it only sees the distribution function.
    """
    a = f.abs
    top = a.max()
    if top == 0:
        return 0.0
    bottom = max(a[a > 0].min(), top * 1e-12)
    lu = np.linspace(math.log(bottom), math.log(top), n_u)
    u = np.exp(lu)
    T = tail(f, u)
    # below the smallest positive level the tail is constant
    head = tail(f, 0.0) * bottom ** p
    integrand = p * u ** p * T  # u^(p-1) du = u^p d(log u)
    return float(head + np.trapezoid(integrand, lu)) ** (1.0 / p)


def fit_tail_bound(f, N, u_grid=None, split=2, report=None):
    """Fit ``T(|f|,u) <= C12 / N(u / C13)`` and check it on held-out levels.

    ``C13`` is the reciprocal of the Orlicz minimiser (Chebyshev bound); ``C12``
    is the largest ratio seen on the training levels.  Returns a dict with the
    constants and the worst held-out ratio.  ``report`` may carry an already
    computed :func:`orlicz` result for ``(f, N)``.
    """
    rep = orlicz(f, N) if report is None else report
    if rep.infinite:
        return {"ok": False, "reason": "orlicz norm infinite"}
    c13 = 1.0 / rep.argmin_v
    if u_grid is None:
        top = f.abs.max()
        u_grid = np.geomspace(math.exp(2.0), top, 80) if top > math.exp(2.0) else np.array([])
    u_grid = np.asarray(u_grid, dtype=float)
    T = tail(f, u_grid) if u_grid.size else np.array([])
    keep = T > 0
    u_grid, T = u_grid[keep], T[keep]
    if u_grid.size < 2 * split:
        return {"ok": True, "C12": 0.0, "C13": c13, "heldout_max_ratio": 0.0,
                "n_levels": int(u_grid.size)}
    log_ratio = np.log(T) + N.log(u_grid / c13)
    train = np.arange(u_grid.size) % split == 0
    c12 = float(np.exp(log_ratio[train].max()))
    held = float(np.exp(log_ratio[~train].max())) / c12
    return {"ok": bool(held <= 1.0 + 1e-9), "C12": c12, "C13": c13,
            "heldout_max_ratio": held, "n_levels": int(u_grid.size)}


def fit_lower_moment(f, psi, p_range):
    """Largest ``C0`` with ``|f|_p >= C0 psi(p)`` over ``p_range``."""
    p = np.asarray(p_range, dtype=float)
    return float(np.min(lp_curve(f, p) / psi(p)))
