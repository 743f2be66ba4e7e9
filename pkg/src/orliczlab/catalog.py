"""Named test functions with their known analytic properties attached.

Each entry builds a :class:`CatalogItem`: an evaluable function, the kind of
space it lives on, optional closed-form moments, and a list of expectation
records ``{"property", "value", "provenance"}``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from .fourier import SequenceData, _phases, synthesize
from .measures import GridFunction, SpaceSpec, sample

__all__ = ["CatalogItem", "make", "entries", "listing", "random_trig", "z_series",
           "slowly_varying"]

Z_DIRECT_TERMS = 2 ** 13
Z_START = 8


@dataclass
class CatalogItem:
    name: str
    params: dict
    kind: str
    evaluate: Callable
    expectations: list = field(default_factory=list)
    moments: Optional[Callable] = None
    coefficients: Optional[SequenceData] = None

    def __call__(self, x):
        return self.evaluate(np.asarray(x, dtype=float))

    def sample(self, space):
        if (space.kind == "torus") != (self.kind == "torus"):
            raise ValueError(f"{self.name} lives on a {self.kind} space, not {space.kind}")
        f = sample(self.evaluate, space, name=self.label)
        f.meta.update({"catalog": self.name, "params": self.params})
        return f

    @property
    def label(self):
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.name}({inner})"


def _expect(prop, value, provenance):
    return {"property": prop, "value": value, "provenance": provenance}


# --------------------------------------------------------------------------
# g_m


def _g_m(m=1.0):
    m = float(m)
    if m < 1:
        raise ValueError("g_m needs m >= 1")

    def ev(x):
        y = np.mod(x, 2 * math.pi) / (2 * math.pi)
        return np.abs(np.log(y)) ** (1.0 / m)

    def moments(p):
        return math.exp(gammaln(p / m + 1.0) / p)

    exp = [
        _expect("tail(u)", f"exp(-u^{m:g})", "analytic"),
        _expect("|f|_p", f"Gamma(p/{m:g}+1)^(1/p)", "analytic"),
        _expect("orlicz N_m", "finite", "analytic"),
        _expect(f"L0(N_{m:g})", "not in closure of bounded functions", "analytic"),
        _expect("conjugate growth exponent", (m + 1) / m, "analytic"),
        _expect("conjugate tail exponent", m / (m + 1), "analytic"),
    ]
    return CatalogItem("g_m", {"m": m}, "torus", ev, exp, moments)


# --------------------------------------------------------------------------
# f(a, b; x)


def _f_ab(a=2.0, b=4.0):
    a, b = float(a), float(b)
    if not 1 <= a < b:
        raise ValueError("f_ab needs 1 <= a < b")

    def ev(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(x < 1.0, x ** (-1.0 / b), x ** (-1.0 / a))
        return np.where(x > 0, out, 0.0)

    def moments(p):
        if not a < p < b:
            return math.inf
        return (b / (b - p) + a / (p - a)) ** (1.0 / p)

    exp = [
        _expect("|f|_p", "[b/(b-p) + a/(p-a)]^(1/p) on (a,b)", "analytic"),
        _expect("G(a,b,1,1)", "finite", "analytic"),
        _expect("G(a,b,alpha,beta) infinite", "alpha < 1/a or beta < 1/b", "derived"),
    ]
    return CatalogItem("f_ab", {"a": a, "b": b}, "line", ev, exp, moments)


# --------------------------------------------------------------------------
# z_L: sum_{n>=8} L(n)/n sin(nx)


def slowly_varying(name):
    if name == "log":
        return lambda y: np.log(y)
    if name == "loglog":
        return lambda y: np.log(y) * np.log(np.log(y))
    raise ValueError(f"unknown slowly varying function {name!r} (use 'log' or 'loglog')")


def _abel_tail(a, x, K, depth=4):
    """``sum_{n>=K} a(n) sin(nx)`` by repeated summation by parts.

    With ``E = exp(ix)``: ``S[a] = (a(K) E^K + E S[Delta a]) / (1 - E)``; the
    recursion stops after ``depth`` differences, whose sums are negligible
    once ``|1 - E|`` is of order one.
    """
    d = np.asarray(a(K + np.arange(depth + 1, dtype=float)), dtype=float)
    heads = []
    for _ in range(depth):
        heads.append(d[0])
        d = np.diff(d)
    E = complex(math.cos(x), math.sin(x))
    EK = complex(math.cos(x * K), math.sin(x * K))
    S = 0j
    for h in reversed(heads):
        S = (h * EK + E * S) / (1 - E)
    return S.imag


ABEL_PHASE = 800.0
ABEL_MIN_X = 0.1
_GL_T, _GL_W = np.polynomial.legendre.leggauss(8)


def _derivatives(a, K):
    """``a, a', a'', a'''`` at ``K`` (scalar or array) from a centred stencil of width ``K/1000``."""
    K = np.asarray(K, dtype=float)
    h = K * 1e-3
    av = a(K[..., None] + h[..., None] * np.arange(-3, 4))
    av = np.moveaxis(av, -1, 0)
    with np.errstate(over="ignore"):  # huge K: the higher terms just vanish
        return (av[3], (av[4] - av[2]) / (2 * h), (av[4] - 2 * av[3] + av[2]) / h ** 2,
                (av[5] - 2 * av[4] + 2 * av[2] - av[1]) / (2 * h ** 3))


def _em_boundary(a, x, K):
    """Euler-Maclaurin end terms of ``sum_{n>=K} a(n) sin(nx)``, up to the third derivative."""
    a0, a1, a2, a3 = _derivatives(a, K)
    e = np.exp(1j * x * K)
    d1 = np.imag((a1 + 1j * x * a0) * e)
    d3 = np.imag((a3 + 3j * x * a2 - 3 * x * x * a1 - 1j * x ** 3 * a0) * e)
    return 0.5 * a0 * np.sin(x * K) - d1 / 12.0 + d3 / 720.0


def _gauss_panels(lo, hi, n_panels):
    """Nodes and weights of ``n_panels`` Gauss-Legendre panels on each ``[lo_i, hi_i]``."""
    edges = lo[:, None] + (hi - lo)[:, None] * np.linspace(0, 1, n_panels + 1)
    mid = 0.5 * (edges[:, 1:] + edges[:, :-1])
    half = 0.5 * (edges[:, 1:] - edges[:, :-1])
    nodes = (mid[:, :, None] + half[:, :, None] * _GL_T).reshape(lo.size, -1)
    weights = (half[:, :, None] * _GL_W).reshape(lo.size, -1)
    return nodes, weights


def _sin_integral(a, x, K, chunk=128):
    """``int_K^inf a(y) sin(xy) dy`` for slowly decaying ``a``, vectorised over ``x < 0.1``.

    With ``u = xy`` the head runs over ``u`` up to 800: Gauss panels in
    ``log u`` below 1 (levels under ``e^-45`` contribute nothing), uniform
    panels above.  Beyond ``Y = max(K, 800/x)`` repeated integration by parts
    gives an expansion in powers of ``1/(xY)``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    Y = np.maximum(float(K), ABEL_PHASE / x)
    head = np.zeros(x.shape)
    for s in range(0, x.size, chunk):
        xs = x[s:s + chunk]
        u_lo = np.minimum(xs * K, ABEL_PHASE)
        # u in [u_lo, 1], integrand in t = log u
        t_lo = np.maximum(np.log(u_lo), -45.0)
        low = t_lo < 0
        if low.any():
            t, w = _gauss_panels(t_lo[low], np.zeros(low.sum()), 64)
            u = np.exp(t)
            xl = xs[low, None]
            head[s:s + chunk][low] += np.sum(w * a(u / xl) * np.sin(u) * u / xl, axis=1)
        b_lo = np.maximum(u_lo, 1.0)
        mid = b_lo < ABEL_PHASE
        if mid.any():
            u, w = _gauss_panels(b_lo[mid], np.full(mid.sum(), ABEL_PHASE), 512)
            xm = xs[mid, None]
            head[s:s + chunk][mid] += np.sum(w * a(u / xm) * np.sin(u) / xm, axis=1)
    far = np.zeros(x.shape, dtype=complex)
    for j, dj in enumerate(_derivatives(a, Y)):
        term = (-1) ** j * np.asarray(dj, dtype=complex)
        for _ in range(j + 1):  # divide stepwise: x**4 underflows near x ~ 1e-300
            term = term / (1j * x)
        far += term
    return head + np.imag(-np.exp(1j * x * Y) * far)


def _small_x_tail(a, x, K):
    return _sin_integral(a, x, K) + _em_boundary(a, x, K)


def _series_tail(a, x, K):
    """``sum_{n>=K} a(n) sin(n x)`` for ``0 < x <= pi``.

    For ``x >= 0.1``: direct terms up to ``800/x``, then summation by parts.
    Below that the differences of ``a`` are lost to rounding long before
    ``|1 - exp(ix)|`` is of order one, so Euler-Maclaurin takes over.
    """
    if x >= ABEL_MIN_X:
        K2 = max(int(K), math.ceil(ABEL_PHASE / x))
        n = np.arange(int(K), K2, dtype=float)
        return float(np.sum(a(n) * np.sin(n * x))) + _abel_tail(a, x, K2)
    return float(_small_x_tail(a, np.array([x]), K)[0])


@lru_cache(maxsize=16)
def _z_cached(x_bytes, L, n_max, tail):
    x = np.frombuffer(x_bytes, dtype=float)
    Lf = slowly_varying(L)

    def a(y):
        return Lf(y) / y

    y = np.mod(x, 2 * math.pi)
    sign = np.where(y > math.pi, -1.0, 1.0)
    y = np.where(y > math.pi, 2 * math.pi - y, y)
    K0 = min(n_max + 1, Z_DIRECT_TERMS)
    n = np.arange(Z_START, K0, dtype=float)
    an = a(n)
    out = np.zeros(y.shape)
    for s in range(0, n.size, 256):
        out += _phases(y, n[s:s + 256], 1).imag @ an[s:s + 256]
    if K0 <= n_max or tail:
        small = (y > 0) & (y < ABEL_MIN_X)
        if small.any():
            extra = _small_x_tail(a, y[small], K0)
            if not tail:
                extra -= _small_x_tail(a, y[small], n_max + 1)
            out[small] += extra
        for j in np.nonzero(y >= ABEL_MIN_X)[0]:
            extra = _series_tail(a, y[j], K0)
            if not tail:
                extra -= _series_tail(a, y[j], n_max + 1)
            out[j] += extra
    out = sign * out
    out.setflags(write=False)
    return out


def z_series(x, L="log", n_max=2 ** 20, tail=True):
    """``sum_{n=8}^{n_max} L(n)/n sin(nx)``; with ``tail=True`` the full series.

    Terms beyond ``2^13`` are summed by Euler-Maclaurin, so ``n_max`` is cheap.
    """
    x = np.ascontiguousarray(np.asarray(x, dtype=float))
    return np.array(_z_cached(x.tobytes(), L, int(n_max), bool(tail))).reshape(x.shape)


def _z_L(L="log", n_max=2 ** 20, tail=True):
    slowly_varying(L)
    n_max = int(n_max)
    if n_max < Z_START:
        raise ValueError("n_max must be >= 8")
    a_last = float(slowly_varying(L)(float(n_max)) / n_max)

    def ev(x):
        return z_series(x, L, n_max, tail)

    n = np.arange(Z_START, min(n_max, 2 ** 16) + 1)
    an = slowly_varying(L)(n.astype(float)) / n
    support = np.concatenate([-n[::-1], n])
    vals = np.concatenate([-1j * an[::-1] / 2, 1j * an / 2])
    exp = [
        _expect("c(n)", "i L(n)/(2n) for n >= 8", "analytic"),
        _expect("bracket C0 L(1/x) <= z <= C L(1/x)", "C0, C fitted", "fitted"),
        _expect("partial sums", "do not converge in the matched exponential norm", "analytic"),
        _expect("truncation", "tail summed" if tail else f"terms after n={n_max} dropped, "
                f"last coefficient {a_last:.3g}", "derived"),
    ]
    return CatalogItem("z_L", {"L": L, "n_max": n_max, "tail": bool(tail)}, "torus", ev,
                       exp, coefficients=SequenceData(support, vals))


def z_bracket(L="log", x_lo=1e-3, x_hi=None, n=200, n_max=2 ** 20):
    """Fitted ``C0, C`` with ``C0 L(1/x) <= z(x) <= C L(1/x)`` on ``[x_lo, x_hi]``."""
    if x_hi is None:
        x_hi = 1.0 / 16.0
    x = np.geomspace(x_lo, x_hi, n)
    ratio = z_series(x, L, n_max) / slowly_varying(L)(1.0 / x)
    return float(ratio.min()), float(ratio.max())


# --------------------------------------------------------------------------
# bounded examples


def _trig(terms=((1, 1.0, 0.0), (3, 0.0, 0.5))):
    """``sum a_n cos(nx) + b_n sin(nx)`` for ``(n, a_n, b_n)`` triples."""
    terms = tuple(tuple(t) for t in terms)

    def ev(x):
        out = np.zeros(np.shape(x))
        for n, an, bn in terms:
            out = out + an * np.cos(n * x) + bn * np.sin(n * x)
        return out

    exp = [_expect("bounded", True, "analytic"),
           _expect("every exponential norm", "finite, in closure of bounded functions",
                   "analytic")]
    return CatalogItem("trig", {"terms": [list(t) for t in terms]}, "torus", ev, exp)


def _poisson(r=0.5):
    """Poisson kernel ``(1 - r^2) / (1 - 2 r cos x + r^2)``; ``c(n) = r^|n|``."""
    r = float(r)
    if not 0 <= r < 1:
        raise ValueError("need 0 <= r < 1")

    def ev(x):
        return (1 - r * r) / (1 - 2 * r * np.cos(x) + r * r)

    exp = [_expect("c(n)", "r^|n|", "analytic"), _expect("bounded", True, "analytic")]
    return CatalogItem("poisson", {"r": r}, "torus", ev, exp)


def _bernoulli(k=2):
    """``sum_{n>=1} cos(nx)/n^2`` (``k=2``) or ``sum sin(nx)/n^3`` (``k=3``), summed exactly."""
    k = int(k)
    if k not in (2, 3):
        raise ValueError("k must be 2 or 3")

    def ev(x):
        y = np.mod(x, 2 * math.pi)
        if k == 2:
            return math.pi ** 2 / 6 - math.pi * y / 2 + y * y / 4
        return math.pi ** 2 * y / 6 - math.pi * y * y / 4 + y ** 3 / 12

    n = np.arange(1, 2 ** 16 + 1)
    half = (0.5 / n ** 2 + 0j) if k == 2 else (0.5j / n ** 3)
    # c(n) with c(n) exp(-inx) + c(-n) exp(inx) reproducing the series
    support = np.concatenate([-n[::-1], n])
    vals = np.concatenate([np.conj(half[::-1]), half]) if k == 2 else \
        np.concatenate([-half[::-1], half])
    exp = [_expect("c(n)", f"|c(n)| = 1/(2 n^{k})", "analytic"),
           _expect("bounded", True, "analytic"),
           _expect("partial sums", "converge in every exponential norm", "analytic")]
    return CatalogItem("bernoulli", {"k": k}, "torus", ev, exp,
                       coefficients=SequenceData(support, vals))


def _gaussian(sigma=1.0):
    sigma = float(sigma)

    def ev(x):
        return np.exp(-0.5 * (np.asarray(x) / sigma) ** 2)

    exp = [_expect("F[f](t)", "sqrt(2 pi) sigma exp(-sigma^2 t^2 / 2)", "analytic")]
    return CatalogItem("gaussian", {"sigma": sigma}, "line", ev, exp)


def random_trig(seed, degree, coefficient_law="gaussian", space=None, real=True):
    """Reproducible random trigonometric polynomial sampled on ``space``.

    Returns the grid function; its coefficients and the seed are stored in
    ``meta``.
    """
    degree = int(degree)
    space = space or SpaceSpec("torus", 2 ** 10, grading="none")
    if degree < 0 or degree > space.resolution // 2:
        raise ValueError("degree must lie in [0, resolution/2]")
    rng = np.random.default_rng(seed)
    k = degree + 1
    if coefficient_law == "gaussian":
        c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    elif coefficient_law == "uniform":
        c = rng.uniform(-1, 1, k) + 1j * rng.uniform(-1, 1, k)
    elif coefficient_law == "rademacher":
        c = rng.choice([-1.0, 1.0], k) + 0j
    else:
        raise ValueError(f"unknown coefficient law {coefficient_law!r}")
    if real:
        c[0] = c[0].real
        support = np.arange(-degree, degree + 1)
        values = np.concatenate([np.conj(c[:0:-1]), c])
    else:
        support = np.arange(0, degree + 1)
        values = c
    seq = SequenceData(support, values)
    vals = synthesize(seq, space.nodes, real=real)
    return GridFunction(space, vals, {"expr": f"random_trig(seed={seed},degree={degree})",
                                      "seed": seed, "law": coefficient_law,
                                      "coefficients": seq})


def _random_trig_entry(seed=0, degree=8, law="gaussian"):
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(degree + 1)

    def ev(x):
        n = np.arange(degree + 1)
        return np.cos(np.outer(x, n)) @ c

    exp = [_expect("seed", seed, "recorded"), _expect("bounded", True, "analytic")]
    return CatalogItem("random_trig", {"seed": seed, "degree": degree, "law": law}, "torus",
                       ev, exp)


_BUILDERS = {
    "g_m": (_g_m, {"m": "real >= 1"}),
    "f_ab": (_f_ab, {"a": "1 <= a", "b": "b > a"}),
    "z_L": (_z_L, {"L": "'log' | 'loglog'", "n_max": "integer >= 8", "tail": "bool"}),
    "trig": (_trig, {"terms": "list of (n, a_n, b_n)"}),
    "poisson": (_poisson, {"r": "0 <= r < 1"}),
    "bernoulli": (_bernoulli, {"k": "2 | 3"}),
    "gaussian": (_gaussian, {"sigma": "positive real"}),
    "random_trig": (_random_trig_entry, {"seed": "integer", "degree": "integer >= 0"}),
}


def entries():
    return sorted(_BUILDERS)


def make(name, **params):
    """Build a catalog entry by name."""
    try:
        builder = _BUILDERS[name][0]
    except KeyError:
        raise ValueError(f"unknown catalog entry {name!r}; known: {', '.join(entries())}") from None
    return builder(**params)


def listing():
    """JSON listing of entries, parameter ranges and default expectations."""
    out = []
    for name in entries():
        item = make(name)
        out.append({"name": name, "kind": item.kind, "parameters": _BUILDERS[name][1],
                    "defaults": item.params, "expectations": item.expectations})
    return json.dumps(out, indent=2, sort_keys=True, default=str)
