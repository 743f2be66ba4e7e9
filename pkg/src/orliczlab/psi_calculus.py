"""Growth functions psi, Young kernels W and exponential N-functions.

Everything here is built around one numerical primitive: the Young-Fenchel
(Legendre) transform ``W*(p) = sup_{z >= lo} (p z - W(z))`` evaluated by a
vectorised bracket-and-golden-section search.  Since ``W`` is convex the
objective is concave in ``z`` and therefore unimodal.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "YoungFunction",
    "PsiFunction",
    "NFunction",
    "LegendreTable",
    "legendre",
    "conjugate",
    "psi_power",
    "psi_tabulated",
    "psi_from_young",
    "psi_shift_d",
    "psi_times_log",
    "n_from_psi",
    "n_alpha",
    "n_mr",
    "n_power",
    "young_exp",
    "young_power",
    "dominance",
    "trend_classify",
    "default_p_grid",
    "to_json",
    "from_json",
]

_GOLD = (math.sqrt(5.0) - 1.0) / 2.0
_GOLDEN_ITERS = 110
_LOG_E2 = 2.0
P_MAX_DEFAULT = 256.0
P_POINTS_DEFAULT = 200


def default_p_grid(alpha=1.0, p_max=P_MAX_DEFAULT, n=P_POINTS_DEFAULT):
    """Log-spaced exponent grid on ``[alpha, p_max]``."""
    return np.geomspace(alpha, p_max, n)


def _clean(values):
    values = np.asarray(values, dtype=float)
    return np.where(np.isnan(values), -np.inf, values)


def _maximize_concave(objective, lo, hi=np.inf, step=1.0):
    """Vectorised maximisation of concave ``objective(z, idx)`` over ``[lo, hi]``.

    ``objective`` receives the candidate points and the integer indices of the
    problems they belong to, so that per-problem parameters can be gathered.
    Returns ``(argmax, max, unbounded)``.  ``unbounded`` marks problems whose
    objective still increased when the search ran past 1e300 (or past ``hi``
    when ``hi`` is infinite).
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.broadcast_to(np.asarray(hi, dtype=float), lo.shape).copy()
    n = lo.size
    idx_all = np.arange(n)

    a = lo.copy()
    fa = _clean(objective(a, idx_all))
    h = np.maximum(step, 1e-3 * np.maximum(1.0, np.abs(lo)))
    b = np.minimum(a + h, hi)
    fb = _clean(objective(b, idx_all))
    left = a.copy()
    right = b.copy()
    unbounded = np.zeros(n, dtype=bool)
    active = (fb > fa) & (b < hi)
    for _ in range(1100):
        if not active.any():
            break
        ia = np.nonzero(active)[0]
        c = np.minimum(b[ia] + 2.0 * (b[ia] - a[ia]), hi[ia])
        fc = _clean(objective(c, ia))
        going_up = fc > fb[ia]
        left[ia] = a[ia]
        right[ia] = c
        # Keep climbing where the objective still increases.
        up = ia[going_up]
        a[up] = b[up]
        b[up] = c[going_up]
        fb[up] = fc[going_up]
        hit_hi = up[b[up] >= hi[up]]
        runaway = up[b[up] > 1e300]
        unbounded[runaway] = True
        done = np.zeros(n, dtype=bool)
        done[ia[~going_up]] = True
        done[hit_hi] = True
        done[runaway] = True
        active &= ~done
    unbounded |= active
    unbounded |= np.isinf(hi) & (right >= 1e300)

    # Golden-section refinement on [left, right].
    x1 = right - _GOLD * (right - left)
    x2 = left + _GOLD * (right - left)
    f1 = _clean(objective(x1, idx_all))
    f2 = _clean(objective(x2, idx_all))
    for _ in range(_GOLDEN_ITERS):
        move_right = f1 < f2
        left = np.where(move_right, x1, left)
        right = np.where(move_right, right, x2)
        new_x1 = np.where(move_right, x2, right - _GOLD * (right - left))
        new_x2 = np.where(move_right, left + _GOLD * (right - left), x1)
        f_new = _clean(objective(np.where(move_right, new_x2, new_x1), idx_all))
        f1, f2 = np.where(move_right, f2, f_new), np.where(move_right, f_new, f1)
        x1, x2 = new_x1, new_x2
        if np.all(right - left <= 1e-14 * np.maximum(1.0, np.abs(right))):
            break
    xs = np.stack([x1, x2, lo, np.minimum(hi, np.where(np.isinf(hi), x2, hi))])
    fs = np.stack([f1, f2, _clean(objective(lo, idx_all)),
                   _clean(objective(xs[3], idx_all))])
    best = np.argmax(fs, axis=0)
    arg = xs[best, idx_all]
    val = fs[best, idx_all]
    val = np.where(unbounded, np.inf, val)
    return arg, val, unbounded


def _as_callable(fn):
    def wrapped(x):
        x = np.asarray(x, dtype=float)
        return np.asarray(fn(x), dtype=float)
    return wrapped


@dataclass(frozen=True)
class YoungFunction:
    """Convex increasing kernel ``W`` on ``[domain_lo, inf)``.

    ``eval`` and ``derivative`` must accept numpy arrays.
    """

    eval: Callable
    derivative: Optional[Callable] = None
    domain_lo: float = 2.0
    name: str = "W"
    spec: Optional[dict] = None

    def __call__(self, x):
        return self.eval(np.asarray(x, dtype=float))

    def slope(self, x, h=1e-5):
        x = np.asarray(x, dtype=float)
        if self.derivative is not None:
            return self.derivative(x)
        step = h * np.maximum(1.0, np.abs(x))
        return (self.eval(x + step) - self.eval(x)) / step

    def check(self, x_max=20.0, n=200):
        """Raise ``ValueError`` unless convex, increasing, with growing slope."""
        x = np.linspace(self.domain_lo, x_max, n)
        w = self.eval(x)
        if not np.all(np.isfinite(w)):
            raise ValueError(f"{self.name}: non-finite values on check grid")
        if np.any(np.diff(w) <= 0):
            raise ValueError(f"{self.name}: not strictly increasing")
        second = np.diff(w, 2)
        if np.any(second < -1e-9 * np.maximum(1.0, np.abs(w[1:-1]))):
            raise ValueError(f"{self.name}: not convex")
        if not self.slope(x_max) > self.slope(self.domain_lo):
            raise ValueError(f"{self.name}: derivative does not grow")
        return self


@dataclass(frozen=True)
class LegendreTable:
    p: np.ndarray
    value: np.ndarray
    argmax: np.ndarray
    infinite: np.ndarray

    def is_convex(self, tol=1e-8):
        ok = ~self.infinite
        p, v = self.p[ok], self.value[ok]
        if p.size < 3:
            return True
        slopes = np.diff(v) / np.diff(p)
        return bool(np.all(np.diff(slopes) >= -tol * np.maximum(1.0, np.abs(slopes[1:]))))


def legendre(W, domain_lo, p_grid):
    """Tabulate ``W*(p) = sup_{z >= domain_lo} (p z - W(z))`` on ``p_grid``.

    Grid points where the supremum is unbounded come back with
    ``value = inf`` and ``infinite = True``.
    """
    p = np.atleast_1d(np.asarray(p_grid, dtype=float))
    lo = np.full(p.shape, float(domain_lo))

    def obj(z, idx):
        return p[idx] * z - W(z)

    with np.errstate(over="ignore", invalid="ignore"):
        arg, val, unb = _maximize_concave(obj, lo)
    return LegendreTable(p=p, value=val, argmax=arg, infinite=unb)


def conjugate(W, domain_lo, name=None):
    """The Legendre transform of ``W`` as a lazily evaluated YoungFunction.

    The derivative of the conjugate is the maximiser (envelope theorem), which
    makes repeated transforms cheap to differentiate.
    """

    def star(p):
        p = np.asarray(p, dtype=float)
        table = legendre(W, domain_lo, p.ravel())
        return table.value.reshape(p.shape)

    def star_slope(p):
        p = np.asarray(p, dtype=float)
        table = legendre(W, domain_lo, p.ravel())
        return table.argmax.reshape(p.shape)

    label = name or f"({getattr(W, 'name', 'W')})*"
    return YoungFunction(eval=star, derivative=star_slope, domain_lo=domain_lo, name=label)


# --------------------------------------------------------------------------
# psi functions


@dataclass(frozen=True)
class PsiFunction:
    """A member of the class Psi on ``[alpha, p_max]``."""

    alpha: float
    eval: Callable
    kind: str
    params: dict = field(default_factory=dict)
    p_max: float = math.inf
    validate: bool = True

    def __post_init__(self):
        if self.alpha < 1:
            raise ValueError("alpha must be >= 1")
        if self.validate:
            self.check()

    def __call__(self, p):
        return self.eval(np.asarray(p, dtype=float))

    def log(self, p):
        return np.log(self(p))

    def check(self, p_max=P_MAX_DEFAULT, n=P_POINTS_DEFAULT, tol=1e-9):
        top = min(p_max, self.p_max * (1 - 1e-9)) if math.isfinite(self.p_max) else p_max
        p = np.geomspace(self.alpha, top, n)
        v = self(p)
        if not np.all(np.isfinite(v)) or np.any(v <= 0):
            raise ValueError(f"psi[{self.kind}] must be finite and positive")
        if np.any(np.diff(v) <= 0):
            raise ValueError(f"psi[{self.kind}] must be strictly increasing")
        # convexity of p -> p log psi(p) on a non-uniform grid
        g = p * np.log(v)
        s = np.diff(g) / np.diff(p)
        if np.any(np.diff(s) < -tol * np.maximum(1.0, np.abs(s[1:]))):
            raise ValueError(f"psi[{self.kind}]: p log psi(p) is not convex")
        if not v[-1] > v[0]:
            raise ValueError(f"psi[{self.kind}] does not grow")
        return self


def psi_power(m, alpha=1.0):
    """``psi_m(p) = p**(1/m)``."""
    m = float(m)
    if m <= 0:
        raise ValueError("m must be positive")
    return PsiFunction(alpha=alpha, eval=lambda p: p ** (1.0 / m), kind="power",
                       params={"m": m, "alpha": alpha})


def psi_tabulated(p, value, alpha=None):
    """psi interpolated log-log-linearly from samples."""
    p = np.asarray(p, dtype=float)
    value = np.asarray(value, dtype=float)
    lp, lv = np.log(p), np.log(value)

    def ev(q):
        lq = np.log(q)
        out = np.interp(lq, lp, lv)
        # linear extrapolation in log-log beyond the table
        hi_slope = (lv[-1] - lv[-2]) / (lp[-1] - lp[-2])
        out = np.where(lq > lp[-1], lv[-1] + hi_slope * (lq - lp[-1]), out)
        return np.exp(out)

    return PsiFunction(alpha=float(alpha if alpha is not None else p[0]), eval=ev,
                       kind="tabulated", params={"p": p.tolist(), "value": value.tolist()})


def psi_from_young(W, alpha=1.0, p_max=P_MAX_DEFAULT):
    """``psi(p) = exp(W*(p)/p)`` with ``W*`` taken over ``z >= W.domain_lo``."""
    probe = legendre(W, W.domain_lo, np.geomspace(alpha, p_max, 64))
    limit = math.inf
    if probe.infinite.any():
        limit = float(probe.p[np.argmax(probe.infinite)])
        warnings.warn(f"W* is infinite from p={limit:.4g}; psi domain truncated",
                      RuntimeWarning, stacklevel=2)

    def ev(p):
        p = np.asarray(p, dtype=float)
        table = legendre(W, W.domain_lo, p.ravel())
        return np.exp(table.value / table.p).reshape(p.shape)

    return PsiFunction(alpha=alpha, eval=ev, kind="from-young",
                       params={"young": W.spec, "name": W.name}, p_max=limit)


def psi_shift_d(psi, d):
    """``psi_d(p) = p**d * psi(p)``."""
    d = int(d)
    if d < 0:
        raise ValueError("d must be a nonnegative integer")
    if d == 0:
        return psi
    return PsiFunction(alpha=psi.alpha, eval=lambda p: p ** d * psi(p), kind="shift",
                       params={"base": _psi_spec(psi), "d": d}, p_max=psi.p_max)


def psi_times_log(psi, shift=math.e):
    """``theta(p) = psi(p) * log(shift + p)``; strictly dominates ``psi``."""
    return PsiFunction(alpha=psi.alpha, eval=lambda p: psi(p) * np.log(shift + p),
                       kind="times-log", params={"base": _psi_spec(psi), "shift": shift},
                       p_max=psi.p_max)


# --------------------------------------------------------------------------
# N-functions


@dataclass(frozen=True)
class NFunction:
    """Even N-function evaluated through ``log N`` to survive huge arguments."""

    log_eval: Callable
    name: str = "N"
    young: Optional[YoungFunction] = None
    piecewise_params: Optional[dict] = None
    spec: Optional[dict] = None

    def log(self, u):
        u = np.abs(np.asarray(u, dtype=float))
        with np.errstate(divide="ignore"):
            return np.where(u == 0, -np.inf, self.log_eval(np.where(u == 0, 1.0, u)))

    def __call__(self, u):
        with np.errstate(over="ignore"):
            return np.exp(self.log(u))

    eval = __call__

    def slope(self, u, h=1e-6):
        """Right derivative by a one-sided difference, overflow-safe in ratio form."""
        u = float(u)
        step = h * max(1.0, u)
        l0, l1 = self.log(u), self.log(u + step)
        return float(np.exp(l0) * np.expm1(l1 - l0) / step)

    def check(self, u_max=50.0, n=400):
        u = np.linspace(0, u_max, n)
        with np.errstate(over="ignore"):
            v = self(u)
        v = v[np.isfinite(v)]
        if v[0] != 0:
            raise ValueError(f"{self.name}(0) must be 0")
        if np.any(np.diff(v) < 0):
            raise ValueError(f"{self.name} must be increasing")
        second = np.diff(v, 2)
        if np.any(second < -1e-9 * np.maximum(1.0, v[1:-1])):
            raise ValueError(f"{self.name} must be convex")
        return self


def _log_expm1(g):
    g = np.asarray(g, dtype=float)
    with np.errstate(divide="ignore"):
        small = np.log(np.expm1(np.minimum(g, 30.0)))
    return np.where(g > 30.0, g + np.log1p(-np.exp(-g)), small)


def n_mr(m, r=0.0):
    """``N_{m,r}(u) = exp(|u|^m log^{-mr}(C1(r) + |u|)) - 1``."""
    m, r = float(m), float(r)
    if m <= 0:
        raise ValueError("m must be positive")
    c1 = math.e if r <= 0 else math.exp(r)

    def exponent_log(logu):
        u = np.exp(logu)
        return m * logu - m * r * np.log(np.log(c1 + u))

    def log_eval(u):
        with np.errstate(over="ignore"):
            return _log_expm1(np.exp(exponent_log(np.log(u))))

    def W(x):
        return log_eval(np.exp(np.asarray(x, dtype=float)))

    young = YoungFunction(eval=W, name=f"W[N_{{{m:g},{r:g}}}]",
                          spec={"kind": "n_mr", "params": {"m": m, "r": r}})
    return NFunction(log_eval=log_eval, name=f"N_{{{m:g},{r:g}}}", young=young,
                     spec={"kind": "n_mr", "params": {"m": m, "r": r}})


def n_power(k):
    """``N(u) = |u|^k`` for ``k >= 1`` (handy closed-form test case)."""
    k = float(k)
    return NFunction(log_eval=lambda u: k * np.log(u), name=f"|u|^{k:g}",
                     spec={"kind": "power", "params": {"k": k}})


def young_exp(m=1.0, scale=1.0):
    """``W(z) = scale * exp(m z)`` on ``[2, inf)``."""
    m, scale = float(m), float(scale)
    return YoungFunction(eval=lambda z: scale * np.exp(m * z),
                         derivative=lambda z: scale * m * np.exp(m * z),
                         name=f"{scale:g}exp({m:g}z)",
                         spec={"kind": "exp", "params": {"m": m, "scale": scale}})


def young_power(k=2.0, scale=None, domain_lo=2.0):
    """``W(z) = z^k / k`` (or ``scale * z^k``) on ``[domain_lo, inf)``."""
    k = float(k)
    c = 1.0 / k if scale is None else float(scale)
    return YoungFunction(eval=lambda z: c * np.abs(z) ** k,
                         derivative=lambda z: c * k * np.abs(z) ** (k - 1) * np.sign(z),
                         domain_lo=domain_lo, name=f"{c:g}z^{k:g}",
                         spec={"kind": "power", "params": {"k": k, "scale": c,
                                                           "domain_lo": domain_lo}})


def n_from_psi(psi):
    """N-function ``exp([p log psi(p)]*(log u))`` for ``u >= e^2``.

    Below ``e^2`` the function is completed by ``c u^kappa`` through the value
    at ``e^2``, with ``kappa = max(1, W'(2))`` so the left slope never exceeds
    the right one.  ``W'(2)`` is the maximising ``p`` at ``x = 2``.
    """
    p_hi = psi.p_max if math.isfinite(psi.p_max) else np.inf

    def W(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        lo = np.full(x.shape, psi.alpha)

        def obj(p, idx):
            return p * x[idx] - p * psi.log(p)

        with np.errstate(over="ignore", invalid="ignore"):
            _, val, _ = _maximize_concave(obj, lo, hi=p_hi)
        return val

    def W_slope(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        lo = np.full(x.shape, psi.alpha)

        def obj(p, idx):
            return p * x[idx] - p * psi.log(p)

        with np.errstate(over="ignore", invalid="ignore"):
            arg, _, _ = _maximize_concave(obj, lo, hi=p_hi)
        return arg

    w2 = float(W(_LOG_E2)[0])
    kappa = max(1.0, float(W_slope(_LOG_E2)[0]))
    log_c = w2 - kappa * _LOG_E2

    def log_eval(u):
        u = np.asarray(u, dtype=float)
        shape = u.shape
        lu = np.log(u.ravel())
        out = log_c + kappa * lu
        big = lu >= _LOG_E2
        if np.any(big):
            out[big] = W(lu[big])
        return out.reshape(shape)

    young = YoungFunction(eval=lambda x: W(x), derivative=lambda x: W_slope(x),
                          name=f"[p log psi]*", spec={"kind": "from-psi",
                                                       "params": {"psi": _psi_spec(psi)}})
    return NFunction(log_eval=log_eval, name=f"N[{psi.kind}]", young=young,
                     piecewise_params={"kappa": kappa, "log_c": log_c},
                     spec={"kind": "from-psi", "params": {"psi": _psi_spec(psi)}})


def n_alpha(N, alpha):
    """Glue ``C1|u|^alpha`` / ``C3 + C4|u|`` / ``N(u)`` into a new N-function.

    ``C5 = e^2`` and the linear piece is the tangent of ``N`` at ``C5``.  The
    power piece touches that tangent at ``C2 = alpha(-C3)/((alpha-1)C4)`` when
    this point lies in ``(0, C5)``; otherwise the pieces are glued by value
    only at the midpoint between the tangent's zero and ``C5`` (flagged as
    ``"continuity"``), which still leaves an upward kink and hence convexity.
    All constants are stored in log-scaled form: ``C3 = N5 * a``,
    ``C4 = N5 * s``.
    """
    alpha = float(alpha)
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    c5 = math.exp(2.0)
    log_n5 = float(N.log(c5))
    # s = C4 / N(C5) = d log N / du at C5
    h = 1e-6 * c5
    s = float((N.log(c5 + h) - N.log(c5)) / h)
    a = 1.0 - s * c5  # C3 / N(C5)
    mode = "smooth"
    c2 = math.nan
    if alpha > 1 and a < 0:
        c2 = alpha * (-a) / ((alpha - 1.0) * s)
    if not (0 < c2 < c5):
        mode = "continuity"
        zero = max(-a / s, 0.0)
        c2 = 0.5 * (zero + c5)
        if a >= 0:
            c2 = 0.5 * c5
    line_at_c2 = a + s * c2  # (C3 + C4 C2) / N(C5)
    if line_at_c2 <= 0:
        raise ValueError("no positive glue value available")
    log_c1 = log_n5 + math.log(line_at_c2) - alpha * math.log(c2)

    def log_eval(u):
        u = np.asarray(u, dtype=float)
        shape = u.shape
        u = u.ravel()
        lu = np.log(u)
        power = log_c1 + alpha * lu
        with np.errstate(invalid="ignore", divide="ignore"):
            linear = log_n5 + np.log(a + s * u)
        out = np.where(u <= c2, power, np.where(u <= c5, linear, 0.0))
        big = u > c5
        if np.any(big):
            out[big] = N.log(u[big])
        return out.reshape(shape)

    with np.errstate(over="ignore"):
        params = {
            "C1": math.exp(log_c1) if log_c1 < 700 else math.inf,
            "C2": c2,
            "C3": a * math.exp(log_n5) if log_n5 < 700 else -math.inf,
            "C4": s * math.exp(log_n5) if log_n5 < 700 else math.inf,
            "C5": c5,
            "alpha": alpha,
            "log_C1": log_c1,
            "log_N_C5": log_n5,
            "mode": mode,
        }
    return NFunction(log_eval=log_eval, name=f"{N.name}^({alpha:g})", young=N.young,
                     piecewise_params=params,
                     spec={"kind": "alpha", "params": {"base": N.spec, "alpha": alpha}})


# --------------------------------------------------------------------------
# trend classification shared by dominance and L0 tests

TREND_WINDOW = 20
TREND_RATIO_ZERO = 1e-3


def trend_classify(p, ratio, window=TREND_WINDOW):
    """Classify the tail of ``ratio(p)`` as ``'to-zero'``, ``'bounded-below'``
    or ``'inconclusive'``.

    ``'to-zero'``: monotone decreasing across the last ``window`` points and
    either below ``1e-3`` at the end, below a tenth of the running maximum, or
    with log-log slope under -0.1 in the window.  ``'bounded-below'``: the
    window's minimum is at least half its maximum, or the window is
    nondecreasing.
    """
    p = np.asarray(p, dtype=float)
    r = np.asarray(ratio, dtype=float)
    tail_p, tail = p[-window:], r[-window:]
    decreasing = bool(np.all(np.diff(tail) <= 0) and tail[-1] < tail[0])
    if decreasing:
        slope = np.polyfit(np.log(tail_p), np.log(tail), 1)[0]
        if tail[-1] < TREND_RATIO_ZERO or tail[-1] <= 0.1 * r.max() or slope < -0.1:
            return "to-zero"
    if tail.min() >= 0.5 * tail.max() or bool(np.all(np.diff(tail) >= 0)):
        return "bounded-below"
    return "inconclusive"


def dominance(psi, theta, p_max=1e6, p0=None, n=P_POINTS_DEFAULT):
    """Numerically decide whether ``psi(p)/theta(p) -> 0``.

    Returns ``'dominated'``, ``'not-dominated'`` or ``'inconclusive'``.
    """
    lo = max(psi.alpha, theta.alpha) if p0 is None else p0
    lo = max(lo, 2.0)
    p = np.geomspace(lo, p_max, n)
    ratio = psi(p) / theta(p)
    verdict = trend_classify(p, ratio)
    return {"to-zero": "dominated", "bounded-below": "not-dominated"}.get(verdict, "inconclusive")


# --------------------------------------------------------------------------
# JSON round trip


def _psi_spec(psi):
    return {"kind": psi.kind, "params": psi.params}


def to_json(obj):
    """``{"kind": ..., "params": {...}}`` description of a psi, W or N object."""
    if isinstance(obj, PsiFunction):
        if obj.kind == "tabulated":
            return {"kind": "tabulated", "p": obj.params["p"], "value": obj.params["value"]}
        return _psi_spec(obj)
    spec = getattr(obj, "spec", None)
    if spec is None:
        raise ValueError(f"{obj!r} carries no serialisable description")
    return spec


def from_json(spec, what="psi"):
    """Rebuild an object from :func:`to_json` output.

    ``what`` is one of ``'psi'``, ``'young'``, ``'N'``.
    """
    kind = spec["kind"]
    params = spec.get("params", {})
    if what == "psi":
        if kind == "tabulated":
            return psi_tabulated(spec["p"], spec["value"])
        if kind == "power":
            return psi_power(params["m"], params.get("alpha", 1.0))
        if kind == "from-young":
            return psi_from_young(from_json(params["young"], "young"))
        if kind == "shift":
            return psi_shift_d(from_json(params["base"], "psi"), params["d"])
        if kind == "times-log":
            return psi_times_log(from_json(params["base"], "psi"), params["shift"])
    elif what == "young":
        if kind == "exp":
            return young_exp(params["m"], params["scale"])
        if kind == "power":
            return young_power(params["k"], params["scale"], params["domain_lo"])
        if kind == "n_mr":
            return n_mr(params["m"], params["r"]).young
    elif what == "N":
        if kind == "n_mr":
            return n_mr(params["m"], params["r"])
        if kind == "power":
            return n_power(params["k"])
        if kind == "from-psi":
            return n_from_psi(from_json(params["psi"], "psi"))
        if kind == "alpha":
            return n_alpha(from_json(params["base"], "N"), params["alpha"])
    raise ValueError(f"unknown {what} kind {kind!r}")
