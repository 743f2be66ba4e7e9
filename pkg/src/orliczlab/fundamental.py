"""Fundamental functions ``delta -> |indicator of a set of measure delta|``.

Closed forms for the single-parameter grand space ``G(alpha; p^(1/m))`` and the
two-sided family ``G(a, b, alpha, beta)``, plus an empirical route through
indicator functions on a grid.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .measures import indicator

__all__ = [
    "FundamentalCurve",
    "phi_g_alpha_m",
    "phi_g_abab",
    "abab_branches",
    "delta_1",
    "delta_2",
    "p_1",
    "p_2",
    "phi_1",
    "phi_2",
    "abab_asymptotes",
    "phi_empirical",
    "closed_form_curve",
    "delta_grid",
]


@dataclass
class FundamentalCurve:
    delta_grid: np.ndarray
    values: np.ndarray
    formula_tag: str
    branch: list = field(default_factory=list)
    measures: np.ndarray | None = None

    def __post_init__(self):
        self.delta_grid = np.asarray(self.delta_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.formula_tag not in ("G(alpha,m)", "G(a,b,alpha,beta)", "empirical"):
            raise ValueError(f"unknown formula tag {self.formula_tag!r}")
        if np.any(self.values <= 0):
            raise ValueError("fundamental function values must be positive")

    def quasi_concave(self, rtol=1e-6):
        """``phi`` nondecreasing and ``phi(delta)/delta`` nonincreasing (within ``rtol``)."""
        d = self.delta_grid if self.measures is None else self.measures
        v = self.values
        up = np.all(np.diff(v) >= -rtol * v[:-1])
        r = v / d
        down = np.all(np.diff(r) <= rtol * r[:-1])
        return bool(up and down)

    def write_csv(self, path):
        branch = self.branch or [self.formula_tag] * len(self.values)
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["delta", "value", "branch"])
            for d, v, b in zip(self.delta_grid, self.values, branch):
                wr.writerow([repr(float(d)), repr(float(v)), b])


def delta_grid(lo, hi, per_decade=40):
    """Log-spaced grid with ``per_decade`` points per decade."""
    n = max(2, int(round(per_decade * math.log10(hi / lo))) + 1)
    return np.geomspace(lo, hi, n)


# --------------------------------------------------------------------------
# G(alpha; p^(1/m))


def phi_g_alpha_m(delta, alpha, m, with_branch=False):
    """``sup_{p >= alpha} delta^(1/p) p^(-1/m)``.

    The maximiser is ``p = m |log delta|`` when that is at least ``alpha``
    (i.e. ``delta <= exp(-alpha/m)``); otherwise the supremum sits at
    ``p = alpha``.
    """
    delta, alpha, m = float(delta), float(alpha), float(m)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if alpha < 1 or m <= 0:
        raise ValueError("need alpha >= 1 and m > 0")
    if delta <= math.exp(-alpha / m):
        ld = abs(math.log(delta))
        value, branch = (math.e * m * ld) ** (-1.0 / m), "interior"
    else:
        value, branch = alpha ** (-1.0 / m) * delta ** (1.0 / alpha), "endpoint"
    return (value, branch) if with_branch else value


# --------------------------------------------------------------------------
# G(a, b, alpha, beta)


def _h(a, b):
    return min(0.5 * (a + b), 2.0 * a)


def _check_abab(a, b, alpha, beta):
    if not 1 <= a < b:
        raise ValueError("need 1 <= a < b")
    if alpha < 0 or beta < 0:
        raise ValueError("need alpha, beta >= 0")


def delta_1(a, b, alpha):
    h = _h(a, b)
    return math.exp(alpha * h * h / (h - a))


def delta_2(a, b, beta):
    h = _h(a, b)
    return math.exp(-beta * h * h / (b - h))


def p_1(delta, a, b, alpha):
    """Stationary point of ``delta^(1/p) (p-a)^alpha`` on ``(a, h)``."""
    L = math.log(delta)
    disc = L * L - 4.0 * alpha * a * L
    if alpha == 0 or disc < 0:
        raise ValueError(f"left branch: no stationary point at delta={delta:g} "
                         f"(discriminant {disc:.4g})")
    return (L - math.sqrt(disc)) / (2.0 * alpha)


def p_2(delta, a, b, beta):
    """Stationary point of ``delta^(1/p) (b-p)^beta`` on ``(h, b)``."""
    L = math.log(delta)
    disc = L * L - 4.0 * beta * b * L
    if beta == 0 or disc < 0 or L >= 0:
        raise ValueError(f"right branch: no stationary point at delta={delta:g} "
                         f"(discriminant {disc:.4g})")
    return (L + math.sqrt(disc)) / (2.0 * beta)


def phi_1(delta, a, b, alpha):
    """``sup_{a < p <= h} delta^(1/p) (p-a)^alpha`` and the branch used."""
    h = _h(a, b)
    if alpha > 0 and delta > delta_1(a, b, alpha):
        p = p_1(delta, a, b, alpha)
        return delta ** (1.0 / p) * (p - a) ** alpha, "left-interior"
    return delta ** (1.0 / h) * (h - a) ** alpha, "left-h"


def phi_2(delta, a, b, beta):
    """``sup_{h <= p < b} delta^(1/p) (b-p)^beta`` and the branch used."""
    h = _h(a, b)
    if beta > 0 and delta < delta_2(a, b, beta):
        p = p_2(delta, a, b, beta)
        return delta ** (1.0 / p) * (b - p) ** beta, "right-interior"
    return delta ** (1.0 / h) * (b - h) ** beta, "right-h"


def abab_branches(delta, a, b, alpha, beta):
    _check_abab(a, b, alpha, beta)
    delta = float(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    v1, b1 = phi_1(delta, a, b, alpha)
    v2, b2 = phi_2(delta, a, b, beta)
    return {"phi_1": v1, "branch_1": b1, "phi_2": v2, "branch_2": b2,
            "delta_1": delta_1(a, b, alpha), "delta_2": delta_2(a, b, beta), "h": _h(a, b)}


def phi_g_abab(delta, a, b, alpha, beta, with_branch=False):
    """Fundamental function of ``G(a, b, alpha, beta)``: ``max(phi_1, phi_2)``."""
    br = abab_branches(delta, a, b, alpha, beta)
    if br["phi_1"] >= br["phi_2"]:
        value, branch = br["phi_1"], br["branch_1"]
    else:
        value, branch = br["phi_2"], br["branch_2"]
    return (value, branch) if with_branch else value


def abab_asymptotes(delta, a, b, alpha, beta):
    """Leading-order forms for ``delta -> 0`` and ``delta -> inf``.

    ``small``: ``max(delta^(1/h)(h-a)^alpha, (beta b^2/e)^beta delta^(1/b) |log delta|^-beta)``.
    ``large``: ``max(delta^(1/h)(b-h)^beta, (alpha a^2/e)^alpha delta^(1/a) (log delta)^-alpha)``.
    The variant with ``delta^(1/beta)`` in the small-delta term is also
    returned so it can be compared.
    """
    h = _h(a, b)
    L = math.log(delta)
    out = {}
    if L < 0:
        right = (beta * b * b / math.e) ** beta * delta ** (1.0 / b) * abs(L) ** (-beta)
        alt = (math.e * beta * b * b) ** beta * delta ** (1.0 / beta) * abs(L) ** (-beta) \
            if beta > 0 else math.nan
        out["small"] = max(delta ** (1.0 / h) * (h - a) ** alpha, right)
        out["small_alt_exponent"] = max(delta ** (1.0 / h) * (h - a) ** alpha, alt)
    if L > 0:
        left = (alpha * a * a / math.e) ** alpha * delta ** (1.0 / a) * L ** (-alpha)
        out["large"] = max(delta ** (1.0 / h) * (b - h) ** beta, left)
    return out


# --------------------------------------------------------------------------
# curves


def closed_form_curve(kind, deltas, **params):
    deltas = np.asarray(deltas, dtype=float)
    if kind == "G(alpha,m)":
        pairs = [phi_g_alpha_m(d, params["alpha"], params["m"], with_branch=True) for d in deltas]
    elif kind == "G(a,b,alpha,beta)":
        pairs = [phi_g_abab(d, params["a"], params["b"], params["alpha"], params["beta"],
                            with_branch=True) for d in deltas]
    else:
        raise ValueError(f"unknown closed form {kind!r}")
    return FundamentalCurve(deltas, [v for v, _ in pairs], kind, [b for _, b in pairs])


def phi_empirical(norm_handle, space, deltas):
    """``delta -> norm(indicator(delta))``; ``norm_handle`` may return a float or a report."""
    deltas = np.asarray(deltas, dtype=float)
    values, measures = [], []
    for d in deltas:
        ind = indicator(space, d)
        out = norm_handle(ind)
        values.append(float(getattr(out, "value", out)))
        measures.append(ind.meta["measure"])
    return FundamentalCurve(deltas, values, "empirical", ["empirical"] * len(values),
                            np.asarray(measures))
