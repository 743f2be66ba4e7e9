"""Measure spaces, quadrature grids and sampled functions.

Three spaces are supported:

``torus``
    ``[0, 2pi)`` with the normalised measure ``dx / 2pi``.  Uniform grids use
    the midpoints ``2pi (j + 1/2) / n``; graded grids are built on
    ``(-pi, pi)`` and cluster geometrically at ``0`` (which is also ``2pi``).
``line`` / ``line-nu``
    ``[-X, X]`` with Lebesgue measure.  Graded grids cluster geometrically at
    0 and spread geometrically out to ``X``.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "SpaceSpec",
    "GridFunction",
    "torus",
    "line",
    "sample",
    "tail",
    "indicator",
    "write_csv",
    "read_csv",
]

KINDS = ("torus", "line", "line-nu")


@dataclass(frozen=True)
class SpaceSpec:
    kind: str = "torus"
    resolution: int = 2 ** 16
    truncation: float = 1e4
    grading: str = "geometric"
    ratio: float = 1.1
    floor: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown space kind {self.kind!r}")
        n = int(self.resolution)
        if n < 16 or n & (n - 1):
            raise ValueError("resolution must be a power of two >= 16")
        if self.grading not in ("none", "geometric"):
            raise ValueError("grading must be 'none' or 'geometric'")

    @property
    def is_torus(self):
        return self.kind == "torus"

    @property
    def total_measure(self):
        return 1.0 if self.is_torus else 2.0 * self.truncation

    @property
    def uniform(self):
        return self.grading == "none"

    @property
    def nodes(self):
        return _grid(self)[0]

    @property
    def weights(self):
        return _grid(self)[1]

    @property
    def cells(self):
        """Cell boundaries, shape ``(n, 2)``, in the same units as ``nodes``."""
        return _grid(self)[2]

    def with_resolution(self, n):
        return SpaceSpec(self.kind, n, self.truncation, self.grading, self.ratio, self.floor)

    def to_json(self):
        return json.dumps({"kind": self.kind, "resolution": self.resolution,
                           "truncation": self.truncation, "grading": self.grading,
                           "ratio": self.ratio, "floor": self.floor})

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else dict(text)
        return cls(**data)


def torus(resolution=2 ** 16, grading="geometric", **kw):
    return SpaceSpec("torus", resolution, grading=grading, **kw)


def line(resolution=2 ** 16, truncation=1e4, grading="geometric", nu=False, **kw):
    return SpaceSpec("line-nu" if nu else "line", resolution, truncation, grading, **kw)


def _geometric_side(floor, ratio, count):
    edges = floor * ratio ** np.arange(count + 1)
    return np.concatenate([[0.0], edges])


@lru_cache(maxsize=32)
def _grid(space):
    n = int(space.resolution)
    if space.is_torus:
        two_pi = 2.0 * math.pi
        if space.uniform:
            edges = two_pi * np.arange(n + 1) / n
        else:
            edges = _graded_torus_edges(n, space.ratio, space.floor or 1e-300)
        lo, hi = edges[:-1], edges[1:]
        nodes = 0.5 * (lo + hi) if space.uniform else _cell_nodes(lo, hi)
        weights = (hi - lo) / two_pi
    else:
        X = float(space.truncation)
        if space.uniform:
            edges = np.linspace(-X, X, n + 1)
        else:
            floor = space.floor or 1e-12
            half = n // 2
            r = (X / floor) ** (1.0 / (half - 1))
            right = _geometric_side(floor, r, half - 1)
            right[-1] = X
            edges = np.concatenate([-right[::-1], right[1:]])
        lo, hi = edges[:-1], edges[1:]
        nodes = 0.5 * (lo + hi) if space.uniform else _cell_nodes(lo, hi)
        weights = hi - lo
    cells = np.stack([lo, hi], axis=1)
    for arr in (nodes, weights, cells):
        arr.setflags(write=False)
    return nodes, weights, cells


def _cell_nodes(lo, hi):
    """Log-midpoint for cells away from zero on one side, midpoint otherwise."""
    mid = 0.5 * (lo + hi)
    same_sign = (lo * hi) > 0
    with np.errstate(invalid="ignore"):
        geo = np.sign(mid) * np.sqrt(np.abs(lo)) * np.sqrt(np.abs(hi))
    return np.where(same_sign & (np.abs(hi / np.where(lo == 0, 1, lo)) > 1.05), geo, mid)


def _graded_torus_edges(n, ratio, floor):
    """Edges on ``[-pi, pi]``: geometric cells at 0, uniform cells beyond."""
    r = ratio
    for _ in range(60):
        for n_g in range(1, n // 2):
            x_c = floor * r ** n_g
            n_u = n - 2 * (n_g + 1)
            if n_u < n // 4 or x_c >= math.pi / 2:
                break
            h = (2 * math.pi - 2 * x_c) / n_u
            if h <= (r - 1.0) * x_c:
                # put half of the uniform cells on each side of the graded core
                side = _geometric_side(floor, r, n_g)
                left_u = n_u // 2
                right_u = n_u - left_u
                pos = np.concatenate([side, np.linspace(x_c, math.pi, right_u + 1)[1:]])
                neg = np.concatenate([side, np.linspace(x_c, math.pi, left_u + 1)[1:]])
                edges = np.concatenate([-neg[::-1], pos[1:]])
                return edges
        r = r ** 1.25
    raise ValueError("cannot build a graded torus grid with this resolution")


@dataclass(frozen=True)
class GridFunction:
    space: SpaceSpec
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.space.resolution,):
            raise ValueError("values length must equal the space resolution")
        if not np.all(np.isfinite(v)):
            bad = int(np.argmax(~np.isfinite(v)))
            raise ValueError(f"non-finite value at node {bad} (x={self.space.nodes[bad]!r})")

    @property
    def nodes(self):
        return self.space.nodes

    @property
    def weights(self):
        return self.space.weights

    @property
    def abs(self):
        return np.abs(self.values)

    def _new(self, values, tag):
        return GridFunction(self.space, values, {"expr": tag})

    def __add__(self, other):
        return self._new(self.values + other.values, "sum")

    def __sub__(self, other):
        return self._new(self.values - other.values, "difference")

    def __mul__(self, scalar):
        return self._new(scalar * self.values, f"scaled")

    __rmul__ = __mul__

    def integral(self):
        return complex(np.sum(self.weights * self.values))


def sample(expr, space, name=None):
    """Evaluate ``expr`` at the quadrature nodes of ``space``."""
    x = space.nodes
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        values = np.asarray(expr(x))
    if values.shape == ():
        values = np.full(x.shape, values)
    bad = ~np.isfinite(values)
    if bad.any():
        j = int(np.argmax(bad))
        raise ValueError(f"expression is not finite at node {j} (x={x[j]!r})")
    if not np.iscomplexobj(values):
        values = values.astype(float)
    return GridFunction(space, values, {"expr": name or getattr(expr, "__name__", "expr")})


def tail(f, u):
    """``T(|f|, u)``: measure of ``{|f| > u}``; ``u`` may be an array."""
    u = np.asarray(u, dtype=float)
    a = f.abs
    order = np.argsort(a)
    a_sorted = a[order]
    # measure strictly above each threshold via a reversed cumulative sum
    w_rev = np.concatenate([np.cumsum(f.weights[order][::-1])[::-1], [0.0]])
    idx = np.searchsorted(a_sorted, u, side="right")
    out = w_rev[idx]
    return float(out) if out.ndim == 0 else out


def indicator(space, delta):
    """Indicator of a set of measure ``~delta`` anchored in the regular region.

    The set is a union of whole cells (an arc or interval around the anchor);
    its exact measure is recorded in ``meta['measure']``.
    """
    delta = float(delta)
    total = space.total_measure
    if delta <= 0 or delta > total * (1 + 1e-12):
        raise ValueError(f"delta={delta} exceeds the available measure {total}")
    x, w = space.nodes, space.weights
    if space.is_torus:
        anchor = math.pi
        dist = np.abs(np.angle(np.exp(1j * (x - anchor))))
    else:
        anchor = 0.5 * space.truncation
        dist = np.abs(x - anchor)
    order = np.argsort(dist, kind="stable")
    cum = np.cumsum(w[order])
    k = int(np.searchsorted(cum, delta - 0.5 * w[order][np.minimum(np.searchsorted(cum, delta), len(cum) - 1)]))
    k = min(max(k, 0), len(cum) - 1)
    values = np.zeros(x.shape)
    values[order[: k + 1]] = 1.0
    return GridFunction(space, values, {"expr": f"indicator({delta:g})", "measure": float(cum[k])})


def write_csv(f, path):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["node", "weight", "re", "im"])
        vals = np.asarray(f.values, dtype=complex)
        for xi, wi, vi in zip(f.nodes, f.weights, vals):
            wr.writerow([repr(float(xi)), repr(float(wi)), repr(float(vi.real)), repr(float(vi.imag))])


def read_csv(path, space):
    """Load values written by :func:`write_csv` onto ``space`` (nodes must match)."""
    rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if rows.shape[0] != space.resolution or not np.allclose(rows[:, 0], space.nodes, rtol=1e-12, atol=0):
        raise ValueError("CSV nodes do not match the space grid")
    values = rows[:, 2] + 1j * rows[:, 3]
    if not np.any(rows[:, 3]):
        values = rows[:, 2]
    return GridFunction(space, values, {"expr": f"csv:{path}"})
