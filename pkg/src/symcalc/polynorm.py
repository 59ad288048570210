"""Certified brackets for sup norms of polynomials.

On polydisks the maximum principle puts ``max |p|`` on the torus, so only
angles are gridded.  Every grid point is a cell centre; a cell's upper
bound is the smaller of

* ``|p(c)| + G1 h`` with ``G1 = sum |c_a| |a| R^|a|`` (global Lipschitz), and
* ``max_v |p(c) + h v . grad p(c)| + H h^2 / 2`` over the sign vectors
  ``v`` of the cell's corners, with ``H = sum |c_a| |a|^2 R^|a|``,

where ``h`` is the cell half-width in every angle.  The linearised modulus
is convex in the angle offset, so its maximum over the cell is at a corner;
the corner form keeps the phase rotation of ``p`` at a maximum of ``|p|``
from entering at first order.  Cells whose bound beats
the incumbent lower bound are split in halves along every angle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _backend
from .multipoly import Poly, scale_vars

DEFAULT_GRID = {1: 1024, 2: 256, 3: 64}
DEFAULT_DELTA_GRID = {1: 1024, 2: 64, 3: 16}
DEFAULT_REFINE = 3
MAX_SPLIT = 1 << 16


@dataclass(frozen=True)
class NormEstimate:
    lower: float
    upper: float
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not (0 <= self.lower <= self.upper) or not math.isfinite(self.upper):
            raise ValueError(f"invalid bracket [{self.lower}, {self.upper}]")

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "params": self.params}


@dataclass(frozen=True)
class Domain:
    kind: str                      # "torus" | "polydisk" | "delta"
    n: int
    radius: float | tuple[float, ...] = 1.0

    def __post_init__(self):
        if self.kind not in ("torus", "polydisk", "delta"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("domain dimension must be positive")
        radii = self.radii
        if len(radii) != self.n or any(r <= 0 for r in radii):
            raise ValueError(f"bad radius {self.radius!r} for dimension {self.n}")

    @classmethod
    def torus(cls, n: int) -> Domain:
        return cls("torus", n, 1.0)

    @classmethod
    def polydisk(cls, n: int, radius: float | Sequence[float] = 1.0) -> Domain:
        if np.ndim(radius):
            radius = tuple(float(r) for r in radius)
        return cls("polydisk", n, radius)

    @classmethod
    def delta(cls, n: int) -> Domain:
        return cls("delta", n, 1.0)

    @property
    def radii(self) -> tuple[float, ...]:
        if isinstance(self.radius, tuple):
            return self.radius
        return (float(self.radius),) * self.n

    def __str__(self) -> str:
        if self.kind == "polydisk":
            r = ",".join(repr(x) for x in self.radius) if isinstance(self.radius, tuple) else repr(self.radius)
            return f"polydisk:{self.n}:{r}"
        return f"{self.kind}:{self.n}"


def parse_domain(text: str) -> Domain:
    """Parse ``torus:n``, ``polydisk:n:R`` (``R`` may be comma separated) or ``delta:n``."""
    parts = text.strip().split(":")
    try:
        kind, n = parts[0].lower(), int(parts[1])
        if kind == "torus" and len(parts) == 2:
            return Domain.torus(n)
        if kind == "delta" and len(parts) == 2:
            return Domain.delta(n)
        if kind == "polydisk" and len(parts) in (2, 3):
            if len(parts) == 2:
                return Domain.polydisk(n)
            radii = [float(x) for x in parts[2].split(",")]
            return Domain.polydisk(n, radii[0] if len(radii) == 1 else radii)
    except (IndexError, ValueError) as exc:
        raise ValueError(f"bad domain descriptor {text!r}: {exc}") from exc
    raise ValueError(f"bad domain descriptor {text!r}")


def coeff_upper_bound(p: Poly, R: float | Sequence[float] = 1.0) -> float:
    """``sum |c_a| R^|a|``, an upper bound for ``|p|`` on the polydisk of radius ``R``."""
    q = scale_vars(p, R)
    return float(sum(abs(c) for _, c in q.items()))


def _derivative_majorants(p: Poly) -> tuple[float, float]:
    g1 = h2 = 0.0
    for a, c in p.items():
        k = sum(a)
        g1 += abs(c) * k
        h2 += abs(c) * k * k
    return g1, h2


def _cell_bounds(q: Poly, theta: np.ndarray, h: float, g1: float, h2: float,
                 corners: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    exps, coefs = q.arrays()
    vals, grads = _backend.poly_eval_grad(exps, coefs, np.exp(1j * theta))
    linear = np.abs(vals[:, None] + h * grads @ corners.T).max(axis=1)
    mod = np.abs(vals)
    return mod, np.minimum(mod + g1 * h, linear + 0.5 * h2 * h * h)


def _torus_norm(q: Poly, grid: int, refine: int, max_split: int) -> tuple[float, float, dict]:
    n = q.nvars
    g1, h2 = _derivative_majorants(q)
    h = math.pi / grid
    axis = 2 * math.pi * np.arange(grid) / grid
    centers = np.stack([g.ravel() for g in np.meshgrid(*([axis] * n), indexing="ij")], axis=1)
    offsets = np.array(list(itertools.product((-0.5, 0.5), repeat=n)))
    corners = 2 * offsets
    mod, bounds = _cell_bounds(q, centers, h, g1, h2, corners)
    lower = float(mod.max())
    evaluated = mod.size
    for _ in range(refine):
        open_ = bounds > lower
        if not open_.any():
            break
        idx = np.flatnonzero(open_)
        if idx.size > max_split:
            idx = idx[np.argsort(bounds[idx])[::-1][:max_split]]
        keep = np.ones(bounds.size, dtype=bool)
        keep[idx] = False
        parent_bounds = bounds[idx]
        children = (centers[idx][:, None, :] + h * offsets[None]).reshape(-1, n)
        h /= 2
        mod, child_bounds = _cell_bounds(q, children, h, g1, h2, corners)
        evaluated += mod.size
        lower = max(lower, float(mod.max()))
        child_bounds = np.minimum(child_bounds, np.repeat(parent_bounds, offsets.shape[0]))
        centers = np.concatenate([centers[keep], children])
        bounds = np.concatenate([bounds[keep], child_bounds])
    upper = max(lower, float(bounds.max()) if bounds.size else lower)
    info = {"grid": grid, "refine": refine, "final_half_width": h, "lipschitz": g1,
            "second_derivative": h2, "points": int(evaluated)}
    return lower, upper, info


def _simplex_lattice(n: int, m: int) -> np.ndarray:
    pts = [c for c in itertools.product(range(m + 1), repeat=n - 1) if sum(c) <= m]
    arr = np.array(pts, dtype=float).reshape(len(pts), n - 1)
    return np.concatenate([arr, m - arr.sum(axis=1, keepdims=True)], axis=1) / m


def _delta_norm(p: Poly, grid: int) -> tuple[float, float, dict]:
    n = p.nvars
    t = _simplex_lattice(n, grid)
    axis = 2 * math.pi * np.arange(grid) / grid
    phases = np.exp(1j * np.stack([g.ravel() for g in np.meshgrid(*([axis] * n), indexing="ij")], axis=1))
    exps, coefs = p.arrays()
    lower = 0.0
    for start in range(0, t.shape[0], max(1, 65536 // phases.shape[0])):
        block = t[start:start + max(1, 65536 // phases.shape[0])]
        z = (block[:, None, :] * phases[None]).reshape(-1, n)
        vals, _ = _backend.poly_eval_grad(exps, coefs, z)
        lower = max(lower, float(np.abs(vals).max()))
    # |dp/dz_j| <= sum |c_a| a_j on the closed unit polydisk, which contains Delta_n
    dmax = max((sum(abs(c) * a[j] for a, c in p.items()) for j in range(n)), default=0.0)
    slack = dmax * (n / grid + math.pi / grid)
    info = {"grid": grid, "simplex_mesh": 1.0 / grid, "lipschitz": dmax, "points": int(t.shape[0] * phases.shape[0])}
    return lower, lower + slack, info


def sup_norm(p: Poly, dom: Domain, grid: int | None = None, refine: int = DEFAULT_REFINE,
             max_split: int = MAX_SPLIT) -> NormEstimate:
    if p.nvars != dom.n:
        raise ValueError(f"{p.nvars}-variable polynomial on a {dom.n}-dimensional domain")
    if dom.kind == "delta":
        grid = grid or DEFAULT_DELTA_GRID.get(dom.n, 8)
        if grid < 8:
            raise ValueError("grid must be at least 8")
        lower, upper, info = _delta_norm(p, grid)
    else:
        grid = grid or DEFAULT_GRID.get(dom.n, 16)
        if grid < 8:
            raise ValueError("grid must be at least 8")
        lower, upper, info = _torus_norm(scale_vars(p, dom.radii), grid, refine, max_split)
        upper = max(lower, min(upper, coeff_upper_bound(p, dom.radii)))
    info["domain"] = str(dom)
    return NormEstimate(lower, upper, info)
