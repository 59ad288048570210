"""Series kernels, positivity certificates and the constants ``M_n``, ``R_n``.

Kernels
-------
``J(eta) = sum_a (a!/|a|!) eta^a`` and its parts ``J0`` (some ``a_i = 0``)
and ``J1`` (every ``a_i >= 1``); ``L = 2 Re J - 1``; and ``LPrime``, the
product of Poisson kernels ``prod_j Re[(1 + eta_j)/(1 - eta_j)]`` minus a
correction that moves every analytic coefficient from 1 down to
``a!/|a|!`` while adding only mixed-sign (non-analytic) terms.  For an
analytic multi-index ``a`` supported on ``S`` the correction term is

    (1 - a!/|a|!) * prod_{j in S} (eta_j^a_j -+ conj(eta_j)^a_j)

with minus signs on the first ``2 * floor(|S|/2)`` coordinates of ``S`` and
a plus on the last one when ``|S|`` is odd, which keeps the kernel real.

All kernels are separately harmonic in each variable, so their minimum over
the closed polydisk ``r D^n`` is attained on the torus ``r T^n``; the
certificate only grids angles.

Error budget
------------
Discarded terms are bounded in closed form.  A ``J``-type term supported on
``s`` coordinates with ``|a| = k`` has coefficient at most
``1/(k (k-1) ... (k-s+2))`` and there are ``C(k-1, s-1)`` of them per
support, so the support contributes at most ``r^(N+1) / ((s-1)! (1-r))``.
Correction terms have modulus at most ``2^s r^k``; their tail is a series
whose term ratio is bounded by ``q = r (N+1)/(N+2-s)`` and is summed as a
geometric majorant.  Cells of the angular grid are closed with a second
order Taylor bound using ``sum |c_k| |k|_1^2`` over the Fourier expansion.
"""

from __future__ import annotations

import enum
import functools
import itertools
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

DEFAULT_TRUNCATION = 60
DEFAULT_ANGULAR_GRID = {2: 256, 3: 64}
DEFAULT_REFINE = 8
DEFAULT_MAX_POINTS = 4_000_000
_BLOCK = {2: 32, 3: 8}
# absorbs floating point error of one kernel evaluation (values are O(10))
ROUNDING_ALLOWANCE = 1e-9
BISECTION_STEPS = 40
BISECTION_INTERVAL = (0.0, 0.99)

# Bohr radius of the l1 ball Delta_n: 1/(3 e^(1/3)) < r_n <= 1/3.
BOHR_RADIUS_LOWER = 1.0 / (3.0 * math.exp(1.0 / 3.0))
BOHR_RADIUS_UPPER = 1.0 / 3.0

# Values stated with the main theorem; the pipelines below must not exceed them.
THEOREM_R = {2: 1.85, 3: 2.6}
THEOREM_M = {2: 4.1, 3: 16.6}
REFERENCE_RADIUS = {2: 0.5406, 3: 0.39}


class KernelKind(enum.Enum):
    J = "j"
    J0 = "j0"
    J1 = "j1"
    L = "l"
    LPRIME = "lprime"


@dataclass(frozen=True)
class KernelSpec:
    kind: KernelKind
    n: int
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", KernelKind(self.kind.lower()))
        if self.n < 2:
            raise ValueError("kernels are defined for n >= 2")
        if self.kind is KernelKind.LPRIME and self.n not in (2, 3):
            raise ValueError("LPrime is only defined for n in {2, 3}")
        if self.truncation < 0 or (self.kind is KernelKind.J1 and self.truncation < self.n):
            raise ValueError(f"truncation {self.truncation} too small for {self.kind.value}")

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "n": self.n, "truncation": self.truncation}

    @classmethod
    def from_dict(cls, d: dict) -> KernelSpec:
        return cls(KernelKind(d["kind"]), int(d["n"]), int(d["truncation"]))


# -- coefficient tables --------------------------------------------------------


def _ratio_box(s: int, N: int) -> np.ndarray:
    """``a!/|a|!`` on the box ``{0..N}^s`` (zero where ``|a| > N``)."""
    lg = np.array([math.lgamma(k + 1) for k in range(s * N + 1)])
    grids = np.meshgrid(*([np.arange(N + 1)] * s), indexing="ij")
    total = sum(grids)
    logs = sum(lg[g] for g in grids) - lg[total]
    return np.where(total <= N, np.exp(logs), 0.0)


@dataclass
class _Component:
    coords: tuple[int, ...]     # variables the term depends on
    coef: np.ndarray            # real box over those variables
    factors: tuple[str, ...]    # "pow" (eta^a), "im" (Im eta^a) or "re" (Re eta^a)
    mult: complex
    real: bool                  # take the real part of mult * sum


@functools.lru_cache(maxsize=16)
def _components(spec: KernelSpec) -> tuple[_Component, ...]:
    n, N = spec.n, spec.truncation
    kind = spec.kind
    if kind in (KernelKind.J, KernelKind.J0, KernelKind.J1, KernelKind.L):
        box = _ratio_box(n, N)
        grids = np.meshgrid(*([np.arange(N + 1)] * n), indexing="ij")
        smallest = np.minimum.reduce(grids)
        if kind is KernelKind.J0:
            box = np.where(smallest == 0, box, 0.0)
        elif kind is KernelKind.J1:
            box = np.where(smallest >= 1, box, 0.0)
        coords = tuple(range(n))
        if kind is KernelKind.L:
            return (_Component(coords, box, ("pow",) * n, 2.0, True),)
        return (_Component(coords, box, ("pow",) * n, 1.0, False),)
    comps = []
    for s in range(2, n + 1):
        box = 1.0 - _ratio_box(s, N)
        grids = np.meshgrid(*([np.arange(N + 1)] * s), indexing="ij")
        keep = (np.minimum.reduce(grids) >= 1) & (sum(grids) <= N)
        box = np.where(keep, box, 0.0)
        minus = 2 * (s // 2)
        factors = ("im",) * minus + ("re",) * (s - minus)
        mult = -(2.0**s) * (-1.0) ** (minus // 2)
        for coords in itertools.combinations(range(n), s):
            comps.append(_Component(coords, box, factors, mult, True))
    return tuple(comps)


def _factor_tables(rho: np.ndarray, theta: np.ndarray, N: int, factor: str) -> tuple[np.ndarray, np.ndarray]:
    """Per-variable tables (P, N+1) of a factor and its theta-derivative."""
    a = np.arange(N + 1)
    mag = rho[:, None] ** a
    ang = theta[:, None] * a
    if factor == "pow":
        val = mag * np.exp(1j * ang)
        return val, 1j * a * val
    if factor == "im":
        return mag * np.sin(ang), a * mag * np.cos(ang)
    return mag * np.cos(ang), -a * mag * np.sin(ang)


def _contract_points(coef: np.ndarray, tables: list[np.ndarray]) -> np.ndarray:
    """``sum_a coef[a] prod_j tables[j][p, a_j]`` for every row ``p``."""
    P = tables[0].shape[0]
    width = coef.shape[-1]
    dtype = np.result_type(coef, *tables)
    acc = tables[-1] @ coef.reshape(-1, width).T.astype(dtype)
    for t in reversed(tables[:-1]):
        acc = np.einsum("pxa,pa->px", acc.reshape(P, -1, width), t)
    return acc.reshape(P)


def _contract_grid(coef: np.ndarray, tables: list[np.ndarray]) -> np.ndarray:
    """Same contraction on the product grid spanned by the row sets of ``tables``."""
    acc = coef
    for t in tables:
        acc = np.tensordot(acc, t, axes=([0], [1]))
    return acc


def _poisson(rho: np.ndarray, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    den = 1.0 - 2.0 * rho * np.cos(theta) + rho * rho
    val = (1.0 - rho * rho) / den
    der = -2.0 * rho * np.sin(theta) * (1.0 - rho * rho) / (den * den)
    return val, der


def _head(spec: KernelSpec, rho: np.ndarray, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form part of the kernel and its theta-gradient at points (P, n)."""
    P, n = rho.shape
    grad = np.zeros((P, n))
    if spec.kind is KernelKind.LPRIME:
        vals, ders = _poisson(rho, theta)
        value = np.prod(vals, axis=1)
        for j in range(n):
            others = np.prod(np.delete(vals, j, axis=1), axis=1)
            grad[:, j] = ders[:, j] * others
        return value, grad
    if spec.kind is KernelKind.L:
        return np.full(P, -1.0), grad
    return np.zeros(P), grad


# -- tails and Fourier majorants ------------------------------------------------


def _geometric_binomial_tail(s: int, N: int, r: float) -> float:
    """Upper bound for ``sum_{k > N} C(k-1, s-1) r^k``."""
    if r == 0:
        return 0.0
    q = r * (N + 1) / (N + 2 - s)
    if q >= 1:
        return math.inf
    return math.comb(N, s - 1) * r ** (N + 1) / (1.0 - q)


def _j_support_tail(s: int, N: int, r: float) -> float:
    """Discarded J-type terms with exactly ``s`` positive exponents on one support."""
    return r ** (N + 1) / ((1.0 - r) * math.factorial(s - 1))


def tail_bound(spec: KernelSpec, r: float) -> float:
    """Bound on the discarded terms, uniform on the closed polydisk ``r D^n``."""
    if not 0 <= r < 1:
        raise ValueError("tail bounds need 0 <= r < 1")
    n, N = spec.n, spec.truncation
    kind = spec.kind
    if kind is KernelKind.LPRIME:
        return sum(math.comb(n, s) * 2.0**s * _geometric_binomial_tail(s, N, r) for s in range(2, n + 1))
    sizes = {KernelKind.J: range(1, n + 1), KernelKind.L: range(1, n + 1),
             KernelKind.J0: range(1, n), KernelKind.J1: range(n, n + 1)}[kind]
    total = sum(math.comb(n, s) * _j_support_tail(s, N, r) for s in sizes)
    return 2.0 * total if kind is KernelKind.L else total


def fourier_majorants(spec: KernelSpec, r: float) -> tuple[float, float]:
    """``(sum |c_k| |k|_1, sum |c_k| |k|_1^2)`` for the retained kernel on ``r T^n``.

    These bound the first and second directional angle derivatives (sup norm
    of the direction vector at most 1).
    """
    n = spec.n
    first = second = 0.0
    if spec.kind is KernelKind.LPRIME:
        s0 = (1 + r) / (1 - r)
        s1 = 2 * r / (1 - r) ** 2
        s2 = 2 * r * (1 + r) / (1 - r) ** 3
        first = n * s1 * s0 ** (n - 1)
        second = n * s2 * s0 ** (n - 1) + n * (n - 1) * s1 * s1 * s0 ** (n - 2)
    for comp in _components(spec):
        s = len(comp.coords)
        grids = np.meshgrid(*([np.arange(comp.coef.shape[0])] * s), indexing="ij")
        k = sum(grids)
        weight = np.abs(comp.coef) * r**k * abs(comp.mult)
        first += float(np.sum(weight * k))
        second += float(np.sum(weight * k * k))
    return first, second


# -- evaluation -----------------------------------------------------------------


def _eval_points(spec: KernelSpec, eta: np.ndarray, want_grad: bool, chunk: int = 4096):
    eta = np.atleast_2d(np.asarray(eta, dtype=complex))
    P, n = eta.shape
    if n != spec.n:
        raise ValueError(f"point of dimension {n} for an n = {spec.n} kernel")
    rho, theta = np.abs(eta), np.angle(eta)
    comps = _components(spec)
    complex_out = spec.kind in (KernelKind.J, KernelKind.J0, KernelKind.J1)
    values = np.zeros(P, dtype=complex if complex_out else float)
    grads = np.zeros((P, n))
    for start in range(0, P, chunk):
        sl = slice(start, start + chunk)
        v, g = _head(spec, rho[sl], theta[sl])
        v = v.astype(values.dtype)
        for comp in comps:
            tabs = [_factor_tables(rho[sl, j], theta[sl, j], comp.coef.shape[0] - 1, f)
                    for j, f in zip(comp.coords, comp.factors)]
            vals = [t[0] for t in tabs]
            part = comp.mult * _contract_points(comp.coef, vals)
            v = v + (part.real if comp.real else part)
            if want_grad:
                for i, j in enumerate(comp.coords):
                    swapped = vals[:i] + [tabs[i][1]] + vals[i + 1:]
                    d = comp.mult * _contract_points(comp.coef, swapped)
                    g[:, j] += d.real
        values[sl] = v
        grads[sl] = g
    return values, grads


def _eval_grid(spec: KernelSpec, r: float, axes: Sequence[np.ndarray]):
    """Values and theta-gradients on the product grid ``axes[0] x ... x axes[n-1]`` at modulus ``r``."""
    n = spec.n
    shape = tuple(ax.size for ax in axes)
    value = np.zeros(shape)
    grads = [np.zeros(shape) for _ in range(n)]
    if spec.kind is KernelKind.LPRIME:
        heads = [_poisson(np.full(ax.size, r), ax) for ax in axes]
        for j in range(n):
            grads[j] += _outer([heads[i][1] if i == j else heads[i][0] for i in range(n)])
        value += _outer([hd[0] for hd in heads])
    elif spec.kind is KernelKind.L:
        value -= 1.0
    for comp in _components(spec):
        N = comp.coef.shape[0] - 1
        tabs = [_factor_tables(np.full(axes[j].size, r), axes[j], N, f) for j, f in zip(comp.coords, comp.factors)]
        vals = [t[0] for t in tabs]
        expand = tuple(slice(None) if j in comp.coords else None for j in range(n))
        value += np.real(comp.mult * _contract_grid(comp.coef, vals))[expand]
        for i, j in enumerate(comp.coords):
            swapped = vals[:i] + [tabs[i][1]] + vals[i + 1:]
            grads[j] += np.real(comp.mult * _contract_grid(comp.coef, swapped))[expand]
    return value, grads


def _outer(vectors: Sequence[np.ndarray]) -> np.ndarray:
    out = vectors[0]
    for v in vectors[1:]:
        out = np.multiply.outer(out, v)
    return out


def kernel_eval(spec: KernelSpec, eta: Sequence[complex] | np.ndarray):
    """Truncated kernel value(s) and a tail bound valid at the given point(s).

    ``eta`` is one point (n,) or a batch (P, n); the tail uses the largest
    coordinate modulus in the input, which must be below 1.
    """
    arr = np.asarray(eta, dtype=complex)
    rmax = float(np.abs(arr).max()) if arr.size else 0.0
    if rmax >= 1:
        raise ValueError("kernel evaluation needs max |eta_i| < 1")
    values, _ = _eval_points(spec, arr, want_grad=False)
    tail = tail_bound(spec, rmax)
    if arr.ndim == 1:
        return values[0], tail
    return values, tail


def kernel_eval_grad(spec: KernelSpec, eta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values and angular gradients ``d/dtheta_j`` of the truncated kernel (batch)."""
    return _eval_points(spec, eta, want_grad=True)


# -- L2 norm of J1 ----------------------------------------------------------------


def _j1_partial_sum(n: int, N: int) -> float:
    """``sum (a!/|a|!)^2`` over ``a >= 1`` (n entries), ``|a| <= N``."""
    lg = np.array([math.lgamma(k + 1) for k in range(N + 1)])
    g = np.zeros(N + 1)
    g[1:] = 1.0
    for s in range(2, n + 1):
        nxt = np.zeros(N + 1)
        for k in range(s, N + 1):
            a = np.arange(1, k - s + 2)
            inv_binom_sq = np.exp(2.0 * (lg[a] + lg[k - a] - lg[k]))
            nxt[k] = float(np.dot(inv_binom_sq, g[k - a]))
        g = nxt
    return float(math.fsum(g[n:]))


def _j1_tail(n: int, N: int) -> float:
    if n == 2:
        # levels k > N: two terms 1/k^2, and k-3 terms at most (2/(k(k-1)))^2
        return 2.0 / (N - 1)
    # sum_{k>N} C(k-1,n-1) / (k(k-1)...(k-n+2))^2 <= (1/(n-1)!) sum 1/(k...(k-n+2))
    denom = math.prod(N - i for i in range(n - 2))
    return 1.0 / (math.factorial(n - 1) * (n - 2) * denom)


def default_j1_truncation(n: int) -> int:
    return {2: 1000, 3: 200}.get(n, 100)


def j1_l2_bound(n: int, N: int | None = None) -> tuple[float, float]:
    """Bracket ``(lower, upper)`` for ``||J1||_{L^2}^2`` on the torus."""
    if n < 2:
        raise ValueError("n must be at least 2")
    N = default_j1_truncation(n) if N is None else N
    if N < max(n, 3):
        raise ValueError("truncation too small")
    lower = _j1_partial_sum(n, N)
    upper = lower * (1 + 1e-12) + _j1_tail(n, N)
    return lower, upper


def crude_j1_bound_n2(N: int = 1000) -> float:
    """The cruder n = 2 bound ``pi^2/3 - 9/4 + sum_{k>=4} (k-3)(2/(k(k-1)))^2``."""
    ks = np.arange(4, N + 1, dtype=float)
    partial = math.fsum((ks - 3) * (2.0 / (ks * (ks - 1))) ** 2)
    return math.pi**2 / 3 - 9.0 / 4 + partial + 2.0 / (N * (N - 1))


# -- positivity certificates ------------------------------------------------------


@dataclass
class Certificate:
    kernel: KernelSpec
    radius: float
    grid: dict
    tail_bound: float
    lipschitz_bound: float
    second_derivative_bound: float
    min_on_grid: float
    cell_slack: float
    margin: float
    verdict: str
    elapsed: float = field(default=0.0, compare=False)

    @property
    def certified(self) -> bool:
        return self.verdict == "Certified"

    def to_dict(self) -> dict:
        """Everything except the wall-clock time, so equal runs serialize identically."""
        d = asdict(self)
        d.pop("elapsed")
        d["kernel"] = self.kernel.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Certificate:
        d = dict(d)
        required = {f for f in cls.__dataclass_fields__ if f != "elapsed"}
        if not required <= set(d) or not set(d) <= set(cls.__dataclass_fields__):
            raise ValueError(f"certificate fields must be {sorted(required)}")
        d["kernel"] = KernelSpec.from_dict(d["kernel"])
        return cls(**d)


def certify_positivity(spec: KernelSpec, r: float, grid: int | None = None, refine: int = DEFAULT_REFINE,
                       max_points: int = DEFAULT_MAX_POINTS) -> Certificate:
    """Try to prove ``kernel > 0`` on the closed polydisk ``r D^n``.

    Cells of a ``grid^n`` angle grid on ``r T^n`` are closed with
    ``f(c) - h |grad f(c)|_1 - H h^2 / 2`` (or the first-order bound when
    larger), ``h`` the cell half-width.  Open cells are halved along every
    angle, at most ``refine`` times and within ``max_points`` kernel
    evaluations.  The margin is the certified minimum minus the tail bound
    and ``ROUNDING_ALLOWANCE``.  Children are evaluated tile by tile: a tile of
    ``BLOCK^n`` parent cells becomes one product grid of ``(2 BLOCK)^n``
    points, which keeps the separable contraction cheap.
    """
    if spec.kind not in (KernelKind.L, KernelKind.LPRIME):
        raise ValueError("positivity certificates exist for L and LPrime only")
    if not 0 < r < 1:
        raise ValueError("radius must lie in (0, 1)")
    started = time.perf_counter()
    n = spec.n
    grid = grid or DEFAULT_ANGULAR_GRID.get(n, 32)
    block = min(_BLOCK.get(n, 4), grid)
    tail = tail_bound(spec, r)
    threshold = tail + ROUNDING_ALLOWANCE
    lip, hess = fourier_majorants(spec, r)

    def lower_bounds(vals, grad_l1, h):
        return np.maximum(vals - lip * h, vals - h * grad_l1 - 0.5 * hess * h * h)

    # level k: centres origin + step * i, half-width step / 2
    step, origin = 2 * math.pi / grid, 0.0
    axis = origin + step * np.arange(grid)
    value, grads = _eval_grid(spec, r, [axis] * n)
    lb_all = lower_bounds(value, sum(np.abs(g) for g in grads), step / 2).ravel()
    min_on_grid = float(value.min())
    evaluated = value.size
    bad = lb_all <= threshold
    passed_min = float(lb_all[~bad].min()) if (~bad).any() else math.inf
    idx = np.stack(np.unravel_index(np.flatnonzero(bad), (grid,) * n), axis=1)
    lb = lb_all[bad]
    levels = 0
    offsets = np.array(list(itertools.product((0, 1), repeat=n)))
    while idx.shape[0] and levels < refine and min_on_grid > threshold:
        tiles, which = np.unique(idx // block, axis=0, return_inverse=True)
        which = which.ravel()
        if evaluated + tiles.shape[0] * (2 * block) ** n > max_points:
            break
        step /= 2
        origin -= step / 2
        new_idx, new_lb = [], []
        for t, tile in enumerate(tiles):
            members = np.flatnonzero(which == t)
            base = 2 * block * tile
            tile_axes = [origin + step * (base[j] + np.arange(2 * block)) for j in range(n)]
            value, grads = _eval_grid(spec, r, tile_axes)
            evaluated += value.size
            min_on_grid = min(min_on_grid, float(value.min()))
            tile_lb = lower_bounds(value, sum(np.abs(g) for g in grads), step / 2)
            kids = (2 * idx[members][:, None, :] + offsets[None]).reshape(-1, n)
            local = kids - base
            kid_lb = np.maximum(tile_lb[tuple(local.T)], np.repeat(lb[members], offsets.shape[0]))
            ok = kid_lb > threshold
            if ok.any():
                passed_min = min(passed_min, float(kid_lb[ok].min()))
            new_idx.append(kids[~ok])
            new_lb.append(kid_lb[~ok])
        idx = np.concatenate(new_idx)
        lb = np.concatenate(new_lb)
        levels += 1
    certified_min = min(passed_min, float(lb.min()) if lb.size else math.inf)
    margin = certified_min - threshold
    return Certificate(
        kernel=spec,
        radius=float(r),
        grid={"angular": grid, "refine": refine, "levels_used": levels, "points": int(evaluated),
              "max_points": int(max_points), "open_cells": int(idx.shape[0]), "rounding_allowance": ROUNDING_ALLOWANCE,
              "domain": "distinguished boundary r*T^n"},
        tail_bound=tail,
        lipschitz_bound=lip,
        second_derivative_bound=hess,
        min_on_grid=min_on_grid,
        cell_slack=min_on_grid - certified_min,
        margin=margin,
        verdict="Certified" if margin > 0 else "NotCertified",
        elapsed=time.perf_counter() - started,
    )


def check_certificate(cert: Certificate, rtol: float = 1e-9) -> bool:
    """Recompute a stored certificate and compare verdict and margin."""
    fresh = certify_positivity(cert.kernel, cert.radius, grid=cert.grid["angular"], refine=cert.grid["refine"],
                               max_points=cert.grid["max_points"])
    if fresh.verdict != cert.verdict:
        return False
    scale = max(1.0, abs(cert.margin))
    return abs(fresh.margin - cert.margin) <= rtol * scale and abs(fresh.tail_bound - cert.tail_bound) <= rtol


# -- hand estimate for n = 3 --------------------------------------------------------


def hand_bound_n3(r: float) -> float:
    """``1 - [2r + r^2 + 2r^3 + r^3/(1-r) - 4 log(1-r)]`` for ``n = 3``.

    The bracket is the sum of the two term-by-term estimates
    ``2 Re(J0 - 1) <= 2r^3 - 6 log(1-r)`` and
    ``2 Re J1 <= r^3/(1-r) + 2 (log(1-r) + r + r^2/2)`` on ``r D^3``.
    """
    if not 0 <= r < 1:
        raise ValueError("hand bound needs 0 <= r < 1")
    return 1.0 - (2 * r + r * r + 2 * r**3 + r**3 / (1 - r) - 4.0 * math.log1p(-r))


def bisect_root(f, lo: float, hi: float, steps: int = 60) -> tuple[float, float]:
    """Shrink ``[lo, hi]`` with ``f(lo) > 0 >= f(hi)``."""
    if not f(lo) > 0 >= f(hi):
        raise ValueError("bisection needs a sign change on the bracket")
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


# -- constants -------------------------------------------------------------------------


@dataclass
class ConstantReport:
    n: int
    kind: str          # "MBound" | "RBoundCertified" | "RBoundHand"
    value: float
    breakdown: dict

    def to_dict(self) -> dict:
        return asdict(self)


def m_bound(n: int, j1_truncation: dict[int, int] | None = None) -> ConstantReport:
    """``M_n <= sum_{j=1}^n C(n, j) M_{n-j} + ||J1||_{L^2}`` with ``M_0 = M_1 = 1``.

    The sum is the inclusion-exclusion over zeroed coordinate sets that
    bounds the ``J0`` part through lower-dimensional slices.
    """
    if not 2 <= n <= 6:
        raise ValueError("m_bound supports 2 <= n <= 6")
    j1_truncation = j1_truncation or {}
    values = {0: 1.0, 1: 1.0}
    reports = {}
    for k in range(2, n + 1):
        slice_terms = [{"zeroed": j, "multiplicity": math.comb(k, j), "M": values[k - j]} for j in range(1, k + 1)]
        j0 = math.fsum(t["multiplicity"] * t["M"] for t in slice_terms)
        N = j1_truncation.get(k, default_j1_truncation(k))
        lo, hi = j1_l2_bound(k, N)
        j1 = math.sqrt(hi)
        values[k] = j0 + j1
        reports[k] = {"slice_terms": slice_terms, "j0_contribution": j0, "j1_l2_squared": [lo, hi],
                      "j1_truncation": N, "j1_contribution": j1}
    return ConstantReport(n, "MBound", values[n], {**reports[n], "lower_dimensional": {str(k): values[k] for k in range(n)}})


def r_bound(n: int, mode: str = "certified", steps: int = BISECTION_STEPS, grid: int | None = None,
            refine: int = DEFAULT_REFINE, max_points: int = DEFAULT_MAX_POINTS,
            truncation: int = DEFAULT_TRUNCATION) -> ConstantReport:
    """``R_n = 1/r`` for the largest radius ``r`` shown to keep the kernel positive."""
    mode = mode.lower()
    if mode == "hand":
        if n != 3:
            raise ValueError("the hand estimate is for n = 3")
        lo, hi = bisect_root(hand_bound_n3, 0.0, 0.5, steps=max(steps, 60))
        return ConstantReport(3, "RBoundHand", 1.0 / lo,
                              {"root_bracket": [lo, hi], "hand_bound_at_lower": hand_bound_n3(lo)})
    if mode != "certified":
        raise ValueError(f"unknown mode {mode!r}")
    spec = KernelSpec(KernelKind.LPRIME, n, truncation)
    lo, hi = BISECTION_INTERVAL
    best = None
    trail = []
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        cert = certify_positivity(spec, mid, grid=grid, refine=refine, max_points=max_points)
        trail.append([mid, cert.verdict, cert.margin])
        if cert.certified:
            lo, best = mid, cert
        else:
            hi = mid
    if best is None:
        return ConstantReport(n, "RBoundCertified", math.inf, {"bisection": trail})
    return ConstantReport(n, "RBoundCertified", 1.0 / best.radius,
                          {"certified_radius": best.radius, "certificate": best.to_dict(), "bisection": trail})
