"""Seeded random experiments around the symmetrized calculus.

Every trial draws from its own generator seeded with ``(seed, trial)``, so a
run is reproducible and independent of the number of worker threads.  Each
proved inequality is compared at an absolute slack of ``TOLERANCE``; a
record with ``violated=True`` means a bug somewhere in the chain.
"""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from .kernels import THEOREM_R, m_bound
from .multipoly import Poly, example7_poly, gamma, lambda_mu, poly_from_dict, poly_to_dict
from .ncalc import (MatrixTuple, TupleConstraint, commuting_apply, example7_tuple, normalize_to, op_norm,
                    spectral_radius, symm_apply, tuple_to_list)
from .polynorm import Domain, sup_norm

TOLERANCE = 1e-8
DEFAULT_DEGREE = 6
ANDO_DRURY = math.sqrt(2.0)
P7_SAMPLING_CEILING = 1.0 + 4.0 * math.sqrt(2.0)


class PolySource(enum.Enum):
    FIXED = "fixed"
    RANDOM = "random"


class CoeffDist(enum.Enum):
    GAUSSIAN = "gaussian"
    UNIFORM = "uniform"   # uniform on the unit disk


class CommutingMode(enum.Enum):
    DIAGONAL = "diagonal"
    FUNCTIONAL = "functional"   # (q_1(S), ..., q_n(S)) for one contraction S


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 2
    dim: int = 4
    degree: int = DEFAULT_DEGREE
    trials: int = 100
    seed: int = 0
    constraint: TupleConstraint = TupleConstraint.SUM_NORM
    source: PolySource = PolySource.RANDOM
    poly: Poly | None = None
    coeff_dist: CoeffDist = CoeffDist.GAUSSIAN
    normalize: bool = False
    commuting_mode: CommutingMode = CommutingMode.DIAGONAL
    iterations: int = 200
    threads: int = 1

    def __post_init__(self):
        for name, enum_type in (("constraint", TupleConstraint), ("source", PolySource),
                                ("coeff_dist", CoeffDist), ("commuting_mode", CommutingMode)):
            value = getattr(self, name)
            if not isinstance(value, enum_type):
                object.__setattr__(self, name, enum_type(value))
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.n < 1 or self.dim < 1 or self.degree < 0 or self.iterations < 0 or self.threads < 1:
            raise ValueError("n, dim and threads must be positive; degree and iterations non-negative")
        if self.source is PolySource.FIXED:
            if self.poly is None:
                raise ValueError("a fixed polynomial source needs poly")
            if self.poly.nvars != self.n:
                raise ValueError("poly has the wrong number of variables")

    def to_dict(self) -> dict:
        d = {k: v.value if isinstance(v, enum.Enum) else v for k, v in asdict(self).items() if k != "poly"}
        d["poly"] = None if self.poly is None else poly_to_dict(self.poly)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        d = dict(d)
        if d.get("poly") is not None:
            d["poly"] = poly_from_dict(d["poly"])
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config fields {sorted(unknown)}")
        return cls(**d)


@dataclass
class RatioRecord:
    trial: int
    polynomial: dict
    tuple: list
    lhs: float
    rhs: float
    rhs_kind: str
    domain: str
    ratio: float
    violated: bool
    extra: dict = field(default_factory=dict)

    def __lt__(self, other: RatioRecord) -> bool:
        return self.ratio < other.ratio

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _record(trial: int, p: Poly, T: MatrixTuple | None, lhs: float, rhs: float, rhs_kind: str, domain: str,
            **extra) -> RatioRecord:
    ratio = lhs / rhs if rhs > 0 else (math.inf if lhs > 0 else 0.0)
    return RatioRecord(trial=trial, polynomial=poly_to_dict(p), tuple=[] if T is None else tuple_to_list(T),
                       lhs=float(lhs), rhs=float(rhs), rhs_kind=rhs_kind, domain=domain, ratio=float(ratio),
                       violated=bool(lhs > rhs + TOLERANCE), extra=extra)


def write_records(records: Iterable[RatioRecord], stream) -> int:
    count = 0
    for rec in records:
        stream.write(rec.to_json() + "\n")
        count += 1
    return count


def summarize(records: Sequence[RatioRecord]) -> dict:
    """Counts; records flagged ``expected_violation`` (counterexamples) are counted apart."""
    if not records:
        return {"trials": 0, "violations": 0, "expected_violations": 0, "max_ratio": None}
    expected = [r for r in records if r.extra.get("expected_violation")]
    regular = [r for r in records if not r.extra.get("expected_violation")]
    return {"trials": len(regular), "violations": sum(r.violated for r in regular),
            "expected_violations": sum(r.violated for r in expected),
            "max_ratio": max((r.ratio for r in regular), default=None)}


# -- random objects ---------------------------------------------------------------------


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(trial)])


def _gaussian_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def random_contraction(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Gaussian matrix over its norm, scaled by a random factor half of the time."""
    g = _gaussian_matrix(rng, dim)
    g /= op_norm(g)
    if rng.random() < 0.5:
        g *= rng.random()
    return g


def random_tuple(rng: np.random.Generator, n: int, dim: int, constraint: TupleConstraint,
                 mode: CommutingMode = CommutingMode.DIAGONAL) -> MatrixTuple:
    if constraint is TupleConstraint.COMMUTING:
        return random_commuting_tuple(rng, n, dim, mode)
    if constraint is TupleConstraint.CONTRACTION:
        return MatrixTuple(tuple(random_contraction(rng, dim) for _ in range(n)))
    weights = rng.random(n) + 0.05
    T = MatrixTuple(tuple(w * random_contraction(rng, dim) for w in weights))
    return normalize_to(T, constraint)


def random_commuting_tuple(rng: np.random.Generator, n: int, dim: int,
                           mode: CommutingMode = CommutingMode.DIAGONAL) -> MatrixTuple:
    if mode is CommutingMode.DIAGONAL:
        mats = []
        for _ in range(n):
            radius = np.sqrt(rng.random(dim))
            phase = np.exp(2j * np.pi * rng.random(dim))
            mats.append(np.diag(radius * phase))
        return MatrixTuple(tuple(mats))
    S = random_contraction(rng, dim)
    mats = []
    for _ in range(n):
        q = random_poly(rng, 1, 3)
        M = commuting_apply(q, MatrixTuple.of(S))
        norm = op_norm(M)
        mats.append(M / norm if norm > 1 else M)
    return MatrixTuple(tuple(mats))


def random_poly(rng: np.random.Generator, n: int, degree: int, dist: CoeffDist = CoeffDist.GAUSSIAN) -> Poly:
    """All monomials of total degree at most ``degree`` with random coefficients."""
    terms = {}
    for alpha in np.ndindex(*(degree + 1,) * n):
        if sum(alpha) > degree:
            continue
        if dist is CoeffDist.GAUSSIAN:
            terms[alpha] = complex(rng.standard_normal(), rng.standard_normal())
        else:
            terms[alpha] = math.sqrt(rng.random()) * complex(np.exp(2j * np.pi * rng.random()))
    return Poly(n, terms)


def _draw_poly(rng: np.random.Generator, cfg: ExperimentConfig, n: int | None = None) -> Poly:
    if cfg.source is PolySource.FIXED:
        return cfg.poly
    p = random_poly(rng, n or cfg.n, int(rng.integers(1, cfg.degree + 1)) if cfg.degree else 0, cfg.coeff_dist)
    if cfg.normalize:
        p = p * (1.0 / sup_norm(p, Domain.polydisk(p.nvars)).lower)
    return p


def run_trials(fn: Callable[[int], list[RatioRecord]], cfg: ExperimentConfig) -> list[RatioRecord]:
    if cfg.threads == 1:
        chunks = [fn(t) for t in range(cfg.trials)]
    else:
        with ThreadPoolExecutor(cfg.threads) as pool:
            chunks = list(pool.map(fn, range(cfg.trials)))
    return [rec for chunk in chunks for rec in chunk]


def _require(cfg: ExperimentConfig, allowed: Sequence[TupleConstraint]) -> None:
    if cfg.constraint not in allowed:
        names = ", ".join(c.value for c in allowed)
        raise ValueError(f"constraint {cfg.constraint.value!r} not allowed here (use {names})")


# -- experiments ------------------------------------------------------------------------


def example7() -> dict:
    """Two reflections and ``p = (z1 - z2)^2 + 2 (z1 + z2) + 1`` with ``symm p = diag(6, 2)``."""
    p = example7_poly()
    T = example7_tuple()
    value = symm_apply(p, T)
    diff_sq = (T[0] - T[1]) @ (T[0] - T[1])
    norm = op_norm(value)
    rho = spectral_radius(value)
    bracket = sup_norm(p, Domain.polydisk(2), refine=3)
    if not (abs(norm - 6) < 1e-9 and abs(rho - 6) < 1e-9):
        raise AssertionError(f"example reproduces norm {norm} and spectral radius {rho}, expected 6")
    return {"poly": poly_to_dict(p), "tuple": tuple_to_list(T), "symm": value, "difference_squared": diff_sq,
            "norm": norm, "spectral_radius": rho, "polydisk_norm": bracket, "value_at_1_minus_1": p((1, -1))}


def gamma_bound_trial(cfg: ExperimentConfig) -> list[RatioRecord]:
    """``||symm p(T)|| <= ||Gamma p||`` on the closed unit polydisk."""
    _require(cfg, (TupleConstraint.SUM_NORM, TupleConstraint.DIAMOND))

    def one(t: int) -> list[RatioRecord]:
        rng = trial_rng(cfg.seed, t)
        T = random_tuple(rng, cfg.n, cfg.dim, cfg.constraint)
        p = _draw_poly(rng, cfg)
        dom = Domain.polydisk(cfg.n)
        lhs = op_norm(symm_apply(p, T))
        return [_record(t, p, T, lhs, sup_norm(gamma(p), dom).upper, "gamma", str(dom))]

    return run_trials(one, cfg)


def theorem_bound_trial(cfg: ExperimentConfig, R: float | None = None, M: float | None = None) -> list[RatioRecord]:
    """Both forms: ``||p||`` on ``R D^n`` and ``M ||p||`` on ``D^n``; two records per trial."""
    _require(cfg, (TupleConstraint.SUM_NORM, TupleConstraint.DIAMOND))
    if cfg.n not in THEOREM_R:
        raise ValueError("theorem constants are available for n = 2, 3")
    R = THEOREM_R[cfg.n] if R is None else R
    M = m_bound(cfg.n).value if M is None else M

    def one(t: int) -> list[RatioRecord]:
        rng = trial_rng(cfg.seed, t)
        T = random_tuple(rng, cfg.n, cfg.dim, cfg.constraint)
        p = _draw_poly(rng, cfg)
        lhs = op_norm(symm_apply(p, T))
        big, unit = Domain.polydisk(cfg.n, R), Domain.polydisk(cfg.n)
        return [_record(t, p, T, lhs, sup_norm(p, big).upper, "scaled_polydisk", str(big), R=R),
                _record(t, p, T, lhs, M * sup_norm(p, unit).upper, "constant_times_norm", str(unit), M=M)]

    return run_trials(one, cfg)


def _split_poly(rng: np.random.Generator, cfg: ExperimentConfig) -> Poly:
    if cfg.source is PolySource.FIXED:
        if any(sum(1 for a in alpha if a) > 1 for alpha in cfg.poly.terms):
            raise ValueError("Drury trials need p(z1, z2) = p1(z1) + p2(z2)")
        return cfg.poly
    deg = int(rng.integers(1, max(cfg.degree, 1) + 1))
    p1, p2 = (random_poly(rng, 1, deg, cfg.coeff_dist) for _ in range(2))
    terms = {}
    for (a,), c in p1.items():
        terms[(a, 0)] = c
    for (b,), c in p2.items():
        terms[(0, b)] = terms.get((0, b), 0) + c
    return Poly(2, terms)


def drury_trial(cfg: ExperimentConfig) -> list[RatioRecord]:
    """``||p1(T1) + p2(T2)|| <= sqrt(2) ||p1(z1) + p2(z2)||`` for contractions; ratio is against ``sqrt(2) ||p||``."""
    _require(cfg, (TupleConstraint.CONTRACTION,))
    if cfg.n != 2:
        raise ValueError("Drury trials are two-variable")

    def one(t: int) -> list[RatioRecord]:
        rng = trial_rng(cfg.seed, t)
        T = random_tuple(rng, 2, cfg.dim, cfg.constraint)
        p = _split_poly(rng, cfg)
        dom = Domain.polydisk(2)
        norm = sup_norm(p, dom).upper
        lhs = op_norm(commuting_apply(p, T))
        return [_record(t, p, T, lhs, ANDO_DRURY * norm, "sqrt2_times_norm", str(dom), norm_ratio=lhs / norm)]

    return run_trials(one, cfg)


def spectral_radius_trial(cfg: ExperimentConfig) -> list[RatioRecord]:
    """``rho(p(T)) <= ||p||`` for commuting contractions; the last record is the non-commuting counterexample."""
    _require(cfg, (TupleConstraint.COMMUTING,))

    def one(t: int) -> list[RatioRecord]:
        rng = trial_rng(cfg.seed, t)
        T = random_commuting_tuple(rng, cfg.n, cfg.dim, cfg.commuting_mode)
        p = _draw_poly(rng, cfg)
        dom = Domain.polydisk(cfg.n)
        return [_record(t, p, T, spectral_radius(commuting_apply(p, T)), sup_norm(p, dom).upper,
                        "norm", str(dom))]

    records = run_trials(one, cfg)
    p7, T7 = example7_poly(), example7_tuple()
    dom = Domain.polydisk(2)
    witness = _record(-1, p7, T7, spectral_radius(symm_apply(p7, T7)), sup_norm(p7, dom, refine=3).upper,
                      "norm", str(dom), expected_violation=True, commuting=False)
    return records + [witness]


def _reflection(t: float) -> np.ndarray:
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, s], [s, -c]])


def contraction_ratio_search(cfg: ExperimentConfig, reflections: bool = False) -> RatioRecord:
    """Hill climbing on ``||symm p(T)|| / ||p||`` over contraction tuples.

    ``cfg.trials`` restarts of ``cfg.iterations`` steps each.  The ratio is
    taken against the grid lower bound of ``||p||``, so it never understates
    the true ratio; ``extra['norm_upper']`` holds the upper bound.
    ``extra['trace']`` is the best value after each restart.  With
    ``reflections`` the tuple is a pair of real 2x2 reflections parametrized
    by their angles; under the commuting constraint the tuple stays diagonal.
    """
    _require(cfg, (TupleConstraint.CONTRACTION, TupleConstraint.COMMUTING))
    if reflections and cfg.n != 2:
        raise ValueError("reflection search is two-variable")
    commuting = cfg.constraint is TupleConstraint.COMMUTING
    dom = Domain.polydisk(cfg.n)
    fixed_p = cfg.poly if cfg.source is PolySource.FIXED else None
    fixed_norm = sup_norm(fixed_p, dom) if fixed_p is not None else None

    def build(x) -> MatrixTuple:
        if reflections:
            return MatrixTuple(tuple(_reflection(a) for a in x))
        if commuting:
            return MatrixTuple(tuple(np.diag(d / np.maximum(1.0, np.abs(d))) for d in x))
        mats = []
        for m in x:
            s = op_norm(m)
            mats.append(m / s if s > 1 else m)
        return MatrixTuple(tuple(mats))

    def one(t: int) -> list[RatioRecord]:
        rng = trial_rng(cfg.seed, t)
        p = fixed_p if fixed_p is not None else _draw_poly(rng, cfg)
        norm = fixed_norm if fixed_p is not None else sup_norm(p, dom)
        if norm.lower <= 0:
            return []

        def score(x) -> float:
            return op_norm(symm_apply(p, build(x)))

        def perturb(x, step):
            if reflections:
                return x + step * rng.standard_normal(2)
            if commuting:
                return [d + step * (rng.standard_normal(cfg.dim) + 1j * rng.standard_normal(cfg.dim)) for d in x]
            return [m + step * _gaussian_matrix(rng, cfg.dim) / math.sqrt(cfg.dim) for m in x]

        if reflections:
            x = rng.uniform(0, 2 * math.pi, 2)
        elif commuting:
            x = [np.diag(m) for m in random_commuting_tuple(rng, cfg.n, cfg.dim).mats]
        else:
            x = [random_contraction(rng, cfg.dim) for _ in range(cfg.n)]
        best = score(x)
        peak = best
        step = 0.5
        for _ in range(cfg.iterations):
            y = perturb(x, step)
            val = score(y)
            peak = max(peak, val)
            if val > best:
                x, best = y, val
            else:
                step = max(step * 0.97, 1e-4)
        return [_record(t, p, build(x), best, norm.lower, "norm_lower_bound", str(dom),
                        norm_upper=norm.upper, peak_lhs=peak)]

    records = run_trials(one, cfg)
    if not records:
        raise ValueError("every sampled polynomial vanished")
    trace, running = [], -math.inf
    for rec in records:
        running = max(running, rec.ratio)
        trace.append(running)
    best = max(records)
    peak = max(r.extra["peak_lhs"] for r in records)
    best.extra.update(trace=trace, restarts=len(records), sampled_max_lhs=peak,
                      exceeds_p7_ceiling=peak > P7_SAMPLING_CEILING)
    best.violated = False   # open question: nothing to violate
    return best


def lemma51_trial(cfg: ExperimentConfig, radii: Sequence[float]) -> list[RatioRecord]:
    """``||symm(Lambda_mu q)(T)|| <= sup |q|`` on the torus with the given radii."""
    _require(cfg, (TupleConstraint.CONTRACTION,))
    radii = tuple(float(r) for r in radii)
    if len(radii) != cfg.n:
        raise ValueError(f"{len(radii)} radii for n = {cfg.n}")
    if sum(radii) > 1 + 1e-12:
        raise ValueError("radii must sum to at most 1")
    if min(radii) <= 0:
        raise ValueError("radii must be positive; drop the variable instead of using radius 0")

    def one(t: int) -> list[RatioRecord]:
        rng = trial_rng(cfg.seed, t)
        T = random_tuple(rng, cfg.n, cfg.dim, cfg.constraint)
        q = _draw_poly(rng, cfg)
        p = lambda_mu(q, radii)
        dom = Domain.polydisk(cfg.n, radii)
        return [_record(t, q, T, op_norm(symm_apply(p, T)), sup_norm(q, dom).upper, "q_on_support", str(dom))]

    return run_trials(one, cfg)


def with_overrides(cfg: ExperimentConfig, **changes) -> ExperimentConfig:
    return replace(cfg, **changes)
