"""End-to-end checks behind ``symcalc verify``.

Each check returns a ``CheckResult``; a check passes only if every
assertion holds and it finishes inside its time budget.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels as K
from .multipoly import Poly, example7_poly, gamma, lambda_, lambda_mu
from .ncalc import MatrixTuple, TupleConstraint, example7_tuple, op_norm, spectral_radius, symm_apply, symm_monomial
from .polynorm import Domain, sup_norm
from . import search as S


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    elapsed: float
    budget: float
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = "no time limit" if math.isinf(self.budget) else f"limit {self.budget:.0f}s"
        return f"[{status}] criterion {self.number}: {self.name} ({self.elapsed:.1f}s, {budget})"


def distinct_words(alpha) -> list[tuple[int, ...]]:
    """Every distinct arrangement of the multiset with ``alpha[j]`` copies of ``j``."""
    counts = list(alpha)
    total = sum(counts)
    out: list[tuple[int, ...]] = []
    word: list[int] = []

    def grow():
        if len(word) == total:
            out.append(tuple(word))
            return
        for j, c in enumerate(counts):
            if c:
                counts[j] -= 1
                word.append(j)
                grow()
                word.pop()
                counts[j] += 1

    grow()
    return out


def brute_force_symm(alpha, T: MatrixTuple) -> np.ndarray:
    words = distinct_words(alpha)
    acc = np.zeros((T.dim, T.dim), dtype=complex)
    for w in words:
        m = np.eye(T.dim, dtype=complex)
        for j in w:
            m = m @ T[j]
        acc += m
    return acc / len(words)


def fourier_extraction(alpha, T: MatrixTuple, points: int | None = None) -> np.ndarray:
    """Torus average of ``conj(zeta)^alpha (zeta . T)^|alpha|``."""
    k = sum(alpha)
    points = points or 4 * (k + 1)
    angles = 2 * np.pi * np.arange(points) / points
    acc = np.zeros((T.dim, T.dim), dtype=complex)
    for theta in itertools.product(angles, repeat=T.n):
        zeta = np.exp(1j * np.array(theta))
        M = sum(z * m for z, m in zip(zeta, T.mats))
        acc += np.prod(np.conj(zeta) ** np.array(alpha)) * np.linalg.matrix_power(M, k)
    return acc / points**T.n


def kernel_quadrature(p: Poly, spec: K.KernelSpec, z, points: int) -> complex:
    """Torus average of ``p(zeta) * kernel(z * conj(zeta))``."""
    n = p.nvars
    angles = 2 * np.pi * np.arange(points) / points
    grid = np.stack(np.meshgrid(*([angles] * n), indexing="ij"), axis=-1).reshape(-1, n)
    zeta = np.exp(1j * grid)
    values, _ = K.kernel_eval(spec, np.asarray(z)[None, :] * np.conj(zeta))
    exps, coefs = p.arrays()
    pz = (zeta[:, None, :] ** exps[None, :, :]).prod(axis=2) @ coefs
    return complex(np.mean(pz * values))


def _random_tuple(rng: np.random.Generator, n: int, dim: int) -> MatrixTuple:
    return MatrixTuple(tuple(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)) for _ in range(n)))


# -- the eight checks ------------------------------------------------------------


def check_example7() -> dict:
    p, T = example7_poly(), example7_tuple()
    value = symm_apply(p, T)
    bracket = sup_norm(p, Domain.polydisk(2), refine=3)
    d = {"entry_error": float(np.abs(value - np.diag([6, 2])).max()), "norm": op_norm(value),
         "spectral_radius": spectral_radius(value), "bracket": [bracket.lower, bracket.upper]}
    d["ok"] = (d["entry_error"] <= 1e-10 and abs(d["norm"] - 6) <= 1e-9 and abs(d["spectral_radius"] - 6) <= 1e-9
               and bracket.lower >= 5 - 1e-6 and bracket.upper <= 5 + 5e-3)
    return d


def check_constants() -> dict:
    m2, m3 = K.m_bound(2).value, K.m_bound(3).value
    j2, j3 = K.j1_l2_bound(2), K.j1_l2_bound(3)
    ok = (m2 <= 4.07 and m3 <= 16.6 and j2[0] <= j2[1] <= 1.142761 and j3[0] <= j3[1] <= 0.145161)
    return {"M2": m2, "M3": m3, "j1_n2": list(j2), "j1_n3": list(j3), "M3_below_16_59": m3 < 16.59, "ok": ok}


def check_certificates() -> dict:
    c2 = K.certify_positivity(K.KernelSpec(K.KernelKind.LPRIME, 2), 0.5406)
    c3 = K.certify_positivity(K.KernelSpec(K.KernelKind.LPRIME, 3), 0.39)
    r2, r3 = K.r_bound(2).value, K.r_bound(3).value
    ok = c2.certified and c3.certified and c2.margin > 0 and c3.margin > 0 and r2 <= 1.85 and r3 <= 2.6
    return {"margin_n2": c2.margin, "margin_n3": c3.margin, "R2": r2, "R3": r3, "ok": ok}


def check_hand_bound() -> dict:
    lo, hi = K.bisect_root(K.hand_bound_n3, 0.0, 0.5)
    value = K.hand_bound_n3(0.152)
    return {"at_0.152": value, "root": lo, "inverse_root": 1 / lo,
            "ok": value > 0 and 0.152 < lo < 0.16 and 1 / lo < 6.6}


def check_properties(threads: int = 1) -> dict:
    C = TupleConstraint
    runs = {
        "gamma_n2": S.gamma_bound_trial(S.ExperimentConfig(n=2, dim=6, degree=4, trials=500, seed=11,
                                                           constraint=C.SUM_NORM, threads=threads)),
        "gamma_n3": S.gamma_bound_trial(S.ExperimentConfig(n=3, dim=6, degree=4, trials=500, seed=12,
                                                           constraint=C.DIAMOND, threads=threads)),
        "theorem_n2": S.theorem_bound_trial(S.ExperimentConfig(n=2, dim=6, degree=4, trials=200, seed=13,
                                                               constraint=C.DIAMOND, threads=threads)),
        "theorem_n3": S.theorem_bound_trial(S.ExperimentConfig(n=3, dim=6, degree=4, trials=200, seed=14,
                                                               constraint=C.SUM_NORM, threads=threads)),
        "drury": S.drury_trial(S.ExperimentConfig(n=2, dim=6, degree=4, trials=500, seed=15,
                                                  constraint=C.CONTRACTION, threads=threads)),
        "spectral": S.spectral_radius_trial(S.ExperimentConfig(n=2, dim=6, degree=4, trials=300, seed=16,
                                                               constraint=C.COMMUTING, threads=threads)),
        "lemma51": S.lemma51_trial(S.ExperimentConfig(n=2, dim=6, degree=4, trials=200, seed=17,
                                                      constraint=C.CONTRACTION, threads=threads), (0.5, 0.5)),
    }
    summaries = {k: S.summarize(v) for k, v in runs.items()}
    drury_max = max(r.extra["norm_ratio"] for r in runs["drury"])
    ok = (all(s["violations"] == 0 for s in summaries.values()) and drury_max <= math.sqrt(2) + 1e-8
          and summaries["spectral"]["expected_violations"] == 1)
    return {"summaries": summaries, "drury_max_ratio": drury_max, "ok": ok}


def check_oracles() -> dict:
    rng = np.random.default_rng(2024)
    worst_dp = 0.0
    for n in (1, 2, 3):
        tuples = [_random_tuple(rng, n, 4) for _ in range(20)]
        for alpha in itertools.product(range(7), repeat=n):
            if sum(alpha) > 6:
                continue
            for T in tuples:
                ref = brute_force_symm(alpha, T)
                err = np.abs(symm_monomial(alpha, T) - ref).max() / max(1.0, np.abs(ref).max())
                worst_dp = max(worst_dp, float(err))
    worst_fourier = 0.0
    for n in (1, 2, 3):
        T = _random_tuple(rng, n, 4).scaled(0.5)
        for alpha in itertools.product(range(5), repeat=n):
            if sum(alpha) > 4:
                continue
            lhs = fourier_extraction(alpha, T)
            rhs = math.factorial(sum(alpha)) / math.prod(math.factorial(a) for a in alpha) * symm_monomial(alpha, T)
            worst_fourier = max(worst_fourier, float(np.abs(lhs - rhs).max()))
    return {"dp_vs_brute_force": worst_dp, "fourier": worst_fourier,
            "ok": worst_dp <= 1e-12 and worst_fourier <= 1e-10}


def check_transforms() -> dict:
    rng = np.random.default_rng(7)
    worst_roundtrip = 0.0
    unit_radii_equal = True
    for _ in range(100):
        n = int(rng.integers(1, 4))
        p = S.random_poly(rng, n, int(rng.integers(0, 9)))
        back = lambda_(gamma(p))
        for alpha, c in p.items():
            worst_roundtrip = max(worst_roundtrip, abs(back.coeff(alpha) - c) / max(1.0, abs(c)))
        unit_radii_equal &= lambda_mu(p, (1.0,) * n) == lambda_(p)
    worst_quad = 0.0
    for n, trunc, points in ((2, 60, 72), (3, 8, 32)):
        z = np.array([0.3 * np.exp(0.7j), 0.25 * np.exp(-1.9j), 0.2 * np.exp(2.4j)][:n])
        for alpha in itertools.product(range(5), repeat=n):
            if sum(alpha) > 4:
                continue
            p = Poly.monomial(alpha)
            target = gamma(p)(z)
            for kind in (K.KernelKind.L, K.KernelKind.LPRIME):
                q = kernel_quadrature(p, K.KernelSpec(kind, n, trunc), z, points)
                worst_quad = max(worst_quad, abs(q - target))
    return {"lambda_gamma": worst_roundtrip, "unit_radii_equal": bool(unit_radii_equal), "quadrature": worst_quad,
            "ok": worst_roundtrip <= 1e-12 and unit_radii_equal and worst_quad <= 1e-8}


def check_non_homomorphism() -> dict:
    T = example7_tuple()
    p = Poly(2, {(2, 0): 1, (0, 2): 1})
    gap = op_norm(symm_apply(p * p, T) - np.linalg.matrix_power(symm_apply(p, T), 2))
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(10):
        U = _random_tuple(rng, 2, 4).scaled(0.3)
        a, b, c = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        ell = Poly(2, {(0, 0): a, (1, 0): b, (0, 1): c})
        base = symm_apply(ell, U)
        for m in range(1, 5):
            ref = np.linalg.matrix_power(base, m)
            err = np.abs(symm_apply(ell**m, U) - ref).max() / max(1.0, np.abs(ref).max())
            worst = max(worst, float(err))
    return {"square_gap": gap, "linear_power_error": worst, "ok": gap > 0.1 and worst <= 1e-10}


CHECKS: dict[int, tuple[str, float, Callable[..., dict]]] = {
    1: ("reflection witness exact", 5, check_example7),
    2: ("constants pipeline", 10, check_constants),
    3: ("positivity certificates", 300, check_certificates),
    4: ("hand bound", 1, check_hand_bound),
    5: ("property suite", 600, check_properties),
    6: ("oracle equivalence", math.inf, check_oracles),
    7: ("transform exactness", math.inf, check_transforms),
    8: ("non-homomorphism witnesses", math.inf, check_non_homomorphism),
}


def run_check(number: int, threads: int = 1) -> CheckResult:
    name, budget, fn = CHECKS[number]
    start = time.perf_counter()
    details = fn(threads) if number == 5 else fn()
    elapsed = time.perf_counter() - start
    return CheckResult(number, name, bool(details["ok"]) and elapsed < budget, elapsed, budget, details)
