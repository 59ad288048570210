"""The eight acceptance criteria, each at its stated tolerance and time limit.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line per
criterion.
"""

from __future__ import annotations

import contextlib
import itertools
import math
import time

import numpy as np
import pytest

from symcalc import kernels as K
from symcalc import search as S
from symcalc.multipoly import Poly, example7_poly, gamma, lambda_, lambda_mu
from symcalc.ncalc import MatrixTuple, TupleConstraint, example7_tuple, op_norm, spectral_radius, symm_apply, symm_monomial
from symcalc.polynorm import Domain, sup_norm

C = TupleConstraint


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def run(number: int, name: str, limit: float = math.inf):
        start = time.perf_counter()
        status = "FAIL"
        try:
            yield
            elapsed = time.perf_counter() - start
            assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - start
            budget = "no time limit" if math.isinf(limit) else f"limit {limit:.0f}s"
            with capsys.disabled():
                print(f"\n[{status}] criterion {number}: {name} ({elapsed:.1f}s, {budget})")

    return run


def _complex_tuple(rng, n, dim):
    return MatrixTuple(tuple(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)) for _ in range(n)))


def test_criterion_1_example7(criterion):
    with criterion(1, "reflection witness exact", 5):
        value = symm_apply(example7_poly(), example7_tuple())
        assert np.abs(value - np.diag([6, 2])).max() <= 1e-10
        assert abs(op_norm(value) - 6) <= 1e-9
        assert abs(spectral_radius(value) - 6) <= 1e-9
        bracket = sup_norm(example7_poly(), Domain.polydisk(2), refine=3)
        assert bracket.lower >= 5 - 1e-6
        assert bracket.upper <= 5 + 5e-3


def test_criterion_2_constants(criterion):
    with criterion(2, "constants pipeline", 10):
        assert K.m_bound(2).value <= 4.07
        m3 = K.m_bound(3).value
        assert m3 <= 16.6
        assert m3 < 16.59
        for n, cap in ((2, 1.142761), (3, 0.145161)):
            lo, hi = K.j1_l2_bound(n)
            assert lo <= hi <= cap


def test_criterion_3_certificates(criterion):
    with criterion(3, "positivity certificates", 300):
        c2 = K.certify_positivity(K.KernelSpec(K.KernelKind.LPRIME, 2), 0.5406)
        c3 = K.certify_positivity(K.KernelSpec(K.KernelKind.LPRIME, 3), 0.39)
        assert c2.verdict == "Certified" and c2.margin > 0
        assert c3.verdict == "Certified" and c3.margin > 0
        assert K.r_bound(2).value <= 1.85
        assert K.r_bound(3).value <= 2.6


def test_criterion_4_hand_bound(criterion):
    with criterion(4, "hand bound", 1):
        assert K.hand_bound_n3(0.152) > 0
        lo, hi = 0.0, 0.5
        for _ in range(60):
            mid = (lo + hi) / 2
            lo, hi = (mid, hi) if K.hand_bound_n3(mid) > 0 else (lo, mid)
        assert 0.152 < lo < 0.16
        assert 1 / lo < 6.6


def test_criterion_5_property_suite(criterion):
    with criterion(5, "property suite", 600):
        def cfg(n, trials, seed, constraint):
            return S.ExperimentConfig(n=n, dim=6, degree=4, trials=trials, seed=seed, constraint=constraint)

        runs = [
            S.gamma_bound_trial(cfg(2, 500, 101, C.SUM_NORM)),
            S.gamma_bound_trial(cfg(3, 500, 102, C.DIAMOND)),
        ]
        for n, seed in ((2, 103), (3, 104)):
            records = S.theorem_bound_trial(cfg(n, 200, seed, C.SUM_NORM))
            kinds = [r.rhs_kind for r in records]
            assert kinds.count("scaled_polydisk") == kinds.count("constant_times_norm") == 200
            runs.append(records)
        drury = S.drury_trial(cfg(2, 500, 105, C.CONTRACTION))
        assert max(r.extra["norm_ratio"] for r in drury) <= math.sqrt(2) + 1e-8
        runs.append(drury)
        spectral = [r for r in S.spectral_radius_trial(cfg(2, 300, 106, C.COMMUTING))
                    if not r.extra.get("expected_violation")]
        assert len(spectral) == 300
        runs.append(spectral)
        runs.append(S.lemma51_trial(cfg(2, 200, 107, C.CONTRACTION), (0.5, 0.5)))
        for records in runs:
            for r in records:
                assert r.lhs <= r.rhs + 1e-8, r.to_json()


def _brute_force(alpha, T):
    letters = [j for j, a in enumerate(alpha) for _ in range(a)]
    words = set(itertools.permutations(letters))
    acc = np.zeros((T.dim, T.dim), dtype=complex)
    for w in words:
        acc += np.linalg.multi_dot([np.eye(T.dim)] + [T[j] for j in w] + [np.eye(T.dim)])
    return acc / len(words)


def test_criterion_6_oracles(criterion):
    with criterion(6, "oracle equivalence"):
        rng = np.random.default_rng(6)
        for n in (1, 2, 3):
            tuples = [_complex_tuple(rng, n, 4) for _ in range(20)]
            for alpha in itertools.product(range(7), repeat=n):
                if sum(alpha) > 6:
                    continue
                for T in tuples:
                    ref = _brute_force(alpha, T)
                    assert np.abs(symm_monomial(alpha, T) - ref).max() <= 1e-12 * max(1.0, np.abs(ref).max())
        for n in (1, 2, 3):
            T = _complex_tuple(rng, n, 4).scaled(0.5)
            for alpha in itertools.product(range(5), repeat=n):
                k = sum(alpha)
                if k > 4:
                    continue
                pts = k + 1
                acc = np.zeros((4, 4), dtype=complex)
                for idx in itertools.product(range(pts), repeat=n):
                    zeta = np.exp(2j * np.pi * np.array(idx) / pts)
                    M = sum(z * m for z, m in zip(zeta, T.mats))
                    acc += np.prod(np.conj(zeta) ** np.array(alpha)) * np.linalg.matrix_power(M, k)
                multinomial = math.factorial(k) / math.prod(math.factorial(a) for a in alpha)
                assert np.abs(acc / pts**n - multinomial * symm_monomial(alpha, T)).max() <= 1e-10


def test_criterion_7_transforms(criterion):
    with criterion(7, "transform exactness"):
        rng = np.random.default_rng(7)
        for _ in range(100):
            n = int(rng.integers(1, 4))
            p = S.random_poly(rng, n, int(rng.integers(0, 9)))
            back = lambda_(gamma(p))
            for alpha, c in p.items():
                assert abs(back.coeff(alpha) - c) <= 1e-12 * max(1.0, abs(c))
            assert lambda_mu(p, (1.0,) * n) == lambda_(p)
        for n, trunc, points in ((2, 60, 72), (3, 8, 32)):
            z = np.array([0.3 * np.exp(0.7j), 0.25 * np.exp(-1.9j), 0.2 * np.exp(2.4j)][:n])
            angles = 2 * np.pi * np.arange(points) / points
            zeta = np.exp(1j * np.array(list(itertools.product(angles, repeat=n))))
            for alpha in itertools.product(range(5), repeat=n):
                if sum(alpha) > 4:
                    continue
                target = gamma(Poly.monomial(alpha))(z)
                weights = np.prod(zeta ** np.array(alpha), axis=1)
                for kind in (K.KernelKind.L, K.KernelKind.LPRIME):
                    values, _ = K.kernel_eval(K.KernelSpec(kind, n, trunc), z[None, :] * np.conj(zeta))
                    assert abs(np.mean(weights * values) - target) <= 1e-8


def test_criterion_8_non_homomorphism(criterion):
    with criterion(8, "non-homomorphism witnesses"):
        T = example7_tuple()
        p = Poly(2, {(2, 0): 1, (0, 2): 1})
        assert op_norm(symm_apply(p * p, T) - np.linalg.matrix_power(symm_apply(p, T), 2)) > 0.1
        assert op_norm(symm_apply(example7_poly() ** 2, T) - np.linalg.matrix_power(symm_apply(example7_poly(), T), 2)) > 0.1
        rng = np.random.default_rng(8)
        for _ in range(10):
            U = _complex_tuple(rng, 2, 4).scaled(0.3)
            a, b, c = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            ell = Poly(2, {(0, 0): a, (1, 0): b, (0, 1): c})
            base = symm_apply(ell, U)
            for m in range(1, 5):
                ref = np.linalg.matrix_power(base, m)
                assert np.abs(symm_apply(ell**m, U) - ref).max() <= 1e-10 * max(1.0, np.abs(ref).max())
