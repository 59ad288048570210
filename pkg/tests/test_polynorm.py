from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings

from symcalc.multipoly import Poly, example7_poly, scale_vars
from symcalc.polynorm import Domain, NormEstimate, coeff_upper_bound, parse_domain, sup_norm

from conftest import polys

z1, z2 = Poly.variable(2, 0), Poly.variable(2, 1)


def sampled_max(p, radii, rng, count=20000):
    theta = rng.uniform(0, 2 * np.pi, (count, p.nvars))
    z = np.asarray(radii) * np.exp(1j * theta)
    exps, coefs = p.arrays()
    return float(np.abs((z[:, None, :] ** exps[None]).prod(axis=2) @ coefs).max())


def test_norm_estimate_validation():
    with pytest.raises(ValueError):
        NormEstimate(2.0, 1.0, {})
    with pytest.raises(ValueError):
        NormEstimate(-1.0, 1.0, {})
    est = NormEstimate(1.0, 1.5, {})
    assert est.contains(1.2) and not est.contains(1.6)


def test_domain_parsing():
    assert parse_domain("torus:3") == Domain.torus(3)
    assert parse_domain("polydisk:2:1.85") == Domain.polydisk(2, 1.85)
    assert parse_domain("polydisk:2:0.5,0.25").radii == (0.5, 0.25)
    assert parse_domain("delta:2").kind == "delta"
    for bad in ("torus", "ball:2", "polydisk:2:-1", "polydisk:x:1", "polydisk:2:1,2,3"):
        with pytest.raises(ValueError):
            parse_domain(bad)


def test_unimodular_monomial_on_torus():
    est = sup_norm(z1 * z2, Domain.torus(2))
    assert est.lower == pytest.approx(1.0, abs=1e-12)
    assert 1.0 <= est.upper <= 1.0 + 1e-2


def test_example7_polydisk_norm():
    est = sup_norm(example7_poly(), Domain.polydisk(2), refine=3)
    assert est.lower >= 5 - 1e-6
    assert est.upper <= 5 + 5e-3
    assert est.contains(5.0)


def test_simplex_ball_linear():
    est = sup_norm(z1 + z2, Domain.delta(2))
    assert est.lower <= 1 + 1e-12 <= est.upper + 2e-12
    assert est.upper - est.lower < 0.2


def test_coeff_upper_bound_examples(rng):
    assert coeff_upper_bound(z1 + z2, 1) == 2
    assert coeff_upper_bound(example7_poly(), 1) == 9
    assert coeff_upper_bound(z1 * z2, 2) == 4
    p = Poly(2, {(1, 2): 1 - 1j, (0, 1): 0.5, (3, 0): -2})
    assert coeff_upper_bound(p, 1.3) * (1 + 1e-12) >= sup_norm(p, Domain.polydisk(2, 1.3)).lower


def test_bracket_contains_sampled_values(rng):
    for n, radius in ((1, 1.0), (2, 1.0), (2, 1.85), (3, 0.7)):
        terms = {a: complex(*rng.standard_normal(2)) for a in np.ndindex(*(4,) * n) if sum(a) <= 3}
        p = Poly(n, terms)
        est = sup_norm(p, Domain.polydisk(n, radius))
        assert sampled_max(p, (radius,) * n, rng) <= est.upper + 1e-12
        assert est.lower <= est.upper


def test_scaled_polydisk_matches_scaled_polynomial(rng):
    p = Poly(2, {(2, 1): 1, (0, 1): -1j, (1, 0): 0.4})
    direct = sup_norm(p, Domain.polydisk(2, 1.85))
    scaled = sup_norm(scale_vars(p, 1.85), Domain.polydisk(2))
    assert direct.lower <= scaled.upper + 1e-12 and scaled.lower <= direct.upper + 1e-12


def test_refinement_is_monotone():
    p = example7_poly() * Poly(2, {(0, 1): 1, (3, 0): 0.3j})
    uppers = [sup_norm(p, Domain.polydisk(2), grid=32, refine=k).upper for k in range(5)]
    lowers = [sup_norm(p, Domain.polydisk(2), grid=32, refine=k).lower for k in range(5)]
    for a, b in zip(uppers, uppers[1:]):
        assert b <= a + 1e-12
    for a, b in zip(lowers, lowers[1:]):
        assert b >= a - 1e-12


def test_simplex_ball_inside_polydisk(rng):
    for _ in range(5):
        p = Poly(2, {a: complex(*rng.standard_normal(2)) for a in np.ndindex(3, 3) if sum(a) <= 2})
        delta = sup_norm(p, Domain.delta(2))
        disk = sup_norm(p, Domain.polydisk(2))
        assert delta.lower <= disk.upper + 1e-12


def test_sup_norm_errors():
    with pytest.raises(ValueError):
        sup_norm(z1, Domain.torus(3))
    with pytest.raises(ValueError):
        sup_norm(z1, Domain.torus(2), grid=4)
    with pytest.raises(ValueError):
        Domain.polydisk(2, 0.0)


@settings(max_examples=25, deadline=None)
@given(polys(nvars=2, max_degree=5, max_terms=6))
def test_bracket_property(p):
    est = sup_norm(p, Domain.polydisk(2), grid=64)
    assert 0 <= est.lower <= est.upper
    assert est.upper <= max(est.lower, coeff_upper_bound(p, 1.0))
    rng = np.random.default_rng(0)
    if len(p):
        assert sampled_max(p, (1.0, 1.0), rng, 2000) <= est.upper + 1e-9
