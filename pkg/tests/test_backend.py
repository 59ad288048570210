from __future__ import annotations

import numpy as np
import pytest

from symcalc import _backend, _pycore

ccore = pytest.importorskip("symcalc._ccore")


def test_backend_label():
    assert _backend.BACKEND in ("compiled", "python")
    assert _backend.BACKEND == "compiled"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_poly_eval_grad_agrees(n):
    rng = np.random.default_rng(n)
    exps = rng.integers(0, 6, size=(15, n))
    coefs = rng.standard_normal(15) + 1j * rng.standard_normal(15)
    z = np.exp(1j * rng.uniform(0, 2 * np.pi, (40, n))) * rng.uniform(0.2, 1.5, (40, n))
    v1, g1 = _pycore.poly_eval_grad(exps, coefs, z)
    v2, g2 = ccore.poly_eval_grad(exps, coefs, z)
    np.testing.assert_allclose(v2, v1, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(g2, g1, rtol=1e-12, atol=1e-12)


def test_poly_eval_grad_empty():
    v, g = ccore.poly_eval_grad(np.zeros((0, 2), dtype=np.int64), np.zeros(0, dtype=complex), np.ones((3, 2)))
    assert not v.any() and g.shape == (3, 2)


@pytest.mark.parametrize("dim", [1, 3, 8, 12])
@pytest.mark.parametrize("top", [(4,), (3, 2), (2, 2, 2)])
def test_symm_table_agrees(dim, top):
    rng = np.random.default_rng(dim)
    mats = rng.standard_normal((len(top), dim, dim)) + 1j * rng.standard_normal((len(top), dim, dim))
    np.testing.assert_allclose(ccore.symm_table(mats, top), _pycore.symm_table(mats, top), rtol=1e-12, atol=1e-10)
