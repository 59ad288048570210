"""Pure numpy implementations of the hot kernels.

Same signatures as the compiled ``_ccore`` extension; used when the
extension is not built or when ``SYMCALC_PURE=1``.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 8192


def poly_eval_grad(exps: np.ndarray, coefs: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values and angular derivatives ``d/dtheta_j`` of a sparse polynomial.

    ``exps`` is (m, n) int, ``coefs`` (m,) complex, ``z`` (P, n) complex.
    Returns ``vals`` (P,) and ``grads`` (P, n) with
    ``grads[:, j] = i * z_j * dp/dz_j``.
    """
    exps = np.asarray(exps, dtype=np.int64)
    coefs = np.asarray(coefs, dtype=complex)
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    npts, n = z.shape
    vals = np.zeros(npts, dtype=complex)
    grads = np.zeros((npts, n), dtype=complex)
    if exps.shape[0] == 0:
        return vals, grads
    top = int(exps.max())
    weighted = 1j * exps.T * coefs  # (n, m)
    for start in range(0, npts, _CHUNK):
        zc = z[start:start + _CHUNK]
        pw = zc[:, :, None] ** np.arange(top + 1)  # (P, n, top+1)
        mono = np.ones((zc.shape[0], exps.shape[0]), dtype=complex)
        for j in range(n):
            mono *= pw[:, j, exps[:, j]]
        vals[start:start + _CHUNK] = mono @ coefs
        grads[start:start + _CHUNK] = mono @ weighted.T
    return vals, grads


def symm_table(mats: np.ndarray, top: tuple[int, ...]) -> np.ndarray:
    """Word sums ``W(b) = sum_i T_i W(b - e_i)`` for every ``b <= top``.

    ``W(0) = I``; ``W(b)`` is the sum of all ``|b|!/b!`` distinct words with
    letter counts ``b``. Rows are in C order of the box ``prod(top_j + 1)``.
    """
    mats = np.asarray(mats, dtype=complex)
    n, d, _ = mats.shape
    shape = tuple(t + 1 for t in top)
    table = np.zeros(shape + (d, d), dtype=complex)
    table[(0,) * n] = np.eye(d)
    # index sums increase along C order, so predecessors are always filled first
    for idx in np.ndindex(*shape):
        if not any(idx):
            continue
        acc = np.zeros((d, d), dtype=complex)
        for i in range(n):
            if idx[i]:
                prev = list(idx)
                prev[i] -= 1
                acc += mats[i] @ table[tuple(prev)]
        table[idx] = acc
    return table.reshape((-1, d, d))
