# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pycore`` for the reference semantics."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

# above this size the BLAS-backed fallback is faster than the plain loops
BLAS_DIM = 8


def poly_eval_grad(exps, coefs, z):
    cdef cnp.int64_t[:, ::1] e = np.ascontiguousarray(exps, dtype=np.int64)
    cdef double complex[::1] c = np.ascontiguousarray(coefs, dtype=np.complex128)
    zz = np.ascontiguousarray(np.atleast_2d(z), dtype=np.complex128)
    cdef double complex[:, ::1] zv = zz
    cdef Py_ssize_t npts = zv.shape[0], n = zv.shape[1], m = e.shape[0]
    vals_arr = np.zeros(npts, dtype=np.complex128)
    grads_arr = np.zeros((npts, n), dtype=np.complex128)
    cdef double complex[::1] vals = vals_arr
    cdef double complex[:, ::1] grads = grads_arr
    if m == 0:
        return vals_arr, grads_arr
    cdef Py_ssize_t top = int(np.max(exps)) + 1
    pw_arr = np.empty((n, top), dtype=np.complex128)
    cdef double complex[:, ::1] pw = pw_arr
    cdef Py_ssize_t p, j, t, k
    cdef double complex mono, acc
    cdef double complex I = 1j
    for p in range(npts):
        for j in range(n):
            pw[j, 0] = 1.0
            for k in range(1, top):
                pw[j, k] = pw[j, k - 1] * zv[p, j]
        acc = 0
        for t in range(m):
            mono = c[t]
            for j in range(n):
                mono = mono * pw[j, e[t, j]]
            acc = acc + mono
            for j in range(n):
                if e[t, j]:
                    grads[p, j] = grads[p, j] + I * e[t, j] * mono
        vals[p] = acc
    return vals_arr, grads_arr


def symm_table(mats, top):
    mm = np.ascontiguousarray(mats, dtype=np.complex128)
    if mm.shape[1] > BLAS_DIM:
        from . import _pycore
        return _pycore.symm_table(mm, tuple(top))
    cdef double complex[:, :, ::1] T = mm
    cdef Py_ssize_t n = T.shape[0], d = T.shape[1]
    cdef Py_ssize_t node, i, a, b, k, rem, prev
    cdef double complex s
    shape = tuple(int(t) + 1 for t in top)
    cdef Py_ssize_t total = int(np.prod(shape))
    strides_arr = np.ones(n, dtype=np.int64)
    for i in range(n - 2, -1, -1):
        strides_arr[i] = strides_arr[i + 1] * shape[i + 1]
    dims_arr = np.asarray(shape, dtype=np.int64)
    cdef cnp.int64_t[::1] stride = strides_arr
    cdef cnp.int64_t[::1] dims = dims_arr
    table_arr = np.zeros((total, d, d), dtype=np.complex128)
    cdef double complex[:, :, ::1] W = table_arr
    for a in range(d):
        W[0, a, a] = 1.0
    for node in range(1, total):
        rem = node
        for i in range(n):
            if (rem // stride[i]) % dims[i] == 0:
                continue
            prev = node - stride[i]
            for a in range(d):
                for b in range(d):
                    s = 0
                    for k in range(d):
                        s = s + T[i, a, k] * W[prev, k, b]
                    W[node, a, b] = W[node, a, b] + s
    return table_arr
