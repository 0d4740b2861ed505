# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot loops (see _pykernels for the reference)."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def zonal_series(coef, rec_u, rec_v, t):
    cdef const double[::1] c = np.ascontiguousarray(coef, dtype=np.float64)
    cdef const double[::1] u = np.ascontiguousarray(rec_u, dtype=np.float64)
    cdef const double[::1] v = np.ascontiguousarray(rec_v, dtype=np.float64)
    t_arr = np.ascontiguousarray(t, dtype=np.float64)
    shape = t_arr.shape
    cdef const double[::1] tv = t_arr.reshape(-1)
    out_arr = np.empty(tv.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t q, l, nq = tv.shape[0], nl = c.shape[0]
    cdef double x, acc, cp, cp2, cur
    with nogil:
        for q in range(nq):
            x = tv[q]
            cp = 1.0
            cp2 = 0.0
            acc = c[0] * cp
            for l in range(1, nl):
                cur = u[l] * x * cp - v[l] * cp2
                acc = acc + c[l] * cur
                cp2 = cp
                cp = cur
            out[q] = acc
    return out_arr.reshape(shape)


def flat_contract(a_re, a_im, k):
    cdef const double[:, ::1] ar = np.ascontiguousarray(a_re, dtype=np.float64)
    cdef const double[:, ::1] ai = np.ascontiguousarray(a_im, dtype=np.float64)
    cdef const double[:, ::1] kk = np.ascontiguousarray(k, dtype=np.float64)
    cdef Py_ssize_t rows = ar.shape[0], inner = ar.shape[1], nq = kk.shape[1]
    out_re_arr = np.zeros((rows, nq), dtype=np.float64)
    out_im_arr = np.zeros((rows, nq), dtype=np.float64)
    cdef double[:, ::1] ore = out_re_arr
    cdef double[:, ::1] oim = out_im_arr
    cdef Py_ssize_t i, j, q
    cdef double wr, wi
    with nogil:
        for i in range(rows):
            for j in range(inner):
                wr = ar[i, j]
                wi = ai[i, j]
                for q in range(nq):
                    ore[i, q] = ore[i, q] + wr * kk[j, q]
                    oim[i, q] = oim[i, q] + wi * kk[j, q]
    return out_re_arr, out_im_arr
