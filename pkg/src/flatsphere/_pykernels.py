"""Pure NumPy versions of the hot loops.

Both functions perform the floating point operations in exactly the order used
by ``_ckernels.pyx`` so that the two backends agree bit for bit.
"""
import numpy as np


def zonal_series(coef, rec_u, rec_v, t):
    """Evaluate ``sum_l coef[l] * C_l(t)`` for a three-term recurrence family.

    ``C_0 = 1`` and ``C_l = rec_u[l] * t * C_{l-1} - rec_v[l] * C_{l-2}``
    with ``C_{-1} = 0``.
    """
    coef = np.ascontiguousarray(coef, dtype=np.float64)
    rec_u = np.ascontiguousarray(rec_u, dtype=np.float64)
    rec_v = np.ascontiguousarray(rec_v, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    c_prev = np.ones_like(t)
    c_prev2 = np.zeros_like(t)
    out = coef[0] * c_prev
    for l in range(1, coef.shape[0]):
        c = rec_u[l] * t * c_prev - rec_v[l] * c_prev2
        out = out + coef[l] * c
        c_prev2, c_prev = c_prev, c
    return out


def flat_contract(a_re, a_im, k):
    """Return ``(a_re @ k, a_im @ k)`` summed in ascending inner index."""
    a_re = np.asarray(a_re, dtype=np.float64)
    a_im = np.asarray(a_im, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    rows, inner = a_re.shape
    out_re = np.zeros((rows, k.shape[1]))
    out_im = np.zeros((rows, k.shape[1]))
    for j in range(inner):
        kj = k[j]
        out_re += a_re[:, j, None] * kj
        out_im += a_im[:, j, None] * kj
    return out_re, out_im
