import numpy as np

from .errors import DomainError

UNIT_TOL = 1e-12


def as_unit_vectors(points, dim=None, tol=UNIT_TOL):
    """Return ``points`` as a float (N, dim) array, rejecting non-unit rows."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise DomainError(f"expected an (N, d) array of points, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise DomainError(f"expected points in R^{dim}, got R^{arr.shape[1]}")
    if arr.shape[0]:
        err = np.abs(np.linalg.norm(arr, axis=1) - 1.0)
        if not np.all(err <= tol):
            bad = int(np.argmax(err))
            raise DomainError(f"point {bad} is not a unit vector (| |x| - 1 | = {err[bad]:.3e})")
    return arr


def clipped_inner(x, y):
    """Pairwise inner products of two point arrays, clipped into [-1, 1]."""
    return np.clip(x @ y.T, -1.0, 1.0)


def inner_fixed_order(x, y):
    """Pairwise inner products summed coordinate by coordinate.

    Unlike a BLAS product, each entry depends only on its own two rows, so the
    result is independent of how the inputs are batched.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    out = x[:, 0, None] * y[None, :, 0]
    for c in range(1, x.shape[1]):
        out = out + x[:, c, None] * y[None, :, c]
    return np.clip(out, -1.0, 1.0)
