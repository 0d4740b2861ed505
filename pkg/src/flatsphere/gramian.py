"""Gram matrix of normalized localized kernels, its Riesz constants, inverse
square root and off-diagonal decay measurements."""
from dataclasses import dataclass, field

import numpy as np

from ._geometry import clipped_inner
from .cutoff import br_kernel, kernel_norm_sq
from .errors import (
    DimensionMismatchError,
    FlatsphereError,
    InsufficientDataError,
    NotPositiveDefiniteError,
)
from .points import pairwise_geodesic

PD_TOLERANCE = 1e-8
FIT_FLOOR = 1e-14


@dataclass(eq=False)
class Gramian:
    """``entries[i, j] = <b(., z_i), b(., z_j)>`` for the nodes of ``points``."""

    entries: np.ndarray
    points: object
    spec: object
    spectrum: tuple | None = field(default=None)

    def __len__(self):
        return self.entries.shape[0]


def build_gram(points, spec):
    """Assemble the Gramian in closed zonal form.

    The inner product of two power-1 kernels is the power-2 kernel, so the
    entries are ``B_2(<z_i, z_j>) / ||B_1||**2`` with an exact unit diagonal.
    """
    spec = spec.with_power(1)
    if spec.m != points.m:
        raise DimensionMismatchError(f"kernel on S^{spec.m} but points on S^{points.m}")
    if spec.L < points.degree:
        raise DimensionMismatchError(f"kernel degree {spec.L} below node degree {points.degree}")
    z = points.points
    entries = br_kernel(spec.with_power(2), clipped_inner(z, z)) / kernel_norm_sq(spec)
    entries = np.atleast_2d(entries)
    entries = 0.5 * (entries + entries.T)
    np.fill_diagonal(entries, 1.0)
    entries.setflags(write=False)
    return Gramian(entries, points, spec)


def _matrix(g):
    return g.entries if isinstance(g, Gramian) else np.asarray(g, dtype=np.float64)


def extreme_eigenvalues(g):
    """``(lambda_min, lambda_max)``: the lower and upper Riesz constants."""
    a = _matrix(g)
    try:
        w = np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:
        raise FlatsphereError(f"eigensolver failed: {exc}") from exc
    result = (float(w[0]), float(w[-1]))
    if isinstance(g, Gramian):
        g.spectrum = result
    return result


def inv_sqrt(g, tolerance=PD_TOLERANCE):
    """Symmetric ``A**(-1/2)`` via a full eigendecomposition.

    ``tolerance`` is relative to the largest eigenvalue; anything at or below
    it is treated as a Riesz failure.
    """
    a = _matrix(g)
    w, u = np.linalg.eigh(a)
    lam_min, lam_max = float(w[0]), float(w[-1])
    if isinstance(g, Gramian):
        g.spectrum = (lam_min, lam_max)
    if not lam_min > tolerance * max(lam_max, 0.0):
        raise NotPositiveDefiniteError(
            f"Gramian is not positive definite (lambda_min = {lam_min:.3e}, "
            f"lambda_max = {lam_max:.3e}); the node set fails the Riesz test",
            lam_min,
            lam_max,
        )
    b = (u / np.sqrt(w)) @ u.T
    return 0.5 * (b + b.T)


def linf_row_norm(matrix):
    """``max_i sum_j |a_ij|``, the l-infinity operator norm."""
    return float(np.abs(np.asarray(matrix)).sum(axis=1).max())


@dataclass(frozen=True)
class DecayFit:
    """Least-squares model ``|a_ij| ~ constant / (1 + L d_ij)**exponent``."""

    exponent: float
    constant: float
    residual: float
    samples: int


def offdiag_decay_fit(matrix, points, L):
    """Fit log|a_ij| against log(1 + L d(z_i, z_j)) over off-diagonal entries.

    Entries below 1e-14 are discarded; ``residual`` is the RMS misfit in log
    space.
    """
    a = np.asarray(_matrix(matrix))
    z = getattr(points, "points", points)
    n = a.shape[0]
    if n < 8:
        raise InsufficientDataError(f"decay fit needs at least 8 nodes, got {n}")
    off = ~np.eye(n, dtype=bool)
    dist = pairwise_geodesic(z, z)[off]
    vals = np.abs(a[off])
    keep = vals > FIT_FLOOR
    if keep.sum() < 2:
        raise InsufficientDataError("fewer than two off-diagonal entries above the floor")
    x = np.log1p(L * dist[keep])
    y = np.log(vals[keep])
    design = np.stack([np.ones_like(x), -x], axis=1)
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    rms = float(np.sqrt(np.mean((design @ coef - y) ** 2)))
    return DecayFit(float(coef[1]), float(np.exp(coef[0])), rms, int(keep.sum()))
