"""Spherical harmonic bookkeeping on S^m.

Dimensions, Laplace-Beltrami eigenvalues, Gegenbauer polynomials, zonal
kernels from the addition theorem and an explicit real orthonormal basis on
S^2. Spaces are indexed by polynomial degree ``L``.
"""
from dataclasses import dataclass, field
from math import comb, gamma, pi

import numpy as np

from . import _backend
from ._geometry import as_unit_vectors
from .errors import DomainError, UnsupportedDimensionError

_INT64_MAX = 2**63 - 1
_T_SLACK = 1e-12


def _check_m(m):
    if int(m) != m or m < 2:
        raise DomainError(f"sphere dimension must be an integer >= 2, got {m!r}")


def _check_degree(l, name="l"):
    if int(l) != l or l < 0:
        raise DomainError(f"{name} must be a nonnegative integer, got {l!r}")


def _checked(value, what):
    if value > _INT64_MAX:
        raise OverflowError(f"{what} = {value} does not fit in a 64-bit integer")
    return int(value)


def sphere_area(m):
    """Surface area of the unit sphere S^m in R^(m+1)."""
    return 2.0 * pi ** ((m + 1) / 2) / gamma((m + 1) / 2)


def eigenvalue(m, l):
    """Laplace-Beltrami eigenvalue ``l (l + m - 1)`` of degree-l harmonics."""
    _check_m(m)
    _check_degree(l)
    return l * (l + m - 1)


def degree_dimension(m, l):
    """Dimension of the space H_l of degree-l spherical harmonics on S^m.

    Computed exactly as the difference of homogeneous polynomial space
    dimensions; raises ``OverflowError`` beyond the int64 range.
    """
    _check_m(m)
    _check_degree(l)
    value = comb(l + m, m) - (comb(l + m - 2, m) if l >= 2 else 0)
    return _checked(value, f"dim H_{l}(S^{m})")


def space_dimension(m, L):
    """Dimension k_L of the spherical polynomials of degree <= L on S^m."""
    _check_m(m)
    _check_degree(L, "L")
    value = comb(L + m, m) + (comb(L + m - 1, m) if L >= 1 else 0)
    return _checked(value, f"k_{L}(S^{m})")


@dataclass(frozen=True)
class HarmonicSpace:
    """The space E_L of spherical polynomials of degree <= L on S^m."""

    m: int
    L: int

    def __post_init__(self):
        _check_m(self.m)
        _check_degree(self.L, "L")

    @property
    def dimension(self):
        return space_dimension(self.m, self.L)

    def degree_dimensions(self):
        return [degree_dimension(self.m, l) for l in range(self.L + 1)]

    def eigenvalues(self):
        return [eigenvalue(self.m, l) for l in range(self.L + 1)]


def gegenbauer_recurrence(alpha, lmax):
    """Coefficients (u, v) with ``C_l = u_l t C_{l-1} - v_l C_{l-2}``."""
    if alpha <= 0:
        raise DomainError("recurrence tables require alpha > 0")
    l = np.arange(lmax + 1, dtype=np.float64)
    u = np.zeros(lmax + 1)
    v = np.zeros(lmax + 1)
    u[1:] = 2.0 * (l[1:] + alpha - 1.0) / l[1:]
    v[2:] = (l[2:] + 2.0 * alpha - 2.0) / l[2:]
    return u, v


def gegenbauer_at_one(alpha, l):
    """C_l^alpha(1) = (2 alpha)_l / l!."""
    value = 1.0
    for k in range(1, l + 1):
        value *= (k + 2.0 * alpha - 1.0) / k
    return value


def _check_t(t):
    t = np.asarray(t, dtype=np.float64)
    if np.any(np.abs(t) > 1.0 + _T_SLACK) or np.any(np.isnan(t)):
        raise DomainError("argument t must lie in [-1, 1]")
    return np.clip(t, -1.0, 1.0)


def gegenbauer(alpha, l, t):
    """Gegenbauer polynomial C_l^alpha(t) by forward recurrence.

    ``alpha = 0`` returns the normalized limit ``lim C_l^a(t) / a``, which is
    ``(2 / l) T_l(t)`` for ``l >= 1`` and 1 for ``l = 0``.
    """
    _check_degree(l)
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    t = _check_t(t)
    if alpha == 0:
        if l == 0:
            return np.ones_like(t)[()]
        return (2.0 / l) * np.cos(l * np.arccos(t))[()]
    u, v = gegenbauer_recurrence(alpha, l)
    prev2 = np.zeros_like(t)
    prev = np.ones_like(t)
    for k in range(1, l + 1):
        prev2, prev = prev, u[k] * t * prev - v[k] * prev2
    return prev[()]


def zonal_kernel(m, l, t):
    """Degree-l reproducing kernel of H_l as a function of <z, w>.

    Equals ``sum_j Y_lj(z) Y_lj(w)`` over any orthonormal basis of H_l.
    """
    _check_m(m)
    alpha = (m - 1) / 2.0
    value = gegenbauer(alpha, l, t) / gegenbauer_at_one(alpha, l)
    return degree_dimension(m, l) / sphere_area(m) * value


@dataclass(frozen=True)
class ZonalKernelTable:
    """The zonal function ``t -> sum_l c_l Z_l(t)`` for weights ``c_l >= 0``.

    Series coefficients in the Gegenbauer basis are precomputed once; calls go
    through the selected compute backend.
    """

    m: int
    coefficients: np.ndarray
    surface_area: float = field(init=False)

    def __post_init__(self):
        _check_m(self.m)
        c = np.array(self.coefficients, dtype=np.float64)
        if c.ndim != 1 or c.size == 0:
            raise DomainError("coefficients must be a nonempty 1-d array")
        if np.any(c < 0):
            raise DomainError("zonal weights must be nonnegative")
        c.setflags(write=False)
        alpha = (self.m - 1) / 2.0
        lmax = c.size - 1
        dims = np.array([degree_dimension(self.m, l) for l in range(lmax + 1)], dtype=np.float64)
        at_one = np.array([gegenbauer_at_one(alpha, l) for l in range(lmax + 1)])
        area = sphere_area(self.m)
        series = c * dims / (area * at_one)
        u, v = gegenbauer_recurrence(alpha, lmax)
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "surface_area", area)
        object.__setattr__(self, "_dims", dims)
        object.__setattr__(self, "_series", series)
        object.__setattr__(self, "_rec", (u, v))

    @property
    def degree(self):
        nz = np.nonzero(self.coefficients)[0]
        return int(nz[-1]) if nz.size else 0

    def value_at_one(self):
        """Kernel on the diagonal: ``sum_l c_l dim(H_l) / omega_m``."""
        return float(np.dot(self.coefficients, self._dims) / self.surface_area)

    def squared_norm(self):
        """L2 norm squared of ``K(<., w>)`` for any fixed w (Parseval)."""
        return float(np.dot(self.coefficients**2, self._dims) / self.surface_area)

    def __call__(self, t):
        t = _check_t(t)
        u, v = self._rec
        return _backend.zonal_series(self._series, u, v, t).reshape(t.shape)[()]


def _spherical_angles(points):
    x, y, z = points[:, 0], points[:, 1], points[:, 2]
    return np.clip(z, -1.0, 1.0), np.hypot(x, y), np.arctan2(y, x)


def basis_matrix(degree, points):
    """Real orthonormal harmonics of degree <= ``degree`` on S^2.

    Returns a ``(k, N)`` array, ``k = (degree + 1)**2``. Row ``l*l + l + j``
    holds the degree-l function of order j: ``j = 0`` zonal, ``j > 0`` the
    ``cos(j phi)`` member, ``j < 0`` the ``sin(|j| phi)`` member.
    """
    _check_degree(degree, "degree")
    pts = as_unit_vectors(points, 3)
    x, s, phi = _spherical_angles(pts)
    out = np.empty(((degree + 1) ** 2, pts.shape[0]))
    root2 = np.sqrt(2.0)
    p_mm = np.full_like(x, 1.0 / np.sqrt(4.0 * np.pi))
    for m in range(degree + 1):
        if m > 0:
            p_mm = np.sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * p_mm
            cos_m, sin_m = root2 * np.cos(m * phi), root2 * np.sin(m * phi)
        p_prev2, p_prev = None, p_mm
        for l in range(m, degree + 1):
            if l == m:
                p = p_mm
            elif l == m + 1:
                p = np.sqrt(2.0 * m + 3.0) * x * p_mm
            else:
                a = np.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
                b = np.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
                p = a * (x * p_prev - b * p_prev2)
            if l > m:
                p_prev2, p_prev = p_prev, p
            row = l * l + l
            if m == 0:
                out[row] = p
            else:
                out[row + m] = p * cos_m
                out[row - m] = p * sin_m
    return out


def real_basis_eval(m, l, point):
    """Values of the ``2l + 1`` orthonormal degree-l harmonics at one point of S^2."""
    if m != 2:
        raise UnsupportedDimensionError("explicit harmonic bases are implemented for S^2 only")
    _check_degree(l)
    pt = as_unit_vectors(point, 3)
    if pt.shape[0] != 1:
        raise DomainError("real_basis_eval takes a single point")
    return basis_matrix(l, pt)[l * l:, 0]
