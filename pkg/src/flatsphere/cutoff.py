"""Smooth spectral cutoffs and the localized (Bochner-Riesz type) kernels.

The cutoff is applied to the degree ratio ``l / L``. ``epsilon = 0`` selects
the indicator of [0, 1], which gives the plain reproducing kernel of E_L.
"""
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from ._geometry import as_unit_vectors, clipped_inner
from .errors import DomainError
from .harmonics import ZonalKernelTable, _check_degree, _check_m


def _flat_exp(t):
    """exp(-1/t) for t > 0, else 0."""
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, with f(t) + f(1 - t) = 1."""
    t = np.asarray(t, dtype=np.float64)
    a = _flat_exp(t)
    b = _flat_exp(1.0 - t)
    return a / (a + b)


def beta(epsilon, x):
    """Nonincreasing smooth cutoff: 1 on [0, 1 - epsilon], 0 on [1, inf)."""
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon!r}")
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("cutoff argument must be >= 0")
    inner = (x > 1.0 - epsilon) & (x < 1.0)
    out = np.where(x <= 1.0 - epsilon, 1.0, 0.0)
    if np.any(inner):
        out[inner] = smooth_step((1.0 - x[inner]) / epsilon)
    return out[()]


@dataclass(frozen=True)
class CutoffProfile:
    epsilon: float

    transition = "exponential-flat glue g(t)/(g(t)+g(1-t)), g(t)=exp(-1/t), t=(1-x)/epsilon"

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise DomainError(f"epsilon must lie in (0, 1], got {self.epsilon!r}")

    def __call__(self, x):
        return beta(self.epsilon, x)


@dataclass(frozen=True)
class KernelSpec:
    """Parameters of ``B(z, w) = sum_l beta(l / L)**power Z_l(<z, w>)``."""

    m: int
    L: int
    epsilon: float
    power: int = 1

    def __post_init__(self):
        _check_m(self.m)
        _check_degree(self.L, "L")
        if not 0.0 <= self.epsilon <= 1.0:
            raise DomainError(f"epsilon must lie in [0, 1], got {self.epsilon!r}")
        if self.power not in (1, 2):
            raise DomainError("power must be 1 or 2")

    @property
    def is_indicator(self):
        return self.epsilon == 0

    def with_power(self, power):
        return self if power == self.power else replace(self, power=power)

    @cached_property
    def weights(self):
        """Per-degree multipliers ``beta(l / L)**power`` for l = 0..L."""
        if self.L == 0 or self.is_indicator:
            w = np.ones(self.L + 1)
        else:
            w = beta(self.epsilon, np.arange(self.L + 1) / self.L) ** self.power
        w.setflags(write=False)
        return w

    @cached_property
    def table(self):
        return ZonalKernelTable(self.m, self.weights)


def br_kernel(spec, t):
    """Localized kernel as a function of the inner product ``t = <z, w>``."""
    return spec.table(t)


def kernel_norm_sq(spec):
    """``||B(., w)||_2**2``; independent of w."""
    return spec.table.squared_norm()


def normalized_kernel(spec, z, w):
    """``B(z, w) / ||B(., w)||_2`` for the power-1 kernel of ``spec``."""
    spec = spec.with_power(1)
    z = as_unit_vectors(z, spec.m + 1)
    w = as_unit_vectors(w, spec.m + 1)
    if z.shape[0] != 1 or w.shape[0] != 1:
        raise DomainError("normalized_kernel takes two single points; see normalized_kernel_matrix")
    return float(normalized_kernel_matrix(spec, z, w)[0, 0])


def normalized_kernel_matrix(spec, points, nodes):
    """Matrix ``b(points[q], nodes[j])`` of shape (len(points), len(nodes))."""
    spec = spec.with_power(1)
    t = clipped_inner(np.asarray(points, dtype=np.float64), np.asarray(nodes, dtype=np.float64))
    return br_kernel(spec, t) / np.sqrt(kernel_norm_sq(spec))


def decay_envelope(m, L, N, d):
    """Comparison envelope ``L**m / (1 + L d)**N`` for kernel size at distance d."""
    if not N > m:
        raise DomainError(f"decay exponent N must exceed m = {m}")
    d = np.asarray(d, dtype=np.float64)
    if np.any(d < 0) or np.any(d > np.pi + 1e-12):
        raise DomainError("geodesic distance must lie in [0, pi]")
    return (float(L) ** m / (1.0 + L * d) ** N)[()]
