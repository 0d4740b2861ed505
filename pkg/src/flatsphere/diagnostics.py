"""Independent oracles and empirical checks of the auxiliary inequalities.

Everything here that touches kernels does so through the explicit harmonic
basis, never through the zonal closed forms it is meant to check.
"""
from dataclasses import dataclass
from math import ceil

import numpy as np

from ._geometry import as_unit_vectors
from .cutoff import beta
from .errors import ConfigError, DomainError, ResourceError, UnsupportedDimensionError
from .harmonics import HarmonicSpace, basis_matrix, space_dimension, sphere_area
from .points import pairwise_geodesic
from .system import evaluate_batch

ORACLE_MAX_DEGREE = 12


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int

    def integrate(self, values):
        """Integrate sampled values; the last axis runs over the nodes."""
        return np.asarray(values) @ self.weights


def gauss_sphere_rule(L, m=2):
    """Product rule exact for spherical polynomials of degree <= 2L + 2.

    Gauss-Legendre in ``cos(theta)`` times the trapezoid rule in ``phi``.
    """
    if m != 2:
        raise UnsupportedDimensionError("quadrature is implemented for S^2 only")
    exact = 2 * L + 2
    n_theta = ceil((exact + 1) / 2)
    n_phi = 2 * n_theta + 1
    x, w = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    s = np.sqrt((1.0 - x) * (1.0 + x))
    nodes = np.stack(
        [
            np.outer(s, np.cos(phi)).ravel(),
            np.outer(s, np.sin(phi)).ravel(),
            np.repeat(x, n_phi),
        ],
        axis=1,
    )
    nodes /= np.linalg.norm(nodes, axis=1)[:, None]
    weights = np.repeat(w, n_phi) * (2.0 * np.pi / n_phi)
    return QuadratureRule(nodes, weights, exact)


def _oracle_weights(L, epsilon, p):
    if L == 0 or epsilon == 0:
        return np.ones(L + 1)
    return beta(epsilon, np.arange(L + 1) / L) ** p


def brute_force_kernel(m, L, epsilon, p, z, w):
    """``sum_k beta(l_k / L)**p Y_k(z) Y_k(w)`` over the explicit basis."""
    if m != 2:
        raise UnsupportedDimensionError("oracle kernels are implemented for S^2 only")
    if L > ORACLE_MAX_DEGREE:
        raise ResourceError(f"oracle scale is capped at L = {ORACLE_MAX_DEGREE}")
    pts = np.vstack([as_unit_vectors(z, 3), as_unit_vectors(w, 3)])
    y = basis_matrix(L, pts)
    prod = y[:, 0] * y[:, 1]
    weights = _oracle_weights(L, epsilon, p)
    total = 0.0
    for l in range(L + 1):
        total += weights[l] * prod[l * l:(l + 1) ** 2].sum()
    return float(total)


def quadrature_kernel_gram(points, spec, rule):
    """``<b(., z_i), b(., z_j)>`` by quadrature of the explicit-basis kernels."""
    if rule.exactness_degree < 2 * spec.L:
        raise DomainError("quadrature rule not exact for products of the kernels")
    nodes = points.points
    y_nodes = basis_matrix(spec.L, nodes)
    y_rule = basis_matrix(spec.L, rule.nodes)
    w = np.repeat(_oracle_weights(spec.L, spec.epsilon, 1), 2 * np.arange(spec.L + 1) + 1)
    kern = (y_nodes * w[:, None]).T @ y_rule
    norms = rule.integrate(kern**2)
    b = kern / np.sqrt(norms)[:, None]
    return (b * rule.weights) @ b.T


def quadrature_gram(system, rule):
    """``<s_i, s_k>`` by quadrature of the evaluated functions."""
    if rule.exactness_degree < 2 * system.L:
        raise DomainError("quadrature rule not exact for products of the system")
    vals = evaluate_batch(system, rule.nodes)
    return (vals * rule.weights) @ vals.conj().T


def membership_excess(system, rule, extra=2):
    """Largest basis coefficient of any ``s_i`` in degrees L+1 .. L+extra.

    Zero up to rounding when every ``s_i`` lies in E_L.
    """
    top = system.L + extra
    if rule.exactness_degree < system.L + top:
        raise DomainError("quadrature rule too coarse for the membership test")
    vals = evaluate_batch(system, rule.nodes)
    y = basis_matrix(top, rule.nodes)[(system.L + 1) ** 2:]
    coef = (vals * rule.weights) @ y.T
    return float(np.abs(coef).max())


def propbound_sum(points, L, N, probes):
    """``max_z sum_j (1 + L d(z, z_j))**(-N)`` over the probe points."""
    nodes = getattr(points, "points", points)
    m = nodes.shape[1] - 1
    if not N > m:
        raise DomainError(f"N must exceed m = {m}")
    pts = as_unit_vectors(getattr(probes, "points", probes), m + 1)
    best = 0.0
    step = max(1, 2_000_000 // max(len(nodes), 1))
    for start in range(0, pts.shape[0], step):
        d = pairwise_geodesic(pts[start:start + step], nodes)
        best = max(best, float(((1.0 + L * d) ** (-float(N))).sum(axis=1).max()))
    return best


def plancherel_polya(points, space, trials, rule, seed=0, coefficients=None):
    """Sampling-constant estimate for random members of E_L.

    Maximum over random ``phi`` of ``(omega_m / k_L) sum_j |phi(z_j)|**2 / ||phi||**2``,
    i.e. the discrete mean square at the nodes against the normalized-measure
    continuous one. ``||phi||`` is computed with ``rule``. Explicit basis
    ``coefficients`` of shape (trials, k_L) replace the seeded draws.
    """
    if not isinstance(space, HarmonicSpace):
        space = HarmonicSpace(*space)
    if space.m != 2:
        raise UnsupportedDimensionError("explicit test functions exist for S^2 only")
    if rule.exactness_degree < 2 * space.L:
        raise DomainError("quadrature rule not exact for |phi|^2")
    k = space_dimension(space.m, space.L)
    if coefficients is None:
        coef = np.random.default_rng(seed).standard_normal((trials, k))
    else:
        coef = np.atleast_2d(np.asarray(coefficients, dtype=np.float64))
        if coef.shape[1] != k:
            raise DomainError(f"coefficients must have {k} columns")
    nodes = getattr(points, "points", points)
    at_nodes = coef @ basis_matrix(space.L, nodes)
    at_rule = coef @ basis_matrix(space.L, rule.nodes)
    norms = rule.integrate(at_rule**2)
    ratios = sphere_area(space.m) / k * (at_nodes**2).sum(axis=1) / norms
    return float(ratios.max())


def lebesgue_proxy(points, probes):
    """``max_z sum_j |ell_j(z)|`` for the Lagrange basis at Fekete nodes."""
    nodes = getattr(points, "points", points)
    degree = points.degree
    k = space_dimension(2, degree)
    if nodes.shape[0] != k:
        raise ConfigError("Lagrange functions need exactly dim E_degree nodes")
    vander = basis_matrix(degree, nodes)
    pts = as_unit_vectors(getattr(probes, "points", probes), 3)
    lag = np.linalg.solve(vander, basis_matrix(degree, pts))
    return float(np.abs(lag).sum(axis=0).max())
