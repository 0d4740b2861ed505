import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatsphere.cutoff import KernelSpec
from flatsphere.diagnostics import gauss_sphere_rule, quadrature_kernel_gram
from flatsphere.errors import (
    DimensionMismatchError,
    InsufficientDataError,
    NotPositiveDefiniteError,
)
from flatsphere.gramian import (
    build_gram,
    extreme_eigenvalues,
    inv_sqrt,
    linf_row_norm,
    offdiag_decay_fit,
)
from flatsphere.points import PointSet, fekete_points, pairwise_geodesic

from conftest import random_sphere


def test_single_point_gram():
    g = build_gram(PointSet(2, [[0, 0, 1.0]], 0), KernelSpec(2, 5, 0.2))
    np.testing.assert_array_equal(g.entries, [[1.0]])


def test_antipodal_degree_zero_is_rank_one():
    ps = PointSet(2, [[0, 0, 1.0], [0, 0, -1.0]], 0)
    g = build_gram(ps, KernelSpec(2, 0, 0.2))
    np.testing.assert_allclose(g.entries, np.ones((2, 2)), atol=1e-15)
    lo, hi = extreme_eigenvalues(g)
    assert lo == pytest.approx(0, abs=1e-15) and hi == pytest.approx(2)
    with pytest.raises(NotPositiveDefiniteError):
        inv_sqrt(g)


def test_gram_validates_inputs():
    ps = PointSet(2, [[0, 0, 1.0]], 6)
    with pytest.raises(DimensionMismatchError):
        build_gram(ps, KernelSpec(2, 5, 0.2))
    with pytest.raises(DimensionMismatchError):
        build_gram(ps, KernelSpec(3, 8, 0.2))


@pytest.mark.parametrize("L,eps", [(8, 0.2), (10, 0.3), (6, 0.1)])
def test_gram_matches_quadrature_oracle(L, eps, rng):
    ps = PointSet(2, random_sphere(rng, 30), 0)
    spec = KernelSpec(2, L, eps)
    g = build_gram(ps, spec)
    oracle = quadrature_kernel_gram(ps, spec, gauss_sphere_rule(L))
    np.testing.assert_allclose(g.entries, oracle, atol=1e-8)


def test_gram_symmetric_unit_diagonal(system_l20):
    g = system_l20.gram.entries
    assert np.abs(g - g.T).max() <= 1e-12
    np.testing.assert_array_equal(np.diag(g), 1.0)


def test_extreme_eigenvalue_examples():
    assert extreme_eigenvalues(np.eye(4)) == (1.0, 1.0)
    lo, hi = extreme_eigenvalues(np.ones((2, 2)))
    assert lo == pytest.approx(0, abs=1e-15) and hi == pytest.approx(2)


def test_riesz_sandwich(system_l20, rng):
    g = system_l20.gram
    lo, hi = extreme_eigenvalues(g)
    a = rng.standard_normal((100, len(g)))
    quad = np.einsum("ki,ij,kj->k", a, g.entries, a)
    norm2 = (a**2).sum(axis=1)
    assert np.all(lo * norm2 <= quad * (1 + 1e-12))
    assert np.all(quad <= hi * norm2 * (1 + 1e-12))


def test_riesz_bound_over_sweep():
    lam = []
    for L in (8, 12, 16, 20):
        g = build_gram(fekete_points(2, L, 0.2), KernelSpec(2, L, 0.2))
        lam.append(extreme_eigenvalues(g)[0])
    print("lambda_min over L=8..20:", np.round(lam, 4))
    assert min(lam) >= 0.5 * lam[0]


def test_inv_sqrt_examples():
    np.testing.assert_array_equal(inv_sqrt(np.eye(3)), np.eye(3))
    np.testing.assert_allclose(inv_sqrt(np.diag([4.0, 1.0])), np.diag([0.5, 1.0]), atol=1e-15)


def test_inv_sqrt_random_spd(rng):
    x = rng.standard_normal((50, 50))
    a = x @ x.T / 50 + 0.1 * np.eye(50)
    b = inv_sqrt(a)
    assert np.abs(b @ a @ b - np.eye(50)).max() <= 1e-10
    assert np.abs(b - b.T).max() <= 1e-12


def test_inv_sqrt_of_gram(system_l20):
    b = system_l20.inv_sqrt
    g = system_l20.gram.entries
    assert np.abs(b @ g @ b - np.eye(len(g))).max() <= 1e-10
    assert np.abs(b - b.T).max() <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**31 - 1))
def test_inv_sqrt_residual_property(n, seed):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    a = (q * rng.uniform(0.05, 5.0, n)) @ q.T
    b = inv_sqrt(a)
    assert np.abs(b @ a @ b - np.eye(n)).max() <= 1e-10


def test_linf_row_norm_examples():
    assert linf_row_norm(np.eye(5)) == 1.0
    assert linf_row_norm(np.ones((4, 4))) == 4.0
    assert linf_row_norm([[1, -3], [2, 0.5]]) == 4.0


def test_decay_fit_recovers_synthetic_exponent(rng):
    pts = random_sphere(rng, 40)
    L = 12
    d = pairwise_geodesic(pts, pts)
    mat = (1 + L * d) ** -3.0
    fit = offdiag_decay_fit(mat, pts, L)
    assert fit.exponent == pytest.approx(3.0, abs=1e-6)
    assert fit.constant == pytest.approx(1.0, abs=1e-6)
    assert fit.residual < 1e-8
    mat5 = 2.5 * (1 + L * d) ** -5.0
    fit5 = offdiag_decay_fit(mat5, PointSet(2, pts, 0), L)
    assert fit5.exponent == pytest.approx(5.0, abs=1e-6)
    assert fit5.constant == pytest.approx(2.5, rel=1e-6)


def test_decay_fit_needs_data():
    pts = np.eye(3)
    with pytest.raises(InsufficientDataError):
        offdiag_decay_fit(np.eye(3), pts, 4)


def test_decay_fit_measured_on_gram(system_l20):
    fit_g = offdiag_decay_fit(system_l20.gram, system_l20.points, 20)
    fit_b = offdiag_decay_fit(system_l20.inv_sqrt, system_l20.points, 20)
    print(f"L=20 eps=0.2 decay exponents: gram {fit_g.exponent:.3f}, inv_sqrt {fit_b.exponent:.3f}")
    assert fit_g.exponent > 1 and fit_b.exponent >= fit_g.exponent - 0.5
