from math import pi

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatsphere.cutoff import (
    CutoffProfile,
    KernelSpec,
    beta,
    br_kernel,
    decay_envelope,
    kernel_norm_sq,
    normalized_kernel,
    normalized_kernel_matrix,
    smooth_step,
)
from flatsphere.diagnostics import brute_force_kernel, gauss_sphere_rule
from flatsphere.errors import DomainError
from flatsphere.harmonics import degree_dimension, sphere_area

from conftest import random_sphere


def test_beta_examples():
    assert beta(0.2, 0.5) == 1.0
    assert beta(0.2, 1.3) == 0.0
    assert beta(0.2, 0.9) == pytest.approx(0.5, abs=1e-15)
    assert beta(0.2, 1.0) == 0.0
    assert beta(0.2, 0.8) == 1.0


@pytest.mark.parametrize("eps,x", [(0.0, 0.5), (1.5, 0.5), (0.2, -0.1)])
def test_beta_domain(eps, x):
    with pytest.raises(DomainError):
        beta(eps, x)


@pytest.mark.parametrize("eps", [0.05, 0.2, 0.5, 1.0])
def test_beta_monotone_on_grid(eps):
    x = np.linspace(0, 1.5, 10_000)
    b = beta(eps, x)
    assert np.all(np.diff(b) <= 0)
    assert b.min() >= 0 and b.max() <= 1


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 1.0), st.floats(0.0, 1.0))
def test_glue_symmetry(eps, frac):
    s = eps * frac
    if not 0 < s < eps:
        return
    assert beta(eps, 1 - eps + s) + beta(eps, 1 - s) == pytest.approx(1.0, abs=1e-12)


def test_smooth_step_is_flat_at_junctions():
    # every derivative vanishes at 0: f(h) / h**k -> 0
    for k in (1, 3, 6):
        assert smooth_step(1e-2) / 1e-2**k < 1e-20


def test_cutoff_profile():
    prof = CutoffProfile(0.3)
    assert prof(0.7) == 1.0
    assert prof(0.85) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        CutoffProfile(0.0)


def test_kernel_spec_weights():
    spec = KernelSpec(2, 10, 0.2)
    w = spec.weights
    assert w[:9].tolist() == [1.0] * 9
    assert w[-1] == 0.0
    assert w[9] == pytest.approx(0.5)
    assert KernelSpec(2, 10, 0.0).weights.tolist() == [1.0] * 11
    assert KernelSpec(2, 0, 0.2).weights.tolist() == [1.0]
    assert np.allclose(spec.with_power(2).weights, w**2)
    with pytest.raises(DomainError):
        KernelSpec(2, 10, 0.2, power=3)


@pytest.mark.parametrize("L", [0, 1, 3, 10, 25])
def test_indicator_kernel_diagonal(L):
    spec = KernelSpec(2, L, 0.0)
    assert br_kernel(spec, 1.0) == pytest.approx((L + 1) ** 2 / (4 * pi), rel=1e-13)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_degree_zero_kernel_is_constant(m):
    spec = KernelSpec(m, 0, 0.3)
    t = np.linspace(-1, 1, 7)
    np.testing.assert_allclose(br_kernel(spec, t), 1 / sphere_area(m), rtol=1e-14)
    assert kernel_norm_sq(spec) == pytest.approx(1 / sphere_area(m))


@pytest.mark.parametrize("eps", [0.0, 0.1, 0.2, 0.5])
def test_kernel_positive_on_diagonal(eps):
    for m in (2, 3):
        for L in (0, 1, 5, 17):
            assert br_kernel(KernelSpec(m, L, eps), 1.0) > 0


def test_oracle_equivalence_small(rng):
    z = random_sphere(rng, 50)
    w = random_sphere(rng, 50)
    for L in range(7):
        for p in (1, 2):
            spec = KernelSpec(2, L, 0.2, p)
            for a, b in zip(z, w):
                assert br_kernel(spec, a @ b) == pytest.approx(
                    brute_force_kernel(2, L, 0.2, p, a, b), abs=1e-10)


def test_oracle_equivalence_l10(rng):
    spec = KernelSpec(2, 10, 0.2)
    for a, b in zip(random_sphere(rng, 20), random_sphere(rng, 20)):
        assert br_kernel(spec, a @ b) == pytest.approx(brute_force_kernel(2, 10, 0.2, 1, a, b), abs=1e-10)


def test_kernel_norm_examples():
    assert kernel_norm_sq(KernelSpec(2, 3, 0.0)) == pytest.approx(16 / (4 * pi))
    assert kernel_norm_sq(KernelSpec(3, 0, 0.2)) == pytest.approx(1 / sphere_area(3))
    spec = KernelSpec(2, 12, 0.25)
    manual = sum(beta(0.25, l / 12) ** 2 * degree_dimension(2, l) for l in range(13)) / (4 * pi)
    assert kernel_norm_sq(spec) == pytest.approx(manual)


def test_kernel_norm_growth_like_L_squared():
    ratios = np.array([kernel_norm_sq(KernelSpec(2, L, 0.2)) / L**2 for L in range(8, 41)])
    assert ratios.min() > 0
    assert ratios.max() / ratios.min() < 1.5


@pytest.mark.parametrize("L,eps", [(6, 0.2), (10, 0.5), (9, 0.0)])
def test_parseval_against_quadrature(L, eps):
    spec = KernelSpec(2, L, eps)
    rule = gauss_sphere_rule(L)
    w = np.array([0.3, -0.4, np.sqrt(0.75)])
    vals = br_kernel(spec, np.clip(rule.nodes @ w, -1, 1))
    assert rule.integrate(vals**2) == pytest.approx(kernel_norm_sq(spec), abs=1e-8)


def test_normalized_kernel_diagonal_and_symmetry(rng):
    z, w = random_sphere(rng, 2)
    ind = KernelSpec(2, 7, 0.0)
    assert normalized_kernel(ind, z, z) == pytest.approx(np.sqrt(kernel_norm_sq(ind)), abs=1e-12)
    spec = KernelSpec(2, 7, 0.2)
    diag = br_kernel(spec, 1.0) / np.sqrt(kernel_norm_sq(spec))
    assert normalized_kernel(spec, z, z) == pytest.approx(diag, abs=1e-12)
    assert normalized_kernel(spec, z, w) == normalized_kernel(spec, w, z)


def test_normalized_kernel_unit_l2_norm():
    spec = KernelSpec(2, 9, 0.2)
    rule = gauss_sphere_rule(9)
    w = np.array([[0.0, 0.6, 0.8]])
    vals = normalized_kernel_matrix(spec, rule.nodes, w)[:, 0]
    assert rule.integrate(vals**2) == pytest.approx(1.0, abs=1e-8)


def test_normalized_kernel_rejects_non_unit():
    with pytest.raises(DomainError):
        normalized_kernel(KernelSpec(2, 3, 0.2), [0, 0, 2.0], [0, 0, 1.0])


def test_decay_envelope_examples():
    assert decay_envelope(2, 10, 3, 0.0) == 100.0
    assert decay_envelope(2, 1, 3, 1.0) == pytest.approx(1 / 8)
    with pytest.raises(DomainError):
        decay_envelope(2, 10, 2, 0.5)
    with pytest.raises(DomainError):
        decay_envelope(2, 10, 3, 4.0)


def test_kernel_to_envelope_ratio_is_bounded():
    # recorded, not asserted a priori: the ratio stays finite and modest on a mesh
    L, spec = 20, KernelSpec(2, 20, 0.2)
    d = np.linspace(0, np.pi, 4001)
    ratio = np.abs(br_kernel(spec, np.cos(d))) / decay_envelope(2, L, 3, d)
    print(f"max |B| / envelope at L=20, eps=0.2, N=3: {ratio.max():.4g}")
    assert np.isfinite(ratio).all() and ratio.max() < 1e3
