from itertools import combinations

import numpy as np
import pytest

from flatsphere.diagnostics import lebesgue_proxy
from flatsphere.errors import (
    ConfigError,
    DomainError,
    RankDeficiencyError,
    ResourceError,
    UnsupportedDimensionError,
)
from flatsphere.harmonics import basis_matrix, space_dimension
from flatsphere.points import (
    PointSet,
    approximate_fekete,
    candidate_mesh,
    fekete_points,
    geodesic_distance,
    mesh_norm_estimate,
    separation,
    shrink_degree,
    target_fraction_to_epsilon,
)

from conftest import random_sphere

TETRA = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / np.sqrt(3)


def test_geodesic_distance_examples():
    north, east = np.array([0, 0, 1.0]), np.array([1.0, 0, 0])
    assert geodesic_distance(north, north) == 0.0
    assert geodesic_distance(north, east) == pytest.approx(np.pi / 2)
    assert geodesic_distance(north, -north) == pytest.approx(np.pi)
    with pytest.raises(DomainError):
        geodesic_distance([0, 0, 1.5], north)


def test_coarse_mesh():
    mesh = candidate_mesh(2, np.pi)
    assert len(mesh) >= 4


@pytest.mark.parametrize("res", [0.3, 0.1, 0.03])
def test_mesh_norm_within_resolution(res):
    mesh = candidate_mesh(2, res)
    assert mesh_norm_estimate(mesh, probes=10_000, seed=1) <= res


def test_mesh_deterministic_and_seeded_rotation():
    a, b = candidate_mesh(2, 0.1), candidate_mesh(2, 0.1)
    assert a.points.tobytes() == b.points.tobytes()
    r1, r2 = candidate_mesh(2, 0.1, seed=5), candidate_mesh(2, 0.1, seed=5)
    assert r1.points.tobytes() == r2.points.tobytes()
    assert not np.array_equal(r1.points, a.points)
    assert mesh_norm_estimate(r1, seed=2) <= 0.1


def test_mesh_errors():
    with pytest.raises(ResourceError):
        candidate_mesh(2, 1e-4, max_points=1000)
    with pytest.raises(UnsupportedDimensionError):
        candidate_mesh(3, 0.1)
    with pytest.raises(DomainError):
        candidate_mesh(2, 0.0)


def test_fekete_degree_zero():
    ps = approximate_fekete(2, 0)
    assert len(ps) == 1


def _abs_det(pts, degree):
    return abs(np.linalg.det(basis_matrix(degree, pts)))


def test_fekete_degree_one_is_near_tetrahedron(rng):
    ps = approximate_fekete(2, 1, candidate_mesh(2, 0.05))
    gram = ps.points @ ps.points.T
    off = gram[~np.eye(4, dtype=bool)]
    assert np.all(np.abs(off + 1 / 3) < 0.05)
    # brute force: no random configuration beats the regular tetrahedron
    best_random = max(_abs_det(random_sphere(rng, 4), 1) for _ in range(3000))
    tetra = _abs_det(TETRA, 1)
    assert best_random <= tetra
    assert _abs_det(ps.points, 1) >= 0.99 * tetra


def test_fekete_degree_eight_beats_random_subsets(rng):
    mesh = candidate_mesh(2, 1 / 32)
    ps = approximate_fekete(2, 8, mesh)
    assert len(ps) == 81
    _, chosen = np.linalg.slogdet(basis_matrix(8, ps.points))
    for _ in range(100):
        idx = rng.choice(len(mesh), size=81, replace=False)
        _, other = np.linalg.slogdet(basis_matrix(8, mesh.points[idx]))
        assert chosen >= other


def test_fekete_rank_deficiency():
    with pytest.raises(RankDeficiencyError):
        approximate_fekete(2, 6, candidate_mesh(2, 1.0))


def test_fekete_deterministic():
    a = approximate_fekete(2, 5)
    b = approximate_fekete(2, 5)
    assert a.points.tobytes() == b.points.tobytes()


def test_shrink_degree_examples():
    assert shrink_degree(20, 0.2) == 12
    assert shrink_degree(10, 0.05) == 9
    assert shrink_degree(10, 0.15) == 7


@pytest.mark.parametrize("L,eps", [(10, 0.0), (10, 0.5), (10, -0.2), (0, 0.2), (10, 0.75)])
def test_shrink_degree_rejects(L, eps):
    with pytest.raises(ConfigError):
        shrink_degree(L, eps)


def test_cardinality_ratio_tends_to_limit():
    for eps in (0.1, 0.2):
        gaps = []
        for L in (10, 100, 1000, 10_000):
            n = space_dimension(2, shrink_degree(L, eps))
            ratio = n / space_dimension(2, L)
            assert ratio == (int((1 - 2 * eps) * L + 1e-9) + 1) ** 2 / (L + 1) ** 2
            gaps.append(abs(ratio - (1 - 2 * eps) ** 2))
        assert gaps[-1] < 1e-3 and gaps[-1] < gaps[0]


def test_target_fraction_to_epsilon():
    assert target_fraction_to_epsilon(2, 0.64) == pytest.approx(0.1)
    assert target_fraction_to_epsilon(3, 0.512) == pytest.approx(0.1)
    assert target_fraction_to_epsilon(2, 1 - 1e-12) == pytest.approx(0.0, abs=1e-12)


def test_separation_examples():
    tet = PointSet(2, TETRA, 1)
    assert separation(tet) == pytest.approx(np.arccos(-1 / 3), abs=1e-12)
    assert np.arccos(-1 / 3) == pytest.approx(1.9106, abs=1e-4)
    dup = PointSet(2, [[0, 0, 1.0], [1.0, 0, 0], [0, 0, 1.0]], 1)
    assert separation(dup) == 0.0
    with pytest.raises(DomainError):
        separation(PointSet(2, [[0, 0, 1.0]], 0))


def test_separation_and_vandermonde_over_degree_sweep():
    scaled = []
    for degree in range(4, 29, 4):
        ps = approximate_fekete(2, degree)
        scaled.append(ps.scaled_separation)
        sv = np.linalg.svd(basis_matrix(degree, ps.points), compute_uv=False)
        assert sv.min() > 0
    scaled = np.array(scaled)
    print("separation*(degree+1) over degrees 4..28:", np.round(scaled, 3))
    assert scaled.min() > 0.5 * scaled[0]


def test_lebesgue_proxy_recorded():
    values = []
    probes = candidate_mesh(2, 0.01)
    for degree in range(1, 9):
        values.append(lebesgue_proxy(approximate_fekete(2, degree), probes))
    print("Lebesgue proxy for degrees 1..8:", np.round(values, 3))
    assert all(v >= 1 - 1e-9 for v in values)


def test_point_set_validation():
    with pytest.raises(DomainError):
        PointSet(2, [[0, 0, 1.0 + 1e-9]], 0)
    ps = fekete_points(2, 10, 0.05)
    assert len(ps) == 100 and ps.degree == 9 and ps.epsilon == 0.05
    assert not ps.points.flags.writeable
