"""Node sets on the sphere: candidate meshes, approximate Fekete selection,
separation and the degree-shrinking rule."""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import ceil, floor

import numpy as np
import scipy.linalg
from scipy.spatial import cKDTree
from scipy.spatial.transform import Rotation

from ._geometry import as_unit_vectors
from .errors import (
    ConfigError,
    DomainError,
    RankDeficiencyError,
    ResourceError,
    UnsupportedDimensionError,
)
from .harmonics import basis_matrix, space_dimension

# Fibonacci lattices have covering radius ~2.73 / sqrt(N); 8 / r**2 points
# keep the mesh norm below r with a few percent to spare.
MESH_DENSITY = 8.0
MAX_MESH_POINTS = 4_000_000


def geodesic_distance(u, v):
    """Great-circle distance between two unit vectors."""
    u = as_unit_vectors(u)
    v = as_unit_vectors(v, u.shape[1])
    if u.shape[0] != 1 or v.shape[0] != 1:
        raise DomainError("geodesic_distance takes two single points")
    return float(np.arccos(np.clip(u[0] @ v[0], -1.0, 1.0)))


def pairwise_geodesic(x, y):
    return np.arccos(np.clip(np.asarray(x) @ np.asarray(y).T, -1.0, 1.0))


def _chord_to_arc(c):
    return 2.0 * np.arcsin(np.clip(c / 2.0, 0.0, 1.0))


@dataclass(frozen=True, eq=False)
class CandidateMesh:
    points: np.ndarray
    resolution: float
    seed: int | None = None

    def __post_init__(self):
        pts = np.array(as_unit_vectors(self.points), dtype=np.float64)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]


def fibonacci_points(n):
    """Golden-angle spiral with ``n`` points of equal area latitude bands."""
    k = np.arange(n, dtype=np.float64) + 0.5
    z = 1.0 - 2.0 * k / n
    r = np.sqrt((1.0 - z) * (1.0 + z))
    phi = np.pi * (1.0 + np.sqrt(5.0)) * k
    pts = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    return pts / np.linalg.norm(pts, axis=1)[:, None]


def candidate_mesh(m, resolution, seed=None, max_points=MAX_MESH_POINTS):
    """Deterministic near equal-area mesh on S^2 with mesh norm <= resolution.

    A ``seed`` applies a reproducible random rotation, which leaves the mesh
    norm unchanged.
    """
    if m != 2:
        raise UnsupportedDimensionError("candidate meshes are implemented for S^2 only")
    if not resolution > 0:
        raise DomainError("resolution must be positive")
    n = max(4, ceil(MESH_DENSITY / resolution**2))
    if n > max_points:
        raise ResourceError(f"mesh of {n} points exceeds the cap of {max_points}")
    pts = fibonacci_points(n)
    if seed is not None:
        pts = Rotation.random(random_state=seed).apply(pts)
        pts /= np.linalg.norm(pts, axis=1)[:, None]
    return CandidateMesh(pts, float(resolution), seed)


def mesh_norm_estimate(points, probes=10_000, seed=0):
    """Largest distance from a random probe to its nearest point (lower bound on the mesh norm)."""
    pts = np.asarray(getattr(points, "points", points))
    rng = np.random.default_rng(seed)
    q = rng.standard_normal((probes, pts.shape[1]))
    q /= np.linalg.norm(q, axis=1)[:, None]
    chord, _ = cKDTree(pts).query(q)
    return float(_chord_to_arc(chord).max())


def _min_separation(pts):
    if pts.shape[0] < 2:
        raise DomainError("separation needs at least two points")
    chord, _ = cKDTree(pts).query(pts, k=2)
    return float(_chord_to_arc(chord[:, 1]).min())


@dataclass(frozen=True, eq=False)
class PointSet:
    """Nodes on S^m with the Fekete degree they were selected for."""

    m: int
    points: np.ndarray
    degree: int
    epsilon: float | None = None

    def __post_init__(self):
        pts = np.array(as_unit_vectors(self.points, self.m + 1), dtype=np.float64)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]

    @cached_property
    def separation(self):
        return _min_separation(self.points)

    @property
    def scaled_separation(self):
        return self.separation * (self.degree + 1)


def separation(points):
    """Minimum pairwise geodesic distance of a node set."""
    if isinstance(points, PointSet):
        return points.separation
    return _min_separation(as_unit_vectors(points))


def fekete_mesh_resolution(degree):
    return 1.0 / (4.0 * max(degree, 1))


def approximate_fekete(m, degree, mesh=None):
    """Greedy approximate Fekete points of the given degree.

    Column-pivoted QR of the (k x mesh) matrix of orthonormal harmonics picks
    k = dim E_degree candidates, each maximizing the remaining volume.
    """
    if m != 2:
        raise UnsupportedDimensionError("Fekete selection is implemented for S^2 only")
    if int(degree) != degree or degree < 0:
        raise DomainError("degree must be a nonnegative integer")
    if mesh is None:
        mesh = candidate_mesh(m, fekete_mesh_resolution(degree))
    k = space_dimension(m, degree)
    if len(mesh) < k:
        raise RankDeficiencyError(f"mesh has {len(mesh)} candidates, need at least {k}")
    vander = basis_matrix(degree, mesh.points)
    r, piv = scipy.linalg.qr(vander, mode="r", pivoting=True, check_finite=False)
    diag = np.abs(np.diag(r))
    if diag[k - 1] <= k * np.finfo(float).eps * diag[0]:
        raise RankDeficiencyError(
            f"only {int(np.sum(diag > k * np.finfo(float).eps * diag[0]))} of {k} "
            "independent candidate columns; refine the mesh"
        )
    return PointSet(m, mesh.points[piv[:k]], int(degree))


def shrink_degree(L, epsilon):
    """Fekete degree ``floor((1 - 2 epsilon) L)`` whose nodes serve E_L.

    Uses exact decimal arithmetic so that e.g. ``(L=10, epsilon=0.05)`` gives 9.
    """
    if int(L) != L or L < 1:
        raise ConfigError(f"L must be an integer >= 1, got {L!r}")
    if not 0.0 < epsilon < 0.5:
        raise ConfigError(f"epsilon must lie in (0, 1/2), got {epsilon!r}")
    degree = floor((1 - 2 * Fraction(repr(float(epsilon)))) * int(L))
    if degree < 0:
        raise ConfigError("shrunken degree is negative")
    return degree


def node_count(m, L, epsilon):
    return space_dimension(m, shrink_degree(L, epsilon))


def target_fraction_to_epsilon(m, fraction):
    """Smallest epsilon whose asymptotic count ratio ``(1 - 2 eps)**m`` reaches ``fraction``."""
    if not 0.0 < fraction < 1.0:
        raise DomainError("fraction must lie in (0, 1)")
    return (1.0 - fraction ** (1.0 / m)) / 2.0


def fekete_points(m, L, epsilon, mesh=None):
    """Shrunken Fekete node set for the target space E_L."""
    degree = shrink_degree(L, epsilon)
    ps = approximate_fekete(m, degree, mesh)
    return PointSet(m, ps.points, degree, float(epsilon))
