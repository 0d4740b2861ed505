"""The flattened orthonormal system.

With ``B = Delta**(-1/2)`` the functions ``Psi_i = sum_j B_ij b(., z_j)`` are
orthonormal; mixing them with the unitary DFT ``n**(-1/2) F`` gives the
uniformly bounded ``s_i = sum_j A_ij b(., z_j)``, ``A = n**(-1/2) F B``.
Indices are 0-based; row i of ``A`` is the function with DFT exponent
``(i + 1)(j + 1)``.
"""
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from ._geometry import as_unit_vectors, inner_fixed_order
from .cutoff import br_kernel, kernel_norm_sq
from .errors import ResolutionError, ResourceError, VerificationError
from .gramian import PD_TOLERANCE, build_gram, inv_sqrt
from .points import candidate_mesh

BUILD_TOLERANCE = 1e-8
MAX_EVAL_ENTRIES = 50_000_000
_CHUNK_ENTRIES = 4_000_000


def dft_matrix(n):
    """``F[i, j] = exp(2 pi i (i+1)(j+1) / n)`` with exponents reduced mod n."""
    idx = np.arange(1, n + 1, dtype=np.int64)
    expo = np.outer(idx, idx) % n
    return np.exp(2j * np.pi * expo / n)


def orthonormality_residual(coefficients, gram):
    """``max |A Delta A* - I|``: zero iff the rows give orthonormal functions."""
    a = np.asarray(coefficients)
    g = getattr(gram, "entries", gram)
    prod = a @ g @ a.conj().T
    return float(np.abs(prod - np.eye(a.shape[0])).max())


@dataclass(frozen=True, eq=False)
class FlatSystem:
    points: object
    spec: object
    coefficients: np.ndarray
    norm_sq: float
    gram: object = field(default=None, repr=False)
    inv_sqrt: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        a = np.array(self.coefficients, dtype=np.complex128)
        a.setflags(write=False)
        object.__setattr__(self, "coefficients", a)

    @property
    def n(self):
        return self.coefficients.shape[0]

    @property
    def m(self):
        return self.spec.m

    @property
    def L(self):
        return self.spec.L

    @property
    def epsilon(self):
        return self.spec.epsilon


def build_system(points, spec, tolerance=BUILD_TOLERANCE, pd_tolerance=PD_TOLERANCE):
    """Construct the flat system and verify ``A Delta A* = I`` to ``tolerance``."""
    spec = spec.with_power(1)
    gram = build_gram(points, spec)
    b = inv_sqrt(gram, pd_tolerance)
    n = len(points)
    a = dft_matrix(n) @ b / np.sqrt(n)
    resid = orthonormality_residual(a, gram)
    if not resid <= tolerance:
        raise VerificationError(f"orthonormality residual {resid:.3e} exceeds {tolerance:.1e}", resid)
    b.setflags(write=False)
    return FlatSystem(points, spec, a, kernel_norm_sq(spec), gram, b)


def _node_kernels(system, pts):
    """``b(z_q, node_j)`` arranged as (nodes, points)."""
    t = inner_fixed_order(system.points.points, pts)
    return br_kernel(system.spec, t).reshape(t.shape) / np.sqrt(system.norm_sq)


def _rows(system, rows):
    if rows is None:
        return np.arange(system.n)
    rows = np.atleast_1d(np.asarray(rows))
    if rows.size and (rows.min() < 0 or rows.max() >= system.n):
        raise IndexError(f"function index out of range [0, {system.n})")
    return rows


def _contract(system, rows, kern):
    a = system.coefficients[rows]
    re, im = _backend.flat_contract(a.real, a.imag, kern)
    return re + 1j * im


def evaluate(system, i, z):
    """Value of ``s_i`` at a single point; nodes are summed in ascending order."""
    if not 0 <= i < system.n:
        raise IndexError(f"function index {i} out of range [0, {system.n})")
    pt = as_unit_vectors(z, system.m + 1)
    return complex(_contract(system, [i], _node_kernels(system, pt))[0, 0])


def _mesh_points(mesh, dim):
    return as_unit_vectors(getattr(mesh, "points", mesh), dim)


def evaluate_batch(system, mesh, rows=None):
    """Matrix of ``s_i(q)`` over the rows and mesh points; matches ``evaluate`` exactly."""
    rows = _rows(system, rows)
    pts = _mesh_points(mesh, system.m + 1)
    if rows.size * pts.shape[0] > MAX_EVAL_ENTRIES:
        raise ResourceError(
            f"{rows.size} x {pts.shape[0]} evaluations exceed the cap of {MAX_EVAL_ENTRIES}"
        )
    if pts.shape[0] == 0:
        return np.zeros((rows.size, 0), dtype=np.complex128)
    return _contract(system, rows, _node_kernels(system, pts))


def _chunks(system, pts, width):
    step = max(1, _CHUNK_ENTRIES // max(width, 1))
    for start in range(0, pts.shape[0], step):
        yield pts[start:start + step]


def probe_mesh(system, probe_resolution):
    """Probe mesh for sup-norm estimates; must resolve the band limit."""
    limit = 1.0 / (4.0 * system.L) if system.L > 0 else np.inf
    if probe_resolution > limit * (1 + 1e-12):
        raise ResolutionError(
            f"probe resolution {probe_resolution:.4g} is coarser than 1/(4L) = {limit:.4g}"
        )
    return candidate_mesh(system.m, probe_resolution)


def sup_norms(system, probe_resolution, rows=None):
    """``max |s_i|`` over a probe mesh, for each requested row.

    These are lower bounds for the true sup norms; the probe mesh norm is at
    most ``probe_resolution``.
    """
    rows = _rows(system, rows)
    pts = probe_mesh(system, probe_resolution).points
    best = np.zeros(rows.size)
    for chunk in _chunks(system, pts, rows.size + system.n):
        vals = np.abs(_contract(system, rows, _node_kernels(system, chunk)))
        best = np.maximum(best, vals.max(axis=1))
    return best


def sup_norm(system, i, probe_resolution):
    return float(sup_norms(system, probe_resolution, [i])[0])


def linf_to_Linf_bound(system, probe_resolution):
    """``sup_z sum_j |b(z, z_j)|`` over the probe mesh."""
    pts = probe_mesh(system, probe_resolution).points
    best = 0.0
    for chunk in _chunks(system, pts, system.n):
        best = max(best, float(np.abs(_node_kernels(system, chunk)).sum(axis=0).max()))
    return best
