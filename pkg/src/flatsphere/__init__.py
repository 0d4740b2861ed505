"""Uniformly bounded orthonormal systems of spherical polynomials.

Pipeline: approximate Fekete nodes (:mod:`.points`), localized kernels
(:mod:`.cutoff`), Gramian inverse square root (:mod:`.gramian`) and DFT
flattening (:mod:`.system`).
"""
from ._backend import BACKEND
from .cutoff import KernelSpec, beta, br_kernel, kernel_norm_sq, normalized_kernel
from .errors import (
    ConfigError,
    DomainError,
    FlatsphereError,
    NotPositiveDefiniteError,
    VerificationError,
)
from .gramian import build_gram, extreme_eigenvalues, inv_sqrt
from .harmonics import HarmonicSpace, degree_dimension, space_dimension
from .points import PointSet, approximate_fekete, fekete_points, shrink_degree
from .system import FlatSystem, build_system, evaluate, evaluate_batch, sup_norms

__version__ = "0.1.0"
