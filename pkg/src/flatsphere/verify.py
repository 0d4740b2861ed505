"""Verification checks shared by the CLI and the acceptance tests.

A check is either pass-type (value compared with a threshold) or a recorded
measurement. Sweep checks compare measurements across degrees against the
values at the smallest degree.
"""
import os
import platform
import time
from dataclasses import asdict, dataclass, field, fields

import numpy as np
import scipy

from ._backend import BACKEND
from .cutoff import KernelSpec, br_kernel
from .diagnostics import (
    ORACLE_MAX_DEGREE,
    brute_force_kernel,
    gauss_sphere_rule,
    lebesgue_proxy,
    membership_excess,
    plancherel_polya,
    propbound_sum,
    quadrature_gram,
)
from .errors import ConfigError, DomainError, InsufficientDataError, NotPositiveDefiniteError
from .gramian import build_gram, extreme_eigenvalues, inv_sqrt, linf_row_norm, offdiag_decay_fit
from .harmonics import HarmonicSpace, space_dimension
from .points import PointSet, candidate_mesh, fekete_points, shrink_degree
from .system import (
    build_system,
    dft_matrix,
    orthonormality_residual,
    sup_norms,
)

PASS, FAIL, MEASURE = "pass", "fail", "measure"

ORTHONORMALITY_TOL = 1e-10
QUADRATURE_TOL = 1e-8
ORACLE_TOL = 1e-10
RIESZ_FLOOR = 1e-3


@dataclass
class CheckRecord:
    name: str
    value: object
    threshold: object = None
    status: str = MEASURE
    detail: str = ""
    params: dict = field(default_factory=dict)

    def line(self):
        thr = "" if self.threshold is None else f" (threshold {self.threshold})"
        val = f"{self.value:.6g}" if isinstance(self.value, float) else str(self.value)
        extra = f" - {self.detail}" if self.detail else ""
        return f"[{self.status.upper():7s}] {self.name}: {val}{thr}{extra}"


def check(name, value, ok, threshold, detail="", **params):
    return CheckRecord(name, value, threshold, PASS if ok else FAIL, detail, params)


def measure(name, value, detail="", **params):
    return CheckRecord(name, value, None, MEASURE, detail, params)


def environment_stamp():
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "backend": BACKEND,
        "platform": platform.platform(),
        "threads": os.environ.get("FLATSPHERE_THREADS"),
    }


@dataclass
class VerificationReport:
    config: dict
    checks: list = field(default_factory=list)
    environment: dict = field(default_factory=environment_stamp)
    timings: dict = field(default_factory=dict)

    def add(self, *records):
        for rec in records:
            if any(c.name == rec.name for c in self.checks):
                raise ValueError(f"duplicate check {rec.name!r}")
            self.checks.append(rec)

    @property
    def overall(self):
        return all(c.status != FAIL for c in self.checks)

    def to_dict(self):
        return {
            "format": "flatsphere-report/1",
            "overall": PASS if self.overall else FAIL,
            "config": self.config,
            "environment": self.environment,
            "timings": self.timings,
            "checks": [asdict(c) for c in self.checks],
        }

    def summary(self):
        lines = [c.line() for c in self.checks]
        lines.append(f"overall: {PASS if self.overall else FAIL}")
        return "\n".join(lines)


def random_unit_pairs(count, seed, dim=3):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((2, count, dim))
    return x / np.linalg.norm(x, axis=2, keepdims=True)


def kernel_oracle_error(L, epsilon, power, pairs=50, seed=0):
    """Largest |closed form - explicit basis sum| over random point pairs."""
    spec = KernelSpec(2, L, epsilon, power)
    z, w = random_unit_pairs(pairs, seed)
    err = 0.0
    for a, b in zip(z, w):
        closed = float(br_kernel(spec, np.clip(a @ b, -1.0, 1.0)))
        err = max(err, abs(closed - brute_force_kernel(2, L, epsilon, power, a, b)))
    return err


def degenerate_input_checks():
    """Criterion: invalid inputs raise the intended error types."""
    records = []
    dup = PointSet(2, [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]], 1)
    try:
        build_system(dup, KernelSpec(2, 4, 0.2))
        ok, got = False, "no error"
    except NotPositiveDefiniteError:
        ok, got = True, "NotPositiveDefiniteError"
    records.append(check("degenerate_duplicate_node", got, ok, "NotPositiveDefiniteError"))
    bad = []
    for eps in (0.0, 0.5, -0.1, 0.7):
        try:
            shrink_degree(10, eps)
            bad.append(eps)
        except ConfigError:
            pass
    records.append(check("degenerate_epsilon_range", "ConfigError" if not bad else f"accepted {bad}",
                         not bad, "ConfigError"))
    try:
        PointSet(2, [[0.0, 0.0, 1.1]], 0)
        ok, got = False, "no error"
    except DomainError:
        ok, got = True, "DomainError"
    records.append(check("degenerate_non_unit", got, ok, "DomainError"))
    return records


def system_checks(system, seed=0, probe_resolution=None, N=3.0, trials=200):
    """Pass-type invariants and measurements for one built or loaded system."""
    records, timings = [], {}
    t0 = time.perf_counter()
    gram = system.gram if system.gram is not None else build_gram(system.points, system.spec)
    lam_min, lam_max = extreme_eigenvalues(gram)
    resid = orthonormality_residual(system.coefficients, gram)
    records.append(check("orthonormality_closed_form", resid, resid <= ORTHONORMALITY_TOL,
                         ORTHONORMALITY_TOL))
    n = system.n
    f = dft_matrix(n)
    flat = float(np.abs(f @ f.conj().T / n - np.eye(n)).max())
    records.append(check("flattening_identity", flat, flat <= 1e-12, 1e-12))
    timings["closed_form_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    rule = gauss_sphere_rule(system.L)
    q = quadrature_gram(system, rule)
    qerr = float(np.abs(q - np.eye(n)).max())
    records.append(check("orthonormality_quadrature", qerr, qerr <= QUADRATURE_TOL, QUADRATURE_TOL))
    excess = membership_excess(system, rule)
    records.append(check("membership_in_E_L", excess, excess <= QUADRATURE_TOL, QUADRATURE_TOL))
    timings["quadrature_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    L_or = system.L if system.L <= ORACLE_MAX_DEGREE else 6
    eps = system.epsilon
    oerr = max(kernel_oracle_error(L_or, eps, p, seed=seed) for p in (1, 2))
    records.append(check("kernel_oracle_equivalence", oerr, oerr <= ORACLE_TOL, ORACLE_TOL,
                         L=L_or, epsilon=eps))
    timings["oracle_s"] = time.perf_counter() - t0

    if eps is not None and 0 < eps < 0.5 and system.L >= 1:
        expected = space_dimension(system.m, shrink_degree(system.L, eps))
        records.append(check("cardinality", n, n == expected, expected,
                             ratio=n / space_dimension(system.m, system.L)))
    records.append(check("riesz_lower_bound", lam_min, lam_min > RIESZ_FLOOR, RIESZ_FLOOR))
    records.append(measure("riesz_upper_bound", lam_max))

    t0 = time.perf_counter()
    if lam_min > 0:
        b = system.inv_sqrt if system.inv_sqrt is not None else inv_sqrt(gram)
        records.append(measure("linf_norm_inv_sqrt", linf_row_norm(b)))
    else:
        b = None
    if n >= 8:
        fg = offdiag_decay_fit(gram, system.points, system.L)
        records.append(measure("decay_exponent_gram", fg.exponent,
                               constant=fg.constant, residual=fg.residual))
        if b is not None:
            fb = offdiag_decay_fit(b, system.points, system.L)
            records.append(measure("decay_exponent_inv_sqrt", fb.exponent,
                                   constant=fb.constant, residual=fb.residual))
    if system.L >= 1:
        res = probe_resolution or 1.0 / (4 * system.L)
        sup = sup_norms(system, res)
        records.append(measure("max_sup_norm", float(sup.max()), probe_resolution=res,
                               detail="lower bound from probe mesh"))
        mesh = candidate_mesh(system.m, res)
        records.append(measure("propbound_sum", propbound_sum(system.points, system.L, N, mesh), N=N))
    if n >= 2:
        records.append(measure("scaled_separation", system.points.scaled_separation,
                               separation=system.points.separation))
    records.append(measure("plancherel_polya", plancherel_polya(
        system.points, HarmonicSpace(system.m, system.L), trials, rule, seed), trials=trials, seed=seed))
    if system.points.degree <= 8 and n == space_dimension(system.m, system.points.degree):
        probes = candidate_mesh(system.m, 0.02)
        records.append(measure("lebesgue_proxy", lebesgue_proxy(system.points, probes)))
    timings["measurements_s"] = time.perf_counter() - t0
    records.extend(degenerate_input_checks())
    return records, timings


TABLE_COLUMNS = [
    "L", "epsilon", "n", "k_L", "ratio", "lambda_min", "lambda_max", "linf_inv_sqrt",
    "max_sup_norm", "decay_exp_gram", "decay_exp_inv_sqrt", "propbound",
    "scaled_separation", "orthonormality_residual", "time_s", "error",
]


@dataclass
class SweepRow:
    L: int
    epsilon: float
    n: int
    k_L: int
    ratio: float
    lambda_min: float = float("nan")
    lambda_max: float = float("nan")
    linf_inv_sqrt: float = float("nan")
    max_sup_norm: float = float("nan")
    decay_exp_gram: float = float("nan")
    decay_exp_inv_sqrt: float = float("nan")
    propbound: float = float("nan")
    scaled_separation: float = float("nan")
    orthonormality_residual: float = float("nan")
    time_s: float = 0.0
    error: str = ""

    def as_list(self):
        return [getattr(self, f.name) for f in fields(self)]


def measure_cell(L, epsilon, m=2, N=3.0, probe_factor=4.0):
    """Build the system at (L, epsilon) and collect every table column."""
    t0 = time.perf_counter()
    degree = shrink_degree(L, epsilon)
    row = SweepRow(L, epsilon, space_dimension(m, degree), space_dimension(m, L),
                   space_dimension(m, degree) / space_dimension(m, L))
    try:
        pts = fekete_points(m, L, epsilon)
        system = build_system(pts, KernelSpec(m, L, epsilon))
        row.lambda_min, row.lambda_max = system.gram.spectrum
        row.orthonormality_residual = orthonormality_residual(system.coefficients, system.gram)
        row.linf_inv_sqrt = linf_row_norm(system.inv_sqrt)
        res = 1.0 / (probe_factor * L)
        row.max_sup_norm = float(sup_norms(system, res).max())
        row.propbound = propbound_sum(pts, L, N, candidate_mesh(m, res))
        if len(pts) >= 2:
            row.scaled_separation = pts.scaled_separation
        try:
            row.decay_exp_gram = offdiag_decay_fit(system.gram, pts, L).exponent
            row.decay_exp_inv_sqrt = offdiag_decay_fit(system.inv_sqrt, pts, L).exponent
        except InsufficientDataError:
            pass
    except Exception as exc:  # noqa: BLE001 - the table records per-cell failures
        row.error = f"{type(exc).__name__}: {exc}"
    row.time_s = time.perf_counter() - t0
    return row


def single_kernel_sup(L, epsilon, m=2, probe_factor=4.0):
    """Sup norm of one normalized kernel (n = 1): the unflattened control."""
    pole = np.zeros(m + 1)
    pole[-1] = 1.0
    system = build_system(PointSet(m, [pole], 0, epsilon), KernelSpec(m, L, epsilon))
    return float(sup_norms(system, 1.0 / (probe_factor * L)).max())


def sweep_checks(rows, contrast=None, decay_L=20):
    """Cross-degree stability checks; baselines come from the smallest degree."""
    rows = sorted((r for r in rows if not r.error), key=lambda r: r.L)
    if not rows:
        return [CheckRecord("sweep", "no successful cells", None, FAIL)]
    Ls = np.array([r.L for r in rows], dtype=float)
    base = rows[0]
    out = []
    cmax = np.array([r.max_sup_norm for r in rows])
    spread = float(cmax.max() / cmax.min())
    out.append(check("sup_norm_spread", spread, spread <= 2.5, 2.5, Ls=Ls.tolist(), cmax=cmax.tolist()))
    if len(rows) >= 2:
        slope = float(np.polyfit(Ls, cmax, 1)[0])
        lhs, rhs = abs(slope) * Ls.max(), 0.5 * float(np.median(cmax))
        out.append(check("sup_norm_slope", lhs, lhs <= rhs, rhs, slope=slope))
    if contrast is not None:
        growth = float(contrast[-1] / contrast[0])
        out.append(check("single_kernel_growth", growth, growth >= 2.0, 2.0,
                         values=[float(c) for c in contrast]))
    lam = np.array([r.lambda_min for r in rows])
    out.append(check("riesz_floor", float(lam.min()), lam.min() > RIESZ_FLOOR, RIESZ_FLOOR))
    out.append(check("riesz_stability", float(lam.min()), lam.min() >= 0.5 * base.lambda_min,
                     0.5 * base.lambda_min))
    at = [r for r in rows if r.L == decay_L]
    if at:
        r = at[0]
        out.append(check("decay_exponent_gram", r.decay_exp_gram, r.decay_exp_gram >= 3.0, 3.0,
                         L=decay_L, epsilon=r.epsilon))
        floor = r.decay_exp_gram - 0.5
        out.append(check("decay_exponent_inherited", r.decay_exp_inv_sqrt,
                         r.decay_exp_inv_sqrt >= floor, floor, L=decay_L))
    linf = np.array([r.linf_inv_sqrt for r in rows])
    lr = float(linf.max() / linf.min())
    out.append(check("linf_norm_spread", lr, lr <= 2.0, 2.0, values=linf.tolist()))
    pb = np.array([r.propbound for r in rows])
    out.append(check("propbound_stability", float(pb.max()), pb.max() <= 2.0 * base.propbound,
                     2.0 * base.propbound))
    sep = np.array([r.scaled_separation for r in rows])
    out.append(check("separation_stability", float(sep.min()), sep.min() >= 0.5 * base.scaled_separation,
                     0.5 * base.scaled_separation))
    return out
