"""Command line interface: ``flatsphere {points,build,verify,table,eval}``.

Exit codes: 0 success, 1 verification failed, 2 I/O or configuration error,
3 Riesz failure (singular Gramian), 4 other numerical failure.
"""
import argparse
import contextlib
import csv
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import io
from .cutoff import KernelSpec
from .errors import (
    ConfigError,
    FlatsphereError,
    FormatError,
    NotPositiveDefiniteError,
    ResourceError,
)
from .gramian import linf_row_norm
from .harmonics import space_dimension
from .points import candidate_mesh, fekete_mesh_resolution, fekete_points, shrink_degree
from .points import target_fraction_to_epsilon
from .system import build_system, evaluate_batch, orthonormality_residual
from .verify import (
    TABLE_COLUMNS,
    VerificationReport,
    measure_cell,
    single_kernel_sup,
    sweep_checks,
    system_checks,
)

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_RIESZ, EXIT_NUMERIC = 0, 1, 2, 3, 4
DEFAULT_EPSILON = 0.2


@dataclass
class RunConfig:
    m: int = 2
    L: int = 20
    epsilon: float | None = None
    fraction: float | None = None
    mesh_res: float | None = None
    mesh_seed: int | None = None
    probe_res: float | None = None
    seed: int = 0
    tolerance: float = 1e-8
    out: str | None = None
    L_list: list | None = None
    eps_list: list | None = None

    def resolved_epsilon(self):
        if self.epsilon is not None:
            return float(self.epsilon)
        if self.fraction is not None:
            return target_fraction_to_epsilon(self.m, self.fraction)
        return DEFAULT_EPSILON

    def echo(self):
        d = asdict(self)
        eps = self.resolved_epsilon()
        d["epsilon_resolved"] = eps
        d["fraction_resolved"] = (
            self.fraction if self.fraction is not None else (1.0 - 2.0 * eps) ** self.m
        )
        return d

    @classmethod
    def from_file(cls, path):
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        names = {f.name for f in fields(cls)}
        unknown = set(raw) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**raw)


def _float_list(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _int_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _common(p):
    p.add_argument("--config", help="JSON RunConfig; explicit flags override it")
    p.add_argument("--m", type=int, help="sphere dimension (default 2)")
    p.add_argument("-L", "--degree", dest="L", type=int, help="degree cutoff of the target space")
    eps = p.add_mutually_exclusive_group()
    eps.add_argument("--epsilon", type=float, help="cutoff/shrink parameter in (0, 1/2)")
    eps.add_argument("--fraction", type=float, help="target asymptotic fraction n / k_L")
    p.add_argument("--mesh-res", dest="mesh_res", type=float, help="Fekete candidate mesh resolution")
    p.add_argument("--mesh-seed", dest="mesh_seed", type=int, help="random rotation of the candidate mesh")
    p.add_argument("--probe-res", dest="probe_res", type=float, help="sup-norm probe resolution")
    p.add_argument("--seed", type=int, help="seed for randomized diagnostics")
    p.add_argument("--tolerance", type=float, help="orthonormality tolerance for build")
    p.add_argument("--out", help="output path (default stdout where sensible)")
    out = p.add_mutually_exclusive_group()
    out.add_argument("--quiet", action="store_true")
    out.add_argument("--json", action="store_true", help="print a JSON summary")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="flatsphere", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("points", help="select shrunken Fekete nodes")
    _common(p)

    p = sub.add_parser("build", help="build the flat orthonormal system from a points file")
    p.add_argument("points_file")
    p.add_argument("--gram-out", help="also export the Gramian (.json or .csv)")
    p.add_argument("--inv-sqrt-out", help="also export the inverse square root (.json or .csv)")
    _common(p)

    p = sub.add_parser("verify", help="run the verification checks on a system file")
    p.add_argument("system_file")
    _common(p)

    p = sub.add_parser("table", help="sweep (L, epsilon) and tabulate the measurements")
    p.add_argument("--L-list", dest="L_list", type=_int_list, help="comma separated degrees")
    p.add_argument("--eps-list", dest="eps_list", type=_float_list, help="comma separated epsilons")
    p.add_argument("--check", action="store_true", help="evaluate the sweep stability criteria")
    p.add_argument("--report", help="write the sweep report JSON here")
    _common(p)

    p = sub.add_parser("eval", help="evaluate system functions on points or a mesh")
    p.add_argument("system_file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--points", dest="eval_points", help="points JSON file to evaluate at")
    src.add_argument("--at-mesh", dest="eval_mesh", type=float, help="evaluate on a mesh of this resolution")
    p.add_argument("--rows", type=_int_list, help="function indices (default all)")
    _common(p)
    return parser


def _config(args):
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    for f in fields(RunConfig):
        val = getattr(args, f.name, None)
        if val is not None:
            setattr(cfg, f.name, val)
    if args.epsilon is not None:
        cfg.fraction = None
    elif args.fraction is not None:
        cfg.epsilon = None
    return cfg


def _emit(args, summary, text):
    if args.quiet:
        return
    if args.json:
        print(json.dumps(summary, sort_keys=True))
    else:
        print(text)


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_points(args, cfg):
    eps = cfg.resolved_epsilon()
    degree = shrink_degree(cfg.L, eps)
    mesh = None
    if cfg.mesh_res is not None or cfg.mesh_seed is not None:
        mesh = candidate_mesh(cfg.m, cfg.mesh_res or fekete_mesh_resolution(degree), cfg.mesh_seed)
    pts = fekete_points(cfg.m, cfg.L, eps, mesh)
    if cfg.out is None:
        raise ConfigError("points: --out is required")
    io.save_points(cfg.out, pts, cfg.L)
    k = space_dimension(cfg.m, cfg.L)
    sep = pts.separation if len(pts) > 1 else float("nan")
    summary = {"n": len(pts), "k_L": k, "ratio": len(pts) / k, "degree": degree,
               "epsilon": eps, "separation": sep, "scaled_separation": sep * (degree + 1)}
    _emit(args, summary, f"n={len(pts)} k_L={k} ratio={len(pts) / k:.6f} degree={degree} "
                         f"separation={sep:.6g} separation*(degree+1)={sep * (degree + 1):.6g}")
    return EXIT_OK


def cmd_build(args, cfg):
    pts, file_L = io.load_points(args.points_file)
    L = args.L if args.L is not None else (file_L if file_L is not None else cfg.L)
    if args.epsilon is not None or args.fraction is not None:
        eps = cfg.resolved_epsilon()
    else:
        eps = pts.epsilon if pts.epsilon is not None else cfg.resolved_epsilon()
    system = build_system(pts, KernelSpec(pts.m, int(L), eps), tolerance=cfg.tolerance)
    if cfg.out is None:
        raise ConfigError("build: --out is required")
    io.save_system(cfg.out, system)
    if args.gram_out:
        io.save_matrix(args.gram_out, system.gram.entries, "gram")
    if args.inv_sqrt_out:
        io.save_matrix(args.inv_sqrt_out, system.inv_sqrt, "inv_sqrt")
    lam_min, lam_max = system.gram.spectrum
    resid = orthonormality_residual(system.coefficients, system.gram)
    linf = linf_row_norm(system.inv_sqrt)
    summary = {"n": system.n, "L": system.L, "epsilon": eps, "lambda_min": lam_min,
               "lambda_max": lam_max, "linf_inv_sqrt": linf, "orthonormality_residual": resid}
    _emit(args, summary, f"n={system.n} lambda_min={lam_min:.6g} lambda_max={lam_max:.6g} "
                         f"linf(inv_sqrt)={linf:.6g} residual={resid:.3e}")
    return EXIT_OK


def cmd_verify(args, cfg):
    system = io.load_system(args.system_file)
    cfg.m, cfg.L, cfg.epsilon, cfg.fraction = system.m, system.L, system.epsilon, None
    report = VerificationReport(config=cfg.echo())
    report.config["system_file"] = args.system_file
    t0 = time.perf_counter()
    records, timings = system_checks(system, seed=cfg.seed, probe_resolution=cfg.probe_res)
    report.add(*records)
    report.timings.update(timings, total_s=time.perf_counter() - t0)
    if cfg.out:
        io.write_json(cfg.out, report.to_dict())
    _emit(args, report.to_dict(), report.summary())
    return EXIT_OK if report.overall else EXIT_VERIFY


def cmd_table(args, cfg):
    Ls = cfg.L_list or [8, 12, 16, 20, 24, 28]
    epss = cfg.eps_list or [cfg.resolved_epsilon()]
    rows = []
    with _output(cfg.out) as fh:
        w = csv.writer(fh)
        w.writerow(TABLE_COLUMNS)
        fh.flush()
        for eps in epss:
            for L in Ls:
                row = measure_cell(L, eps, cfg.m)
                rows.append(row)
                w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row.as_list()])
                fh.flush()
    status = EXIT_OK
    if args.check or args.report:
        report = VerificationReport(config=cfg.echo())
        report.config.update(L_list=Ls, eps_list=epss)
        for eps in epss:
            sub = [r for r in rows if r.epsilon == eps]
            contrast = [single_kernel_sup(min(Ls), eps, cfg.m), single_kernel_sup(max(Ls), eps, cfg.m)]
            for rec in sweep_checks(sub, contrast):
                rec.name = f"{rec.name}[eps={eps:g}]"
                report.add(rec)
        if args.report:
            io.write_json(args.report, report.to_dict())
        if not args.quiet:
            print(report.summary(), file=sys.stderr if cfg.out in (None, "-") else sys.stdout)
        status = EXIT_OK if report.overall else EXIT_VERIFY
    if any(r.error for r in rows):
        status = status or EXIT_NUMERIC
    return status


def cmd_eval(args, cfg):
    system = io.load_system(args.system_file)
    if args.eval_points:
        pts = io.load_points(args.eval_points)[0].points
    else:
        pts = candidate_mesh(system.m, args.eval_mesh).points
    rows = np.arange(system.n) if args.rows is None else np.asarray(args.rows)
    values = evaluate_batch(system, pts, rows)
    with _output(cfg.out) as fh:
        io.write_eval_csv(fh, pts, rows, values)
    return EXIT_OK


COMMANDS = {"points": cmd_points, "build": cmd_build, "verify": cmd_verify,
            "table": cmd_table, "eval": cmd_eval}


def _thread_limit():
    value = os.environ.get("FLATSPHERE_THREADS")
    if not value:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=int(value))


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        with _thread_limit():
            return COMMANDS[args.command](args, cfg)
    except NotPositiveDefiniteError as exc:
        print(f"flatsphere: Riesz failure: {exc}", file=sys.stderr)
        return EXIT_RIESZ
    except (ConfigError, FormatError, OSError) as exc:
        print(f"flatsphere: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FlatsphereError, ResourceError, ArithmeticError) as exc:
        print(f"flatsphere: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
