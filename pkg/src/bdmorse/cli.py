"""Command-line front end: verify, spectrum, sweep, model, examples."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import cohomology
from .cohomology import relative_cochain_complex
from .errors import (
    BdMorseError,
    ConvergenceFailure,
    DegenerateVertex,
    EnergyCapTooSmall,
    GridTooCoarse,
    NonManifold,
    QuadratureFailure,
    ScheduleTooShort,
    TruncationTooSmall,
)
from .instances import dump_instance, load_instance, make_instance
from .meshes import EXAMPLE_NAMES
from .model_operators import (
    DEFAULT_SCHEDULE,
    CutoffProfile,
    FlatModelSpec,
    OscillatorSpec,
    cylinder_schedule,
    exact_half_line,
    flat_model_trace,
    oscillator_eigen,
    schedule_verdict,
)
from .spectral import DENSE_CAP, CountingFunction, eigensolve, spectrum_rows
from .verifier import verify_instance
from .witten_operator import deformed_laplacians

log = logging.getLogger("bdmorse")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NONMANIFOLD = 3
EXIT_DEGENERATE = 4
EXIT_NUMERIC = 5

DEFAULT_S = (0.0, 1.0, 5.0, 25.0)
DEFAULT_PHI = "heat:1"
MODEL_ERRORS = (ConvergenceFailure, TruncationTooSmall, GridTooCoarse, QuadratureFailure,
                EnergyCapTooSmall, ScheduleTooShort)


class UsageError(Exception):
    pass


def parse_s_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise UsageError(f"bad s-list {text!r}") from exc
    if not values:
        raise UsageError("empty s-list")
    return values


@dataclass
class RunConfig:
    subcommand: str
    input: str | None = None
    s_values: tuple[float, ...] = DEFAULT_S
    phis: tuple[CountingFunction, ...] = field(default_factory=lambda: (CountingFunction.parse(DEFAULT_PHI),))
    solver: str = "dense"
    lowest: int | None = None
    output: str | None = None
    strict_manifold: bool = False
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if any(s < 0 for s in self.s_values):
            raise UsageError("s values must be non-negative")
        if any(b <= a for a, b in zip(self.s_values, self.s_values[1:])):
            raise UsageError("s values must be strictly increasing")


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([f"{x:.12g}" if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def _phis(values: Sequence[str] | None) -> tuple[CountingFunction, ...]:
    try:
        return tuple(CountingFunction.parse(v) for v in (values or [DEFAULT_PHI]))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def config_from_args(args) -> RunConfig:
    s_text = getattr(args, "s", None)
    return RunConfig(
        subcommand=args.command,
        input=getattr(args, "input", None),
        s_values=parse_s_list(s_text) if s_text else DEFAULT_S,
        phis=_phis(getattr(args, "phi", None)),
        solver="lowest" if getattr(args, "lowest", None) else "dense",
        lowest=getattr(args, "lowest", None),
        output=args.output,
        strict_manifold=getattr(args, "strict_manifold", False),
        seed=args.seed,
        workers=max(1, getattr(args, "workers", 1) or 1),
    )


def cmd_verify(cfg: RunConfig, spectral: bool) -> int:
    inst = load_instance(cfg.input, strict=cfg.strict_manifold)
    s_values = cfg.s_values if spectral else ()
    if cfg.workers > 1 and spectral:
        with ProcessPoolExecutor(cfg.workers) as pool:
            report = verify_instance(inst, s_values, cfg.phis, spectral_map=pool.map)
    else:
        report = verify_instance(inst, s_values, cfg.phis)
    _emit(report.to_json(), cfg.output)
    failures = report.normative_failures()
    for name in failures:
        log.error("normative check failed: %s", name)
    return EXIT_FAIL if failures else EXIT_OK


def _spectrum_job(job):
    rel, s, degrees, solver, p = job
    laps = deformed_laplacians(rel, s)
    rows = []
    for k in degrees:
        mat = laps[k].matrix
        if solver == "dense" and mat.shape[0] > DENSE_CAP:
            raise UsageError(f"degree {k} has size {mat.shape[0]} > {DENSE_CAP}; use --lowest p")
        rows.extend(spectrum_rows(eigensolve(mat, solver, p=p, degree=k, s=s)))
    return rows


def cmd_spectrum(cfg: RunConfig, degree: int | None) -> int:
    inst = load_instance(cfg.input, strict=cfg.strict_manifold)
    rel = relative_cochain_complex(inst.complex, inst.decomposition)
    n = rel.dimension
    if degree is not None and not 0 <= degree <= n:
        raise UsageError(f"degree {degree} outside 0..{n}")
    degrees = range(n + 1) if degree is None else [degree]
    jobs = [(rel, s, list(degrees), cfg.solver, cfg.lowest) for s in cfg.s_values]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            chunks = list(pool.map(_spectrum_job, jobs))
    else:
        chunks = [_spectrum_job(j) for j in jobs]
    rows = [r for chunk in chunks for r in chunk]
    _emit(_csv(["degree", "s", "index", "eigenvalue"], rows), cfg.output)
    return EXIT_OK


def _parse_schedule(text: str):
    if text == "default":
        return DEFAULT_SCHEDULE
    try:
        pairs = [tuple(float(v) for v in item.split(":")) for item in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad schedule {text!r}") from exc
    if any(len(p) != 2 for p in pairs):
        raise UsageError("schedule items look like s:m")
    return tuple(pairs)


def cmd_model(args, cfg: RunConfig) -> int:
    cutoff = CutoffProfile(args.rho)
    if args.model == "oscillator":
        s = cfg.s_values[0] if args.s else 10.0
        if args.L is not None or args.N is not None:
            length = args.L if args.L is not None else 8.0 / s**0.5
            grid = args.N if args.N is not None else 4000
            spec = OscillatorSpec(s, length, grid, args.bc)
        else:
            spec = OscillatorSpec.auto(s, args.bc)
        vals = oscillator_eigen(spec, args.count)
        exact = exact_half_line(s, args.bc, args.count)
        rows = [(i, float(v), float(e)) for i, (v, e) in enumerate(zip(vals, exact))]
        _emit(_csv(["index", "eigenvalue", "exact"], rows), cfg.output)
        return EXIT_OK
    if args.model == "flat":
        s = cfg.s_values[0] if args.s else 200.0
        spec = FlatModelSpec.from_index(args.n, args.r, args.k, s)
        path = args.path or ("numeric" if args.n <= 2 else "analytic")
        rows = []
        for phi in cfg.phis:
            trace = flat_model_trace(spec, phi, cutoff, path)
            expected = 1 if args.k == args.r else 0
            rows.append((args.n, args.r, args.k, s, str(phi), path, trace, expected, abs(trace - expected)))
        _emit(_csv(["n", "r", "k", "s", "phi", "path", "trace", "limit", "abs_error"], rows), cfg.output)
        return EXIT_OK
    rows = cylinder_schedule(args.cls, args.base, args.k, _parse_schedule(args.schedule), cutoff)
    out = [(r.cls, r.k, r.s, r.m, r.trace, r.limit, r.abs_error) for r in rows]
    _emit(_csv(["class", "k", "s", "m", "trace", "limit", "abs_error"], out), cfg.output)
    ok = schedule_verdict(rows)
    last = rows[-1]
    print(f"limit verdict: {'pass' if ok else 'fail'} (trace {last.trace:.6g}, limit {last.limit}, "
          f"abs_error {last.abs_error:.3g})", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_examples(args, cfg: RunConfig) -> int:
    if args.name is None:
        _emit("\n".join(EXAMPLE_NAMES) + "\n", cfg.output)
        return EXIT_OK
    labels = [x.strip() for x in args.labels.split(",")] if args.labels else None
    inst = make_instance(args.name, labels, args.resolution)
    _emit(dump_instance(inst), cfg.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=0, help="seed for the prime-field rank checks")
    common.add_argument("-v", "--verbose", action="store_true")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--s", help="comma-separated deformation scales")
    grid.add_argument("--phi", action="append", help="counting function heat:<t> or gaussian:<m> (repeatable)")
    grid.add_argument("--strict-manifold", action="store_true", help="check vertex links")
    grid.add_argument("--workers", type=int, default=1, help="worker processes for the s grid")

    parser = argparse.ArgumentParser(prog="bdmorse", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common, grid], help="check the inequalities on an instance file")
    p.add_argument("input")
    p.add_argument("--spectral", action="store_true", help="add the Witten-Laplacian track")

    for name, helptext in (("spectrum", "eigenvalues at given s"), ("sweep", "eigenvalues over an s-list")):
        p = sub.add_parser(name, parents=[common, grid], help=helptext)
        p.add_argument("input")
        p.add_argument("--degree", type=int)
        p.add_argument("--lowest", type=int, metavar="P", help="P smallest eigenvalues by Lanczos")

    p = sub.add_parser("model", parents=[common], help="model-operator experiments")
    p.add_argument("model", choices=["oscillator", "flat", "cylinder"])
    p.add_argument("--s")
    p.add_argument("--phi", action="append")
    p.add_argument("--bc", choices=["neumann", "dirichlet"], default="neumann")
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--L", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--path", choices=["numeric", "analytic"])
    p.add_argument("--class", dest="cls", choices=["r+", "a+", "r-", "a-"], default="a+")
    p.add_argument("--base", choices=["circle", "point"], default="circle")
    p.add_argument("--schedule", default="default", help="'default' or s:m,s:m,...")
    p.add_argument("--rho", type=float, default=0.5)

    p = sub.add_parser("examples", parents=[common], help="write a bundled instance file")
    p.add_argument("name", nargs="?", choices=EXAMPLE_NAMES)
    p.add_argument("--resolution", type=int)
    p.add_argument("--labels", help="comma-separated component classes, e.g. a+,r-")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(args)
        cohomology.seed_prime_choice(cfg.seed)
        if args.command == "verify":
            return cmd_verify(cfg, args.spectral)
        if args.command == "spectrum":
            if not args.s:
                cfg.s_values = (0.0,)
            return cmd_spectrum(cfg, args.degree)
        if args.command == "sweep":
            return cmd_spectrum(cfg, args.degree)
        if args.command == "model":
            return cmd_model(args, cfg)
        return cmd_examples(args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonManifold as exc:
        print(f"non-manifold input: {exc}", file=sys.stderr)
        return EXIT_NONMANIFOLD
    except DegenerateVertex as exc:
        print(f"degenerate vertex: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except MODEL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (BdMorseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
