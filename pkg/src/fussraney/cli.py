"""Command-line entry point: ``fussraney <subcommand> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
convergence failure. CSV goes to ``--out`` (default stdout) with its run
manifest in ``<out>.manifest.json``, or on stderr when writing to stdout.
JSON output embeds the manifest.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from . import __version__
from .density import DensitySpec
from .fc_density import build_fc_spec
from .figures import FIGURES, MIN_POINTS, figure_curves
from .ginibre import MCConfig, empirical_vs_theory, product_squared_singular_values
from .mellin import compare_oracle, oracle_density
from .moments import QuadratureConvergenceError, verify_moments
from .combinatorics import SequenceSpec, sequence
from .raney_density import build_raney_spec
from .special_functions import NonConvergenceError
from .verification import full_suite, selftest_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONVERGENCE = 0, 1, 2, 3


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict
    tool_version: str = __version__
    seed: Optional[int] = None
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


class Output:
    """Writes one artifact (CSV or JSON) plus its manifest."""

    def __init__(self, args: argparse.Namespace, manifest: RunManifest):
        self.path = args.out
        self.format = args.format
        self.manifest = manifest

    def _write(self, text: str) -> None:
        if self.path in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(self.path, "w", newline="") as fh:
                fh.write(text)

    def csv(self, header: list[str], rows) -> None:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        self._write(buf.getvalue())
        manifest = json.dumps(asdict(self.manifest), indent=2, default=_json_default)
        if self.path in (None, "-"):
            sys.stderr.write(manifest + "\n")
        else:
            with open(self.path + ".manifest.json", "w") as fh:
                fh.write(manifest + "\n")

    def json(self, payload: dict) -> None:
        doc = {"manifest": asdict(self.manifest), **payload}
        self._write(json.dumps(doc, indent=2, default=_json_default) + "\n")

    def emit(self, header: list[str], rows, payload: dict) -> None:
        if self.format == "json":
            self.json(payload)
        else:
            self.csv(header, rows)


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return str(obj)


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default=None)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=None, help="unsigned 64-bit seed")
    common.add_argument("--threads", type=int, default=1, help="worker threads, 0 = one per CPU")
    return common


def _family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["fc", "raney"], default="fc")
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--r", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="fussraney", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seq", parents=[common], help="exact FC or Raney numbers")
    _family_args(p)
    p.add_argument("--n-max", type=int, default=10)

    p = sub.add_parser("density", parents=[common], help="tabulate a density")
    _family_args(p)
    p.add_argument("--x-min", type=float, default=None)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--points", type=int, default=200)

    p = sub.add_parser("moments", parents=[common], help="quadrature moments against exact numbers")
    _family_args(p)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("oracle", parents=[common], help="Mellin-convolution reconstruction")
    _family_args(p)
    p.add_argument("--grid", type=int, default=1024)
    p.add_argument("--compare", action="store_true")

    p = sub.add_parser("mc", parents=[common], help="Ginibre product Monte Carlo")
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--n", type=int, default=256, dest="N")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--ensemble", choices=["complex", "real"], default="complex")
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--dump-samples", default=None)

    p = sub.add_parser("figure", parents=[common], help="curve data of a figure")
    p.add_argument("--id", dest="figure_id", required=True)
    p.add_argument("--points", type=int, default=MIN_POINTS)

    sub.add_parser("selftest", parents=[common], help="gamma, 1F0 and integer identity checks")

    p = sub.add_parser("verify-all", parents=[common], help="full verification suite")
    p.add_argument("--corrupt-lambda", type=float, default=None, help=argparse.SUPPRESS)
    return parser


def _family_problems(args) -> list[str]:
    problems = []
    if args.family == "fc":
        if args.s is None or args.s < 1:
            problems.append(f"--s must be a positive integer for --family fc (got {args.s})")
    else:
        if args.p is None or args.p < 2:
            problems.append(f"--p must be an integer >= 2 for --family raney (got {args.p})")
        if args.r is None or args.r < 1:
            problems.append(f"--r must be a positive integer for --family raney (got {args.r})")
    return problems


def _spec(args) -> DensitySpec:
    return build_fc_spec(args.s) if args.family == "fc" else build_raney_spec(args.p, args.r)


def _support(args) -> Optional[float]:
    if args.family == "fc":
        return (args.s + 1) ** (args.s + 1) / args.s**args.s
    return args.p**args.p / (args.p - 1) ** (args.p - 1)


def validate(args) -> list[str]:
    """Every problem with the arguments, found before any computation."""
    problems = []
    if args.seed is not None and not 0 <= args.seed < 2**64:
        problems.append(f"--seed must be an unsigned 64-bit integer (got {args.seed})")
    if args.threads < 0:
        problems.append(f"--threads must be >= 0 (got {args.threads})")
    cmd = args.command
    if cmd in ("seq", "density", "moments", "oracle"):
        problems += _family_problems(args)
    if cmd in ("seq", "moments") and args.n_max < 0:
        problems.append(f"--n-max must be >= 0 (got {args.n_max})")
    family_ok = cmd in ("seq", "density", "moments", "oracle") and not _family_problems(args)
    if cmd in ("density", "moments", "oracle") and family_ok and args.family == "raney" and args.r > args.p + 1:
        problems.append(f"--r must be <= p + 1 = {args.p + 1} (got {args.r})")
    if cmd in ("moments", "oracle") and family_ok and args.family == "raney" and args.r > args.p:
        problems.append(f"W_{args.p},{args.r} is not a probability density; need r <= p")
    if cmd == "density":
        if args.points < 2:
            problems.append(f"--points must be >= 2 (got {args.points})")
        if family_ok:
            K = _support(args)
            lo = args.x_min if args.x_min is not None else K / args.points
            hi = args.x_max if args.x_max is not None else K
            if not 0 < lo < hi <= K:
                problems.append(f"need 0 < x-min < x-max <= {K:.12g} (got {lo}, {hi})")
    if cmd == "moments" and not args.tol > 0:
        problems.append(f"--tol must be positive (got {args.tol})")
    if cmd == "oracle" and args.grid < 256:
        problems.append(f"--grid must be >= 256 (got {args.grid})")
    if cmd == "mc":
        problems += MCConfig.problems(args.s, args.N, args.samples, args.ensemble, 0, args.bins, 0)
    if cmd == "figure":
        if args.figure_id not in FIGURES:
            problems.append(f"--id must be one of {', '.join(FIGURES)} (got {args.figure_id})")
        if args.points < MIN_POINTS:
            problems.append(f"--points must be >= {MIN_POINTS} (got {args.points})")
    return problems


def _params(args) -> dict:
    skip = {"command", "format", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def cmd_seq(args, out: Output) -> int:
    spec = SequenceSpec.fc(args.s) if args.family == "fc" else SequenceSpec.raney(args.p, args.r)
    values = sequence(spec, args.n_max)
    out.emit(["n", "value"], enumerate(values),
             {"family": spec.label, "rows": [{"n": n, "value": v} for n, v in enumerate(values)]})
    return EXIT_OK


def cmd_density(args, out: Output) -> int:
    spec = _spec(args)
    K = spec.support_upper
    lo = args.x_min if args.x_min is not None else K / args.points
    hi = args.x_max if args.x_max is not None else K
    x = np.linspace(lo, hi, args.points)
    y = np.asarray(spec(x))
    # the series is summed up to and including the edge, so nothing is extrapolated
    flags = ["ok"] * len(x)
    header = ["x", "density", "flag"]
    rows = list(zip(x, y, flags))
    if args.family == "raney":
        header.append("is_probability")
        rows = [row + (spec.is_probability,) for row in rows]
    out.emit(header, rows, {"density": spec.label, "is_probability": spec.is_probability,
                            "rows": [dict(zip(header, row)) for row in rows]})
    return EXIT_OK


def cmd_moments(args, out: Output) -> int:
    report = verify_moments(_spec(args), args.n_max, args.tol)
    rows = [(r.n, r.numeric_moment, r.exact_moment, r.rel_error) for r in report.rows]
    out.emit(["n", "numeric_moment", "exact_moment", "rel_error"], rows, report.to_dict())
    if report.failure:
        return EXIT_CONVERGENCE
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_oracle(args, out: Output) -> int:
    spec = _spec(args)
    if args.compare:
        cmp = compare_oracle(spec, args.grid, window=(0.0, 1.0))
        rows = list(zip(cmp.grid, cmp.oracle, cmp.hypergeom, cmp.abs_diff))
        central = compare_oracle(spec, args.grid)
        payload = {"density": spec.label, "rel_l1_central": central.rel_l1, "min_oracle": cmp.min_oracle,
                   "rows": [dict(zip(["x", "oracle", "hypergeom", "abs_diff"], r)) for r in rows]}
        out.emit(["x", "oracle", "hypergeom", "abs_diff"], rows, payload)
    else:
        g = oracle_density(spec, args.grid)
        rows = list(zip(g.grid, g.values))
        out.emit(["x", "oracle"], rows, {"density": spec.label,
                                         "rows": [{"x": x, "oracle": v} for x, v in rows]})
    return EXIT_OK


def cmd_mc(args, out: Output) -> int:
    config = MCConfig(s=args.s, N=args.N, samples=args.samples, ensemble=args.ensemble,
                      seed=args.seed if args.seed is not None else MCConfig.seed,
                      bins=args.bins, threads=args.threads)
    batch = product_squared_singular_values(config)
    report = empirical_vs_theory(batch.values, config.s, config.bins)
    if args.dump_samples:
        np.savetxt(args.dump_samples, batch.flat, fmt="%.17g", header="x", comments="")
    edges = report.histogram_edges
    rows = [(edges[i], edges[i + 1], report.histogram_masses[i], report.theory_masses[i])
            for i in range(len(report.histogram_masses))]
    payload = {"config": asdict(config), "skipped": batch.skipped,
               **{k: v for k, v in report.to_dict().items() if k != "config"}}
    out.emit(["bin_lo", "bin_hi", "empirical_mass", "theory_mass"], rows, payload)
    return EXIT_OK


def cmd_figure(args, out: Output) -> int:
    curves = figure_curves(args.figure_id, args.points)
    rows = [(c.name, x, y, c.is_probability) for c in curves for x, y in zip(c.x, c.density)]
    payload = {"figure": args.figure_id,
               "curves": [{"name": c.name, "is_probability": c.is_probability,
                           "x": c.x, "density": c.density} for c in curves]}
    out.emit(["curve", "x", "density", "is_probability"], rows, payload)
    return EXIT_OK


def _checks_out(checks, out: Output) -> int:
    passed = all(c.passed for c in checks)
    rows = [(c.name, c.passed, c.error, c.detail) for c in checks]
    out.emit(["check", "passed", "error", "detail"], rows,
             {"passed": passed, "checks": [c.to_dict() for c in checks]})
    return EXIT_OK if passed else EXIT_FAIL


def cmd_selftest(args, out: Output) -> int:
    return _checks_out(selftest_checks(args.seed or 0), out)


def cmd_verify_all(args, out: Output) -> int:
    return _checks_out(full_suite(args.seed or 0, threads=args.threads, corrupt_lambda=args.corrupt_lambda), out)


COMMANDS = {
    "seq": cmd_seq,
    "density": cmd_density,
    "moments": cmd_moments,
    "oracle": cmd_oracle,
    "mc": cmd_mc,
    "figure": cmd_figure,
    "selftest": cmd_selftest,
    "verify-all": cmd_verify_all,
}
JSON_DEFAULT = {"mc", "moments", "selftest", "verify-all"}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format is None:
        args.format = "json" if args.command in JSON_DEFAULT else "csv"
    problems = validate(args)
    if problems:
        for problem in problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_USAGE
    manifest = RunManifest(args.command, _params(args), seed=args.seed)
    try:
        return COMMANDS[args.command](args, Output(args, manifest))
    except (NonConvergenceError, QuadratureConvergenceError) as exc:
        print(f"error: numerical convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
