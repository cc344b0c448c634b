"""Command-line front end: ``hermite-sobolev <command> [flags]``.

Commands
--------
transform      Hermite coefficients of a sample function, plus a reconstruction CSV.
kernel-scan    ``K_a``, ``Phi_a`` and their ratio on a grid of point pairs.
norms          Hermite-Sobolev and potential norms of a random expansion.
verify         Run one experiment (``--experiment``) or the whole suite (``--all``).
report-index   Aggregate a directory of reports into ``index.json``.

Exit status is 0 when every check passes, 1 when a check fails and 2 on
usage errors. ``HOK_SEED`` overrides ``--seed``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import hermite_basis as hb
from . import kernels as kn
from . import verify as vf
from .function_spaces import GridFunction, hermite_sobolev_norm, lp_norm, potential_norm

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad or missing command-line parameter."""


# experiment id -> (function, required flags, optional flag -> keyword, tolerance keyword)
EXPERIMENTS = {
    "exact-algebra": (vf.exact_algebra, [], {"N": "max_order", "seed": "seed"}, "tol"),
    "ladder-identity": (vf.ladder_identity, [], {}, "tol"),
    "spectral-kernel-consistency": (vf.spectral_kernel_consistency, [], {"a": "a", "seed": "seed"}, "kernel_tol"),
    "hermite-norm-asymptotics": (vf.hermite_norm_asymptotics, [], {}, "tol"),
    "szego-bound": (vf.szego_bound, [], {}, "growth_tol"),
    "kernel-domination": (vf.check_kernel_domination, ["a", "d"], {"N": "n", "L": "L"}, "tol"),
    "weighted-integrals": (vf.check_weighted_integrals, ["a", "d"], {}, "band"),
    "norm-equivalence": (vf.check_norm_equivalence, ["k", "p"], {"N": "N", "seed": "seed"}, "drift_tol"),
    "boundedness-map": (vf.boundedness_map, [], {"a": "a", "d": "d", "seed": "seed"}, None),
    "poincare": (vf.poincare_ratio, ["p", "q"], {"d": "d", "N": "N", "seed": "seed", "L": "L", "h": "h"}, None),
    "maximal-function": (vf.maximal_function_bound, ["a"], {"N": "N", "seed": "seed"}, "conv_tol"),
    "kernel-comparison": (vf.kernel_comparison_smalltime, [], {"x": "x"}, "rate"),
    "counterexample-decay": (vf.counterexample_decay, ["p", "a"], {}, "slack"),
    "hilbert-unboundedness": (vf.hilbert_unboundedness, ["p", "a"], {"L": "L", "h": "h"}, "fit_tol"),
    "coefficient-decay": (vf.coefficient_decay, [], {}, "growth_tol"),
    "partial-sum-convergence": (vf.partial_sum_convergence, [], {}, "target"),
    "decay-property": (vf.decay_property, [], {"a": "a", "p": "p", "N": "N", "seed": "seed"}, None),
}

SAMPLE_FUNCTIONS = {
    "gaussian": lambda x: np.exp(-0.5 * x * x),
    "bump": vf.bump,
    "sech": lambda x: 1.0 / np.cosh(x),
}


# ---------------------------------------------------------------------------
# output helpers


def write_atomic(path: Path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and ``os.replace``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None, filename: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_atomic(Path(out) / filename, text)


def _write_report(report: vf.ExperimentReport, out: Path) -> None:
    write_atomic(out / f"{report.name}.report.json", report.to_json() + "\n")
    write_atomic(out / f"{report.name}.details.csv", report.details_csv())


# ---------------------------------------------------------------------------
# report index


def build_index(directory: Path) -> tuple[dict, int]:
    """Aggregate ``*.report.json`` files; returns ``(index, skipped)``."""
    rows, constants, skipped = [], [], 0
    for path in sorted(directory.glob("*.report.json")):
        try:
            data = json.loads(path.read_text())
            report = vf.ExperimentReport.from_dict(data)
        except (OSError, ValueError, KeyError, TypeError):
            skipped += 1
            continue
        rows.append({"name": report.name, "passed": report.passed, "empirical_constant": report.empirical_constant,
                     "file": path.name})
        key = {k: report.params.get(k) for k in ("a", "d", "p", "q")}
        constants.append({"experiment": report.name, **key, "empirical_constant": report.empirical_constant})
    index = {
        "passed": all(r["passed"] for r in rows),
        "count": len(rows),
        "failed": [r["name"] for r in rows if not r["passed"]],
        "reports": rows,
        "constants": constants,
        "skipped": skipped,
    }
    return index, skipped


# ---------------------------------------------------------------------------
# commands


def _seed(args) -> int:
    env = os.environ.get("HOK_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"HOK_SEED must be an integer, got {env!r}") from None
    return args.seed


def _parse_range(text: str) -> np.ndarray:
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--x-range must be lo:hi:step, got {text!r}") from None
    if step <= 0 or hi <= lo:
        raise UsageError("--x-range needs lo < hi and step > 0")
    n = int(round((hi - lo) / step))
    return np.linspace(lo, lo + n * step, n + 1)


def cmd_transform(args) -> int:
    f = SAMPLE_FUNCTIONS[args.function]
    n = 32 if args.N is None else args.N
    if n < 0:
        raise UsageError("--N must be nonnegative")
    c = hb.analyze(f, n)
    g = GridFunction.from_callable(f, 1, args.L, args.h)
    s = GridFunction.from_coefficients(c, g.L, g.h)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "f", "partial_sum"])
    for x, a, b in zip(g.axis, g.samples, s.samples):
        w.writerow(["%.17g" % x, "%.17g" % a, "%.17g" % b])
    _emit(c.to_json() + "\n", args.out, f"transform-{args.function}-N{n}.coefficients.json")
    _emit(buf.getvalue(), args.out, f"transform-{args.function}-N{n}.samples.csv")
    err = float(np.max(np.abs(g.samples - s.samples)))
    print(f"transform {args.function} N={n} max_abs_reconstruction_error={err:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_kernel_scan(args) -> int:
    if args.a is None:
        raise UsageError("kernel-scan needs --a")
    d = args.d or 1
    if d not in (1, 2):
        raise UsageError("--d must be 1 or 2 for kernel-scan")
    axis = _parse_range(args.x_range)
    s, t = np.meshgrid(axis, axis, indexing="ij")
    off = ~np.eye(axis.size, dtype=bool)
    s, t = s[off], t[off]
    k, _, _ = kn.potential_kernel_invariants(args.a, d, (s - t) ** 2, (s + t) ** 2)
    phi = kn.phi_a_radial(kn.PhiProfile(args.a, d), np.abs(s - t))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "K_a", "Phi_a", "ratio"])
    for row in zip(s, t, k, phi, k / phi):
        w.writerow(["%.17g" % v for v in row])
    _emit(buf.getvalue(), args.out, f"kernel-scan-a{args.a:g}-d{d}.csv")
    print(f"kernel-scan a={args.a:g} d={d} pairs={s.size} max_ratio={float(np.max(k / phi)):.6g}", file=sys.stderr)
    return EXIT_OK


def cmd_norms(args) -> int:
    d = args.d or 1
    n = 12 if args.N is None else args.N
    k = 1 if args.k is None else args.k
    p = 2.0 if args.p is None else args.p
    a = float(k) if args.a is None else args.a
    rng = np.random.default_rng(_seed(args))
    c = hb.SpectralCoefficients.random(d, n, rng)
    sob = hermite_sobolev_norm(c, k, p, args.L, args.h)
    result = {
        "d": d, "N": n, "k": k, "p": p, "a": a, "seed": _seed(args),
        "lp_norm": lp_norm(GridFunction.from_coefficients(c, args.L, args.h), p),
        "hermite_sobolev_norm": sob.total,
        "potential_norm": potential_norm(c, a, p, args.L, args.h),
        "terms": {",".join(str(j) for j in w) or "identity": v for w, v in sob.terms.items()},
    }
    _emit(vf.dumps(result) + "\n", args.out, f"norms-d{d}-N{n}-k{k}-p{p:g}.json")
    return EXIT_OK


def _experiment_kwargs(name: str, args) -> dict:
    fn, required, optional, tol_key = EXPERIMENTS[name]
    kwargs = {}
    for flag in required:
        value = getattr(args, flag)
        if value is None:
            raise UsageError(f"experiment {name} needs --{flag}")
        kwargs[flag] = value
    for flag, key in optional.items():
        value = _seed(args) if flag == "seed" else getattr(args, flag)
        if value is not None:
            kwargs[key] = value
    if args.tol is not None:
        if tol_key is None:
            raise UsageError(f"experiment {name} has no tolerance override")
        kwargs[tol_key] = args.tol
    return kwargs


def _run_named(seed: int, name: str) -> vf.ExperimentReport:
    return vf.suite(seed)[name]()


def cmd_verify(args) -> int:
    out = Path(args.out or "reports")
    if args.all == bool(args.experiment):
        raise UsageError("verify needs exactly one of --experiment or --all")
    if args.experiment:
        if args.experiment not in EXPERIMENTS:
            raise UsageError(f"unknown --experiment {args.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        fn = EXPERIMENTS[args.experiment][0]
        try:
            report = fn(**_experiment_kwargs(args.experiment, args))
        except (ValueError, TypeError) as exc:
            raise UsageError(str(exc)) from None
        reports = [report]
    else:
        seed = _seed(args)
        names = list(vf.suite(seed))
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                reports = list(pool.map(_run_named, [seed] * len(names), names))
        else:
            reports = [_run_named(seed, n) for n in names]
    for r in reports:
        _write_report(r, out)
        print(r.summary())
    if args.all:
        index, _ = build_index(out)
        write_atomic(out / "index.json", vf.dumps(index) + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_report_index(args) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        raise UsageError(f"not a directory: {directory}")
    index, skipped = build_index(directory)
    target = Path(args.out) if args.out else directory
    write_atomic(target / "index.json", vf.dumps(index) + "\n")
    for row in index["reports"]:
        print(f"{'PASS' if row['passed'] else 'FAIL'} {row['name']}")
    if skipped:
        print(f"warning: skipped {skipped} unreadable report(s)", file=sys.stderr)
    return EXIT_OK if index["passed"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=float, help="potential order a")
    p.add_argument("--d", type=int, help="dimension d")
    p.add_argument("--p", type=float, help="Lebesgue exponent p")
    p.add_argument("--q", type=float, help="target exponent q")
    p.add_argument("--k", type=int, help="Sobolev order k")
    p.add_argument("--N", type=int, help="expansion order N (grid size for scans)")
    p.add_argument("--L", type=float, help="grid half-width")
    p.add_argument("--h", type=float, help="grid spacing")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (HOK_SEED overrides)")
    p.add_argument("--tol", type=float, help="override the main tolerance")
    p.add_argument("--out", help="output directory (stdout if omitted, where applicable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hermite-sobolev", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="Hermite coefficients of a sample function")
    _common(p)
    p.add_argument("--function", choices=sorted(SAMPLE_FUNCTIONS), default="gaussian")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("kernel-scan", help="K_a and Phi_a on a grid of pairs")
    _common(p)
    p.add_argument("--x-range", default="-6:6:0.06", help="lo:hi:step")
    p.set_defaults(func=cmd_kernel_scan)

    p = sub.add_parser("norms", help="norms of a random expansion")
    _common(p)
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("verify", help="run experiments")
    _common(p)
    p.add_argument("--experiment", help=f"one of: {', '.join(EXPERIMENTS)}")
    p.add_argument("--all", action="store_true", help="run the full suite")
    p.add_argument("--x", type=float, help="base point for kernel-comparison")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for --all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report-index", help="aggregate reports into index.json")
    p.add_argument("directory")
    p.add_argument("--out", help="where to write index.json (default: the directory)")
    p.set_defaults(func=cmd_report_index)
    return parser


def _join_ranges(argv: list[str]) -> list[str]:
    # "--x-range -6:6:0.06" would otherwise be read as an option
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--x-range" and i + 1 < len(argv):
            out.append(f"--x-range={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_ranges(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hermite-sobolev {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except hb.ResolutionError as exc:
        print(f"hermite-sobolev {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
