"""Command-line front end.

    shiftlab verify example13|corollary20|family2_demo|family4_demo
    shiftlab classify SPEC.json   (``-`` reads stdin)
    shiftlab scan --a 1/2 --grid 400 --out atlas.csv
    shiftlab stampfli 1 "sqrt(2)" "sqrt(3)"

Every flag also reads a ``SHIFTLAB_<FLAG>`` environment variable; an explicit
flag wins.  Exit status: 0 success, 1 verification mismatch, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import families as fa
from . import instances
from . import measures as ms
from . import scalars as sc
from .errors import ShiftLabError
from .shifts1d import RecursiveTail, WeightSeq1D
from .shifts2d import Shift2D, classify, explicit_shift, product_shift
from .verdicts import scalar_json

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2
ENV_PREFIX = "SHIFTLAB_"


class InputError(Exception):
    pass


def _env(name: str, default):
    return os.environ.get(ENV_PREFIX + name.upper(), default)


def _positive_int(text) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--horizon", type=int, default=int(_env("horizon", 25)))
    common.add_argument("--mode", choices=("exact", "numeric"), default=_env("mode", "exact"))
    common.add_argument("--eps", default=_env("eps", "1e-12"))
    common.add_argument("--out", default=_env("out", None))
    common.add_argument("--format", choices=("json", "csv"), default=_env("format", None))
    common.add_argument("--jobs", type=_positive_int, default=int(_env("jobs", 1)))

    parser = argparse.ArgumentParser(prog="shiftlab", description="Weighted-shift subnormality toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="rebuild a reference instance and compare its numbers")
    p.add_argument("instance", choices=sorted(instances.REGISTRY))

    p = sub.add_parser("classify", parents=[common], help="classify a shift described in JSON")
    p.add_argument("spec", help="path to a shift JSON file, or - for stdin")

    p = sub.add_parser("scan", parents=[common], help="label the (x, y) plane of the second family")
    p.add_argument("--a", required=True)
    p.add_argument("--grid", type=_positive_int, default=400, help="grid points per axis")
    p.add_argument("--ygrid", type=_positive_int, default=None, help="grid points along y (default: --grid)")
    p.add_argument("--ymax", default="1", help="upper end of the y range")
    p.add_argument("--seed", type=int, default=int(_env("seed", 0)))
    p.add_argument("--sample", default="1/100", help="fraction of points re-checked at shift level")

    p = sub.add_parser("stampfli", parents=[common], help="two-atom completion through three weights")
    p.add_argument("weights", nargs=3, help="three increasing (unsquared) weights")
    p.add_argument("--terms", type=_positive_int, default=10)
    return parser


def _config(args) -> None:
    if args.horizon < 2:
        raise InputError("--horizon must be at least 2")
    try:
        eps = sc.parse_scalar(args.eps, "numeric")
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad --eps: {exc}") from exc
    if eps <= 0:
        raise InputError("--eps must be positive")
    sc.set_tolerance(eps)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# shift specs
# ---------------------------------------------------------------------------

def _scalar(params: dict, key: str, mode: str, default=None):
    if key not in params:
        if default is not None:
            return default
        raise InputError(f"missing parameter {key!r}")
    try:
        return sc.parse_scalar(params[key], mode)
    except (ValueError, TypeError) as exc:
        raise InputError(f"parameter {key!r}: {exc}") from exc


def shift_from_spec(spec: dict, mode: str = "exact", horizon: int = 25) -> Shift2D:
    """Build a shift from ``{"kind": ..., "params": {...}}``."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InputError("shift spec must be an object with a 'kind'")
    kind, params = spec["kind"], spec.get("params", {})
    if kind == "product":
        return product_shift(WeightSeq1D.from_json(params["t1"], mode), WeightSeq1D.from_json(params["t2"], mode))
    if kind == "explicit":
        grid = lambda key: [[sc.parse_scalar(v, mode) for v in row] for row in params[key]]
        return explicit_shift(grid("alpha"), grid("beta"))
    if kind == "family1":
        p = fa.Family1Params(
            _scalar(params, "xi0_sq", mode),
            _scalar(params, "xi1_sq", mode),
            _scalar(params, "xi2_sq", mode),
            _scalar(params, "eta0_sq", mode),
            ms.Measure1D.from_json(params["omega_m"], mode),
        )
        b_sq = _scalar(params, "b_sq", mode) if "b_sq" in params else None
        return fa.family1_build(p, _scalar(params, "a_sq", mode), b_sq)
    if kind == "family2":
        return fa.family2_build(*(_scalar(params, k, mode) for k in ("a", "x", "y")))
    if kind == "family3":
        nu = ms.Measure1D.from_json(params["nu"], mode)
        b_sq = _scalar(params, "b_sq", mode) if "b_sq" in params else None
        return fa.family3_build(nu, _scalar(params, "a_sq", mode), b_sq)
    if kind == "family4":
        nu = ms.Measure1D.from_json(params["nu"], mode)
        return fa.family4_build(nu, _scalar(params, "y_sq", mode), max(horizon, 2))
    raise InputError(f"unknown shift kind {kind!r}")


def _read_spec(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    report = instances.verify(args.instance, args.mode, args.horizon)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "expected", "actual", "tolerance", "ok"])
        for c in report.checks:
            row = c.to_json()
            show = lambda v: v["decimal"] if isinstance(v, dict) else v
            w.writerow([row["name"], show(row["expected"]), show(row["actual"]), row["tolerance"], row["ok"]])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(dumps(report.to_json()), args.out)
    for name in report.failed:
        print(f"mismatch: {name}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_classify(args) -> int:
    if args.format == "csv":
        raise InputError("classify reports are JSON only")
    spec = _read_spec(args.spec)
    s = shift_from_spec(spec, args.mode, args.horizon)
    report = classify(s, args.horizon).to_json()
    report["mode"] = args.mode
    _emit(dumps(report), args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.format == "json":
        raise InputError("scan output is CSV")
    a = sc.parse_scalar(args.a, args.mode)
    if not (sc.sign(a) > 0 and sc.lt(a, 1)):
        raise InputError("--a must lie in (0, 1)")
    ymax = sc.parse_scalar(args.ymax, "exact")
    sample = Fraction(args.sample)
    result = fa.family2_region_scan(a, args.grid, args.ygrid, ymax, sample_fraction=sample, seed=args.seed,
                                    jobs=args.jobs)
    _emit(result.to_csv(), args.out)
    counts = result.counts()
    summary = {
        "a": scalar_json(a),
        "grid": [len(result.xs), len(result.ys)],
        "counts": counts,
        "band_fraction": fa.fixed(result.band_fraction()),
        "verified_points": len(result.checked),
        "disagreements": len(result.disagreements),
        "ordering_failures": len(result.ordering_failures),
    }
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return EXIT_MISMATCH if result.disagreements or result.ordering_failures else EXIT_OK


def cmd_stampfli(args) -> int:
    try:
        ws = [sc.parse_scalar(w, args.mode) for w in args.weights]
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad weight: {exc}") from exc
    squares = [w * w for w in ws]
    comp = ms.stampfli_completion(*squares)
    seq = WeightSeq1D(tuple(squares), RecursiveTail(comp.phi0, comp.phi1), validate=False)
    out = {
        "inputs": scalar_json(ws),
        "phi0": scalar_json(comp.phi0),
        "phi1": scalar_json(comp.phi1),
        "atoms": scalar_json(list(comp.atoms)),
        "densities": scalar_json(list(comp.densities)),
        "weights": scalar_json([sc.sqrt(seq.sq(n)) for n in range(args.terms)]),
    }
    _emit(dumps(out), args.out)
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "classify": cmd_classify, "scan": cmd_scan, "stampfli": cmd_stampfli}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        _config(args)
        return COMMANDS[args.command](args)
    except (InputError, ShiftLabError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        sc.set_tolerance(sc.MP.mpf("1e-12"))


if __name__ == "__main__":
    sys.exit(main())
