"""Command-line interface: ``bellwit <subcommand> ...``.

Exit status is 0 on success, 1 on domain or input-file errors, 2 on usage errors.
JSON goes out with sorted keys and shortest round-trip floats, so identical
arguments give byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import bisep, optimize, quantum, tensor, witness
from .errors import BellwitError, DimensionMismatchError

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise BellwitError(f"cannot read {path}: {exc}") from exc


def load_tensor(path: str) -> tensor.BellTensor:
    return tensor.BellTensor.from_dict(_read_json(path))


def load_correlations(path: str) -> quantum.CorrelationTensor:
    return quantum.CorrelationTensor.from_dict(_read_json(path))


def load_angles(path: str) -> quantum.MeasurementAngles:
    return quantum.MeasurementAngles.from_dict(_read_json(path))


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _scalar_csv(record: dict) -> str:
    """One header row and one value row; nested values are JSON-encoded."""
    buf = io.StringIO()
    keys = sorted(record)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys)
    row = []
    for k in keys:
        v = record[k]
        if isinstance(v, (dict, list)):
            v = json.dumps(v, sort_keys=True, separators=(",", ":"))
        elif v is None:
            v = ""
        else:
            v = repr(v) if isinstance(v, float) else v
        row.append(v)
    writer.writerow(row)
    return buf.getvalue()


def parse_m_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or a..b range, got {text!r}")
    if a > b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return a, b


def _add_tensor_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["cosine", "parity"])
    p.add_argument("--m", type=int)
    p.add_argument("--delta", type=float, default=tensor.DEFAULT_DELTA,
                   help="cosine offset (default -0.5)")
    p.add_argument("--tensor", metavar="PATH", help="tensor JSON file instead of --family/--m")


def _tensor_from_args(args, parser: argparse.ArgumentParser) -> tensor.BellTensor:
    if args.tensor is not None:
        if args.family is not None or args.m is not None:
            parser.error("--tensor cannot be combined with --family/--m")
        return load_tensor(args.tensor)
    if args.family is None or args.m is None:
        parser.error("either --tensor or both --family and --m are required")
    return tensor.build_tensor(args.family, args.m, args.delta)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellwit",
        description="Multisetting tripartite Bell inequalities and entanglement witnesses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write a Bell tensor as JSON")
    p.add_argument("--family", choices=["cosine", "parity"], required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta", type=float, default=tensor.DEFAULT_DELTA)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("bounds", help="quantum, biseparable and no-signalling bounds")
    _add_tensor_source(p)
    p.add_argument("--no-bruteforce", action="store_true", help="skip sign-vector enumeration")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("optimize", help="see-saw search for the quantum maximum")
    _add_tensor_source(p)
    p.add_argument("--restarts", type=int, default=optimize.DEFAULT_RESTARTS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=optimize.DEFAULT_TOL)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("certify", help="certify genuine tripartite entanglement from correlators")
    p.add_argument("--tensor", metavar="PATH", required=True)
    p.add_argument("--data", metavar="PATH", required=True, help="correlation JSON file")
    p.add_argument("--tol", type=float, default=witness.DEFAULT_TOL)
    p.add_argument("--stat-tol", type=float,
                   help="margin required for experimental data; overrides --tol")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("sweep", help="closed-form threshold visibility table")
    p.add_argument("--family", choices=["cosine", "parity"], required=True)
    p.add_argument("--m", type=parse_m_range, required=True, metavar="A..B")
    p.add_argument("--delta", type=float, default=tensor.DEFAULT_DELTA)
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("simulate", help="noisy-GHZ correlators for a tensor's canonical settings")
    _add_tensor_source(p)
    p.add_argument("--V", type=float, required=True, dest="visibility")
    p.add_argument("--angles", metavar="PATH", help="use these settings instead of the canonical ones")
    p.add_argument("--out", metavar="PATH")
    return parser


def _cmd_build(args, parser):
    if args.m < 2:
        parser.error("--m must be >= 2")
    t = tensor.build_tensor(args.family, args.m, args.delta)
    _write(dumps(t.to_dict()), args.out)


def _cmd_bounds(args, parser):
    t = _tensor_from_args(args, parser)
    report = bisep.compute_bounds(t, bruteforce=not args.no_bruteforce).to_dict()
    _write(dumps(report) if args.format == "json" else _scalar_csv(report), None)


def _cmd_optimize(args, parser):
    if args.restarts < 1:
        parser.error("--restarts must be >= 1")
    if args.tol <= 0:
        parser.error("--tol must be > 0")
    t = _tensor_from_args(args, parser)
    res = optimize.seesaw_quantum_max(t, restarts=args.restarts, seed=args.seed, tol=args.tol)
    _write(dumps(res.to_dict()), args.out)


def _cmd_certify(args, parser):
    tol = args.stat_tol if args.stat_tol is not None else args.tol
    if tol < 0:
        parser.error("tolerance must be >= 0")
    t = load_tensor(args.tensor)
    c = load_correlations(args.data)
    result = witness.certify(t, c, tol=tol).to_dict()
    _write(dumps(result) if args.format == "json" else _scalar_csv(result), None)


def _cmd_sweep(args, parser):
    lo, hi = args.m
    rows = witness.sweep(args.family, lo, hi, args.delta)
    if args.format == "json":
        text = dumps([dict(zip(("m", "Q_lower", "B", "V_threshold"), r)) for r in rows])
    else:
        lines = ["m,Q_lower,B,V_threshold"]
        lines += [f"{m},{q:.17g},{b:.17g},{v:.17g}" for m, q, b, v in rows]
        text = "\n".join(lines) + "\n"
    _write(text, args.out)


def _cmd_simulate(args, parser):
    t = _tensor_from_args(args, parser)
    if args.angles is not None:
        angles = load_angles(args.angles)
        if angles.m != t.m:
            raise DimensionMismatchError(f"angles have m={angles.m}, tensor has m={t.m}")
        corr = quantum.ghz_correlators(angles, quantum.StateSpec(args.visibility))
    else:
        corr = witness.simulate_noisy_ghz(t, args.visibility)
    _write(dumps(corr.to_dict()), args.out)


_COMMANDS = {
    "build": _cmd_build,
    "bounds": _cmd_bounds,
    "optimize": _cmd_optimize,
    "certify": _cmd_certify,
    "sweep": _cmd_sweep,
    "simulate": _cmd_simulate,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _COMMANDS[args.command](args, parser)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except BellwitError as exc:
        print(f"bellwit: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def main() -> None:
    sys.exit(run())
