"""Command-line entry point: ``retwist <command> (--standard slN | --rmatrix FILE)``.

Exit codes: 0 when every executed check passes, 1 when one fails (or a
checked R-matrix file violates YBE), 2 for unusable input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Sequence

from .report import CHECK_ORDER, SuiteOptions, emit, run_suite
from .rmatrix import RMatrixSpec, YBEError, make_spec, standard_r
from .scalars import Laurent, RationalQ, decode_rational, encode_rational
from .tensor import TensorOperator

COMMANDS: dict[str, tuple[str, ...]] = {
    "verify-ybe": ("ybe", "hecke"),
    "present": (),  # resolved from --type
    "twist-check": ("twist-equivalence",),
    "quasi-comm": ("quasi-commutativity",),
    "invariance": ("invariance",),
    "hilbert": ("hilbert",),
    "semiclassical": ("semiclassical",),
    "qmap": ("qmap",),
    "double-shadow": ("double-shadow",),
    "all": CHECK_ORDER,
}


class InputError(ValueError):
    """Malformed user input; maps to exit code 2."""


def _coefficient(raw, where: str) -> RationalQ:
    if isinstance(raw, bool):
        raise InputError(f"{where}: coefficient must not be a boolean")
    if isinstance(raw, int):
        return RationalQ(Laurent.const(raw))
    try:
        return decode_rational(raw)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: {exc}") from None


def _index_pair(raw, dim: int, where: str) -> tuple[int, int]:
    if not isinstance(raw, list) or len(raw) != 2 or not all(isinstance(x, int) and not isinstance(x, bool) for x in raw):
        raise InputError(f"{where}: expected a pair of integers, got {raw!r}")
    if not all(1 <= x <= dim for x in raw):
        raise InputError(f"{where}: indices must lie in 1..{dim}, got {raw!r}")
    return raw[0] - 1, raw[1] - 1


def rmatrix_from_json(data, source: str = "<input>") -> TensorOperator:
    """Decode ``{dim, entries: [{row: [i, j], col: [k, l], coeff}]}`` (1-based)."""
    if not isinstance(data, dict):
        raise InputError(f"{source}: top level must be an object")
    extra = set(data) - {"dim", "entries"}
    if extra:
        raise InputError(f"{source}: unknown fields {sorted(extra)}")
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise InputError(f"{source}: field 'dim' must be a positive integer")
    entries = data.get("entries")
    if not isinstance(entries, list):
        raise InputError(f"{source}: field 'entries' must be a list")
    out = {}
    for k, e in enumerate(entries):
        where = f"{source}: entries[{k}]"
        if not isinstance(e, dict) or set(e) != {"row", "col", "coeff"}:
            raise InputError(f"{where}: expected exactly the fields row, col, coeff")
        key = (_index_pair(e["row"], dim, where + ".row"), _index_pair(e["col"], dim, where + ".col"))
        if key in out:
            raise InputError(f"{where}: duplicate entry for row {e['row']}, col {e['col']}")
        out[key] = _coefficient(e["coeff"], where + ".coeff")
    return TensorOperator(dim, 2, out)


def rmatrix_to_json(R: TensorOperator) -> dict:
    return {
        "dim": R.dim,
        "entries": [
            {"row": [r[0] + 1, r[1] + 1], "col": [c[0] + 1, c[1] + 1], "coeff": encode_rational(v)}
            for r, c, v in R.entries()
        ],
    }


def parse_rmatrix_file(path: str | Path, unchecked: bool = False) -> RMatrixSpec:
    """Load an R-matrix file; raises :class:`InputError` or :class:`YBEError`."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    R = rmatrix_from_json(data, str(path))
    return make_spec(R, provenance=str(path), checked=not unchecked)


def _standard(value: str) -> int:
    m = re.fullmatch(r"sl(\d+)", value)
    if not m or int(m.group(1)) < 2:
        raise argparse.ArgumentTypeError(f"expected sl<n> with n >= 2, got {value!r}")
    return int(m.group(1))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="retwist", description="Exact checks for FRT and reflection-equation algebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--standard", type=_standard, metavar="sl<n>")
        src.add_argument("--rmatrix", metavar="FILE")
        p.add_argument("--unchecked", action="store_true", help="skip YBE validation of --rmatrix input")
        p.add_argument("--max-degree", type=int, default=None)
        p.add_argument("--h-order", type=int, default=1)
        p.add_argument("--format", choices=("text", "structured"), default="text")
        if name == "present":
            p.add_argument("--type", choices=("frt", "re"), required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.max_degree is not None and args.max_degree < 0:
        print("retwist: --max-degree must be non-negative", file=sys.stderr)
        return 2
    if args.h_order < 1:
        print("retwist: --h-order must be at least 1", file=sys.stderr)
        return 2
    try:
        spec = standard_r(args.standard) if args.standard else parse_rmatrix_file(args.rmatrix, args.unchecked)
    except InputError as exc:
        print(f"retwist: {exc}", file=sys.stderr)
        return 2
    except YBEError as exc:
        where = ""
        if exc.residual is not None and not exc.residual.is_zero():
            r, c, v = next(exc.residual.entries())
            where = f" (first residual at row {tuple(x + 1 for x in r)}, col {tuple(x + 1 for x in c)}: {v})"
        print(f"retwist: {args.rmatrix}: fails the Yang-Baxter equation{where}", file=sys.stderr)
        return 1
    selection = (f"present-{args.type}",) if args.command == "present" else COMMANDS[args.command]
    report = run_suite(spec, selection, SuiteOptions(max_degree=args.max_degree, h_order=args.h_order))
    sys.stdout.buffer.write(emit(report, args.format))
    sys.stdout.flush()
    return report.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
