"""Command-line front end.

Subcommands::

    bscident identity {size2,size3,capacity,addition,general,refine} ...
    bscident channel --p P --n N [--brute-force]
    bscident reconcile --n N --p P (--schedule 2,2 | --adaptive) [--seed S]
    bscident optimize --p P [--tmax T]

Every subcommand writes records in one of three formats (``table``,
``json-lines``, ``csv``). The exit status is 0 only when every requested
check is within ``--tolerance``; invalid arguments exit with status 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Iterable

import numpy as np

from . import bitio
from .channel import MAX_BRUTE_N, ExtensionSpec, theorem1
from .entropy import binary_entropy
from .identities import (
    addition_formula,
    addition_formula_chain,
    general_block_decomposition,
    identity_capacity_form,
    identity_size2,
    identity_size3,
    milder_argument,
    refine_entropy_near_extreme,
)
from .reconciliation import (
    DEFAULT_SEED,
    DEFAULT_T_MAX,
    DEFAULT_THRESHOLD,
    BitPair,
    CorrelationModel,
    generate_pair,
    optimize_block_size,
    run_protocol,
)

IDENTITIES = ("size2", "size3", "capacity", "addition", "general", "refine")
DEFAULT_TOLERANCE = 1e-9


class CliError(Exception):
    """Invalid configuration; reported on stderr with exit status 2."""


def parse_grid(spec: str) -> list[float]:
    """``start:stop:step`` with both endpoints included (within half a step)."""
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise CliError(f"malformed grid {spec!r}; expected start:stop:step") from None
    if step <= 0 or stop < start:
        raise CliError(f"malformed grid {spec!r}; need step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    return [round(start + k * step, 12) for k in range(count)]


def parse_int_list(spec: str) -> list[int]:
    try:
        values = [int(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"malformed list {spec!r}; expected comma-separated integers") from None
    if not values:
        raise CliError("empty list")
    return values


def parse_float_list(spec: str) -> list[float]:
    try:
        return [float(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"malformed list {spec!r}") from None


def _clean(value):
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _flatten(record: dict, prefix: str = "") -> dict:
    flat = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "."))
        elif isinstance(value, list) and not (value and isinstance(value[0], dict)):
            flat[name] = ",".join(str(v) for v in value)
        elif isinstance(value, list):
            continue
        else:
            flat[name] = value
    return flat


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def render(records: list[dict], fmt: str) -> str:
    records = [_clean(r) for r in records]
    if fmt == "json-lines":
        return "".join(json.dumps(r) + "\n" for r in records)

    rows = [_flatten(r) for r in records]
    if fmt == "csv":
        columns: list[str] = []
        for row in rows:
            columns.extend(k for k in row if k not in columns)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()

    # one table per run of records sharing the same columns
    groups: list[list[dict]] = []
    for row in rows:
        if groups and list(groups[-1][0]) == list(row):
            groups[-1].append(row)
        else:
            groups.append([row])
    return "\n".join(_table(g) for g in groups)


def _table(rows: list[dict]) -> str:
    columns = list(rows[0])
    cells = [[_fmt(row.get(c)) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in cells)
    return "\n".join(lines) + "\n"


def _points(args) -> list[float]:
    if args.grid is not None:
        return parse_grid(args.grid)
    if args.p is None:
        raise CliError("give --p or --grid")
    return [args.p]


def cmd_identity(args) -> tuple[list[dict], bool]:
    records = []
    if args.name == "addition" and args.ps is not None:
        rep = addition_formula_chain(parse_float_list(args.ps))
        records.append(rep.to_record())
    else:
        for p in _points(args):
            if args.name == "size2":
                rec = identity_size2(p).to_record()
            elif args.name == "size3":
                rec = identity_size3(p).to_record()
            elif args.name == "capacity":
                rec = identity_capacity_form(p).to_record()
            elif args.name == "addition":
                if args.p2 is None:
                    raise CliError("addition needs --p2 (or --ps for a chain)")
                rec = addition_formula(p, args.p2).to_record()
            elif args.name == "general":
                rec = general_block_decomposition(p, args.n).to_record()
            else:
                refined = refine_entropy_near_extreme(p, depth=args.depth)
                direct = binary_entropy(p)
                rec = {
                    "identity": "refine",
                    "p_star": p,
                    "milder_p": milder_argument(p),
                    "depth": args.depth,
                    "lhs": direct,
                    "rhs": refined,
                    "abs_diff": abs(direct - refined),
                    "note": "h(p_star) derived from h at the milder argument p < p_star",
                }
            records.append(rec)
    ok = all(r["abs_diff"] <= args.tolerance for r in records)
    return records, ok


def cmd_channel(args) -> tuple[list[dict], bool]:
    if args.brute_force and args.n > MAX_BRUTE_N:
        raise CliError(f"--brute-force supports n <= {MAX_BRUTE_N}, got {args.n}")
    report = theorem1(ExtensionSpec(args.p, args.n), brute_force=args.brute_force)
    rec = report.to_record()
    diffs = [rec[k]["abs_diff"] for k in ("H_X", "H_Y", "H_X_given_Y", "capacity")]
    ok = all(d is None or d <= args.tolerance for d in diffs)
    return [rec], ok


def _load_pair(args) -> BitPair:
    if args.in_a or args.in_b:
        if not (args.in_a and args.in_b):
            raise CliError("--in-a and --in-b go together")
        a, b = bitio.read_bits(args.in_a), bitio.read_bits(args.in_b)
        if args.n is not None:
            a, b = a[: args.n], b[: args.n]
        return BitPair(a, b, args.p)
    if args.hex_a or args.hex_b:
        if not (args.hex_a and args.hex_b):
            raise CliError("--hex-a and --hex-b go together")
        return BitPair(bitio.bits_from_hex(args.hex_a), bitio.bits_from_hex(args.hex_b), args.p)
    if args.n is None or args.p is None:
        raise CliError("give --n and --p, or input bit arrays")
    if args.n < 0:
        raise CliError("--n must be non-negative")
    return generate_pair(args.n, CorrelationModel(args.p, args.seed))


def cmd_reconcile(args) -> tuple[list[dict], bool]:
    if (args.schedule is None) == (not args.adaptive):
        raise CliError("give exactly one of --schedule or --adaptive")
    schedule = parse_int_list(args.schedule) if args.schedule is not None else None
    if schedule is not None and any(t < 2 for t in schedule):
        raise CliError("block sizes in --schedule must be >= 2")
    pair = _load_pair(args)
    run = run_protocol(pair, schedule, adaptive=args.adaptive, threshold=args.threshold,
                       t_max=args.t_max)
    records = [{"record": "round", "round": i + 1, **r.to_record()} for i, r in enumerate(run.rounds)]
    summary = {
        "record": "summary",
        "initial_length": run.initial_length,
        "rounds": len(run.rounds),
        "final_length": run.final_length,
        "residual_disagreements": run.residual_disagreements,
    }
    if args.emit_keys:
        summary["key_a"] = bitio.bits_to_hex(run.final_pair.a)
        summary["key_b"] = bitio.bits_to_hex(run.final_pair.b)
    if args.out_a:
        bitio.write_bits(args.out_a, run.final_pair.a)
    if args.out_b:
        bitio.write_bits(args.out_b, run.final_pair.b)
    records.append(summary)
    return records, True


def cmd_optimize(args) -> tuple[list[dict], bool]:
    result = optimize_block_size(args.p, args.tmax)
    records = [{"t": t, "rate": r, "best": t == result.t_best} for t, r in result.rates.items()]
    return records, True


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json-lines", "csv"), default="table")
    common.add_argument("--out", help="write records here instead of stdout")
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)

    parser = argparse.ArgumentParser(prog="bscident", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    ident = sub.add_parser("identity", parents=[common], help="evaluate an entropy identity")
    ident.add_argument("name", choices=IDENTITIES)
    ident.add_argument("--p", type=float)
    ident.add_argument("--grid", help="start:stop:step, endpoints included")
    ident.add_argument("--n", type=int, default=4, help="block size for 'general'")
    ident.add_argument("--p2", type=float, help="second parameter for 'addition'")
    ident.add_argument("--ps", help="comma-separated parameters for a chained 'addition'")
    ident.add_argument("--depth", type=int, default=1, help="iterations for 'refine'")
    ident.set_defaults(func=cmd_identity)

    chan = sub.add_parser("channel", parents=[common], help="entropies and capacity of C^(n)")
    chan.add_argument("--p", type=float, required=True)
    chan.add_argument("--n", type=int, required=True)
    chan.add_argument("--brute-force", action="store_true")
    chan.set_defaults(func=cmd_channel)

    rec = sub.add_parser("reconcile", parents=[common], help="simulate parity reconciliation")
    rec.add_argument("--n", type=int)
    rec.add_argument("--p", type=float)
    rec.add_argument("--seed", type=int, default=DEFAULT_SEED)
    rec.add_argument("--schedule", help="comma-separated block sizes")
    rec.add_argument("--adaptive", action="store_true")
    rec.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    rec.add_argument("--t-max", type=int, default=DEFAULT_T_MAX)
    rec.add_argument("--hex-a")
    rec.add_argument("--hex-b")
    rec.add_argument("--in-a", help="raw binary file, MSB first")
    rec.add_argument("--in-b")
    rec.add_argument("--emit-keys", action="store_true", help="include final keys as hex")
    rec.add_argument("--out-a", help="write Alice's final key as a raw binary file")
    rec.add_argument("--out-b", help="write Bob's final key as a raw binary file")
    rec.set_defaults(func=cmd_reconcile)

    opt = sub.add_parser("optimize", parents=[common], help="retained rate per block size")
    opt.add_argument("--p", type=float, required=True)
    opt.add_argument("--tmax", type=int, default=8)
    opt.set_defaults(func=cmd_optimize)
    return parser


def main(argv: Iterable[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(None if argv is None else list(argv))
    try:
        records, ok = args.func(args)
    except CliError as exc:
        print(f"bscident {args.command}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"bscident {args.command}: {exc}", file=sys.stderr)
        return 2
    text = render(records, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
