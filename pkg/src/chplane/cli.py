"""Command line interface.

Subcommands:

* ``sweep``: run the parameter sweep over a range of n and export the
  accepted examples as CSV or JSONL.
* ``check``: decide a single (n, l, k, p) tuple, printing each condition
  with its slack and, when accepted, the invariants.
* ``tables``: recompute the bundled catalogues and compare.
* ``census``: checkpointed large sweep with a summary.

A ``--config`` file supplies ``key = value`` defaults for any option;
explicit flags always win.  Exit codes: 0 success, 1 verification
mismatch (a rejected tuple or a table discrepancy), 2 bad configuration,
3 a violated structural property.
"""

from __future__ import annotations

import argparse
import ast
import json
import sys
from dataclasses import fields
from pathlib import Path

from .bisector import STRICT_MARGIN
from .potential import toledo_by_integral
from .quadrangle import (
    DEFAULT_Z_SEED,
    Q2,
    Params,
    check_conditions,
    degree,
    verify_identities,
)
from .sweep import (
    ExampleRecord,
    SweepConfig,
    check_tuple,
    run_sweep,
    write_csv,
    write_jsonl,
)
from .tables import (
    compare_key_sets,
    load_extremes,
    load_n101,
    load_real_hyperbolic,
    match_rows,
    real_hyperbolic_keys,
)
from .triangle import PropertyViolation, TrianglePolars, classify_triangle

__all__ = ["main"]


class ConfigError(Exception):
    pass


DEFAULTS = {
    "n_min": 3,
    "n_max": 12,
    "margin": STRICT_MARGIN,
    "threads": None,
    "z_seed": DEFAULT_Z_SEED,
    "verify_identities": False,
    "format": "csv",
    "out": None,
    "filter": None,
    "checkpoint": None,
}

COMMAND_DEFAULTS = {
    "census": {"n_max": 1001, "checkpoint": "census_checkpoint"},
}

FIELD_NAMES = tuple(f.name for f in fields(ExampleRecord))

_ALLOWED_FILTER_NODES = (
    ast.Expression, ast.BoolOp, ast.BinOp, ast.UnaryOp, ast.Compare,
    ast.Name, ast.Load, ast.Constant, ast.And, ast.Or, ast.Not,
    ast.USub, ast.UAdd, ast.Add, ast.Sub, ast.Mult, ast.Div,
    ast.FloorDiv, ast.Mod, ast.Eq, ast.NotEq, ast.Lt, ast.LtE,
    ast.Gt, ast.GtE,
)


def compile_filter(text: str):
    """A predicate on records from an expression over their fields,
    e.g. ``3*e >= chi and n <= 53``.  Only arithmetic, comparisons and
    boolean connectives are allowed."""
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as err:
        raise ConfigError(f"cannot parse filter: {err}") from err
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_FILTER_NODES):
            raise ConfigError(
                f"filter may only use record fields and arithmetic "
                f"(got {type(node).__name__})"
            )
        if isinstance(node, ast.Name) and node.id not in FIELD_NAMES:
            raise ConfigError(f"unknown record field in filter: {node.id!r}")
    code = compile(tree, "<filter>", "eval")

    def predicate(record: ExampleRecord) -> bool:
        env = {name: getattr(record, name) for name in FIELD_NAMES}
        return bool(eval(code, {"__builtins__": {}}, env))

    return predicate


def _read_config(path: str) -> dict:
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config file: {err}") from err
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, _, raw = line.partition("=")
        key = key.strip().replace("-", "_")
        raw = raw.strip()
        if key not in DEFAULTS:
            raise ConfigError(f"{path}:{lineno}: unknown option {key!r}")
        values[key] = _coerce(key, raw)
    return values


def _coerce(key: str, raw: str):
    kind = {
        "n_min": int, "n_max": int, "threads": int,
        "margin": float, "z_seed": float,
        "verify_identities": bool,
    }.get(key, str)
    if kind is bool:
        if raw.lower() in ("1", "true", "yes"):
            return True
        if raw.lower() in ("0", "false", "no"):
            return False
        raise ConfigError(f"option {key!r} expects a boolean, got {raw!r}")
    try:
        return kind(raw)
    except ValueError as err:
        raise ConfigError(f"option {key!r}: {err}") from err


def _resolve(args: argparse.Namespace, config: dict, command: str):
    """Fill every unset option from the config file, then from the
    builtin defaults."""
    merged = dict(DEFAULTS)
    merged.update(COMMAND_DEFAULTS.get(command, {}))
    merged.update(config)
    for key, value in merged.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


def _add_sweep_options(p: argparse.ArgumentParser, with_range=True):
    if with_range:
        p.add_argument("--n-min", type=int, dest="n_min")
        p.add_argument("--n-max", type=int, dest="n_max")
    p.add_argument("--margin", type=float, help="strict inequality margin")
    p.add_argument("--threads", type=int,
                   help="worker processes (default: CHPLANE_THREADS or all cores)")
    p.add_argument("--z-seed", type=float, dest="z_seed",
                   help="boundary seed angle for the fiber count")
    p.add_argument("--verify-identities", action="store_true", default=None,
                   dest="verify_identities",
                   help="check the algebraic identities on every accepted tuple")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chplane",
        description="Census of complex hyperbolic disc bundle examples.",
    )
    parser.add_argument("--config", help="file with key = value defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="sweep a range of n and export records")
    _add_sweep_options(p)
    p.add_argument("--format", choices=("csv", "jsonl"))
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--filter", help="expression over record fields")
    p.add_argument("--checkpoint", help="directory for resumable progress")

    p = sub.add_parser("check", help="decide a single parameter tuple")
    p.add_argument("n", type=int)
    p.add_argument("l", type=int)
    p.add_argument("k", type=int)
    p.add_argument("p", type=int)
    _add_sweep_options(p, with_range=False)

    p = sub.add_parser("tables", help="recompute the bundled catalogues")
    _add_sweep_options(p, with_range=False)

    p = sub.add_parser("census", help="checkpointed sweep with a summary")
    _add_sweep_options(p)
    p.add_argument("--format", choices=("csv", "jsonl"))
    p.add_argument("--out", help="output path for the accepted records")
    p.add_argument("--checkpoint", help="directory for resumable progress")

    return parser


def _cfg_from_args(args) -> SweepConfig:
    return SweepConfig(
        n_min=args.n_min,
        n_max=args.n_max,
        margin=args.margin,
        threads=args.threads,
        z_seed=args.z_seed,
        verify=args.verify_identities,
        checkpoint=args.checkpoint,
    )


def _emit(records, args):
    writer = write_csv if args.format == "csv" else write_jsonl
    writer(records, args.out if args.out else sys.stdout)


def cmd_sweep(args) -> int:
    result = run_sweep(_cfg_from_args(args))
    records = result.records
    if args.filter:
        keep = compile_filter(args.filter)
        records = [r for r in records if keep(r)]
    _emit(records, args)
    print(
        f"scanned {result.scanned} tuples, {result.candidates} candidates, "
        f"{len(result.records)} accepted ({result.marginal_count} marginal, "
        f"{result.c_fuchsian_count} plane degenerate excluded)"
        + (f", {len(records)} after filter" if args.filter else ""),
        file=sys.stderr,
    )
    return 0


def cmd_check(args) -> int:
    params = Params(args.n, args.l, args.k, args.p)
    report = check_conditions(params, args.margin)
    print(f"({params.n}, {params.l}, {params.k}, {params.p}):"
          f" {'accepted' if report.passed else 'rejected'}")
    for name, ok in report.checks.items():
        slack = report.slacks.get(name)
        extra = f"  slack {slack: .3e}" if slack is not None else ""
        print(f"  {name:<10} {'PASS' if ok else 'FAIL'}{extra}")
    if not report.passed:
        return 1
    record = check_tuple(params, args.margin, args.z_seed, verify=False)
    print(
        f"  f = {record.f}, t = {record.t}, genus = {record.genus}, "
        f"chi = {record.chi}, e = {record.e}, tau = {record.tau}, "
        f"e_P = {record.e_P}, orb_e = {record.orb_e}"
        + (", marginal" if record.marginal else "")
        + (", plane degenerate" if record.c_fuchsian else "")
    )
    data = report.data
    m = data.m.astype(complex)
    centre = classify_triangle(TrianglePolars(Q2, m, data.Wm))
    side = classify_triangle(TrianglePolars(data.h2, data.Wm, m))
    print(f"  triangles: centre {centre.tag}, side {side.tag}")
    integral = degree(params) * toledo_by_integral(data)
    print(f"  toledo: closed form {record.tau} = {float(record.tau):+.6f}, "
          f"boundary integral {integral:+.6f}")
    if args.verify_identities:
        resid = verify_identities(data)
        worst = max(resid, key=lambda k: resid[k])
        print(f"  identities hold; largest residual {resid[worst]:.3e} ({worst})")
    return 0


def cmd_tables(args) -> int:
    base = SweepConfig(n_min=3, n_max=53, margin=args.margin,
                       threads=args.threads, z_seed=args.z_seed,
                       verify=args.verify_identities)
    low = run_sweep(base)
    top = run_sweep(SweepConfig(n_min=101, n_max=101, margin=args.margin,
                                threads=args.threads, z_seed=args.z_seed,
                                verify=args.verify_identities))
    failures = 0

    problems = match_rows(load_extremes(), low.records)
    failures += _table_report("extremes", len(load_extremes()), problems)

    rows = load_real_hyperbolic()
    problems = match_rows(rows, low.records)
    problems += compare_key_sets(rows, real_hyperbolic_keys(low.records))
    failures += _table_report("real_hyperbolic", len(rows), problems)

    rows = load_n101()
    problems = match_rows(rows, top.records)
    problems += compare_key_sets(rows, {r.key for r in top.records})
    failures += _table_report("n101", len(rows), problems)

    return 1 if failures else 0


def _table_report(name: str, size: int, problems: list) -> int:
    status = "PASS" if not problems else "FAIL"
    print(f"{name:<16} {status} ({size} rows)")
    for p in problems:
        print(f"    {p}")
    return 1 if problems else 0


def cmd_census(args) -> int:
    result = run_sweep(_cfg_from_args(args))
    if args.out:
        writer = write_csv if args.format == "csv" else write_jsonl
        writer(result.records, args.out)
    summary = result.summary()
    summary.pop("per_n")
    summary.update({
        "n_min": args.n_min,
        "n_max": args.n_max,
        "scanned": result.scanned,
        "candidates": result.candidates,
        "marginal_tuples": [list(r.key) for r in result.records if r.marginal][:200],
        "adjacent_only_tuples": [[p.n, p.l, p.k, p.p]
                                 for p in result.adjacent_only][:200],
    })
    print(json.dumps(summary, indent=2))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _read_config(args.config) if args.config else {}
        args = _resolve(args, config, args.command)
        handler = {
            "sweep": cmd_sweep,
            "check": cmd_check,
            "tables": cmd_tables,
            "census": cmd_census,
        }[args.command]
        return handler(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except PropertyViolation as err:
        print(f"property violation: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
