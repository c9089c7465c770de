"""``ceer`` command line: gen, code, decide, verify, export-dot.

Data goes to stdout, diagnostics to stderr. Exit codes: 0 ok, 2 bad usage
or spec, 3 fuel or scale exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .coding import DEFAULT_FUEL, FuelExhausted, build_coding, new_coding, new_merged
from .derived import RELATION_NAMES, DerivedContext, ScaleExceeded, decide
from .generators import FC, load_spec
from .harness import WindowConfig, run_all, verify_spec
from .relations import FiniteRelation

EXIT_OK, EXIT_USAGE, EXIT_FUEL = 0, 2, 3


class UsageError(Exception):
    pass


def _fuel(args) -> int:
    if args.fuel is not None:
        return args.fuel
    env = os.environ.get("CEER_FUEL")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"CEER_FUEL must be an integer, got {env!r}") from None
        if value < 1:
            raise UsageError("CEER_FUEL must be positive")
        return value
    return DEFAULT_FUEL


def _spec(text: str):
    try:
        return load_spec(text)
    except ValueError as exc:
        raise UsageError(f"bad relation spec: {exc}") from None


def cmd_gen(args, out) -> int:
    spec = _spec(args.spec)
    out.write(spec.truth.window(args.window).to_json() + "\n")
    return EXIT_OK


def cmd_code(args, out) -> int:
    spec = _spec(args.spec)
    fuel = _fuel(args)
    try:
        table = build_coding(spec.nu, args.n, fuel)
    except FuelExhausted as exc:
        msg = f"ceer: {exc}"
        if spec.truth.class_kind != "IC":
            msg += ("\nceer: this relation has a finite class, and a coding exists only"
                    " when every class is infinite; no amount of fuel will help")
        print(msg, file=sys.stderr)
        return EXIT_FUEL
    out.write(table.to_json() + "\n")
    return EXIT_OK


def cmd_decide(args, out) -> int:
    spec = _spec(args.spec)
    fuel = _fuel(args)
    if args.i < 0 or args.j < 0:
        raise UsageError("i and j must be natural numbers")
    coding = new_merged(spec.nu, fuel) if args.relation in ("J", "G") else new_coding(spec.nu, fuel)
    d = decide(DerivedContext(coding), args.relation, args.i, args.j)
    if args.json:
        out.write(json.dumps(d.to_dict(), sort_keys=True) + "\n")
    else:
        wit = " " + json.dumps(d.witness, sort_keys=True) if d.witness else ""
        out.write(f"{'true' if d.value else 'false'}{wit}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    seeds = tuple(args.seed) if args.seed else (0,)
    w = WindowConfig(args.window, _fuel(args), seeds, args.table_cap, args.merged_cap)
    spec = _spec(args.spec) if args.spec else None
    report = verify_spec(spec, w) if spec else run_all(w)
    # canonical form, so equivalent invocations share a manifest
    line = ["ceer", "verify", *([args.spec] if spec else []), "--window", str(w.n),
            "--fuel", str(w.fuel), "--table-cap", str(w.table_cap), "--merged-cap", str(w.merged_cap)]
    for seed in w.seeds:
        line += ["--seed", str(seed)]
    report.manifest["command"] = " ".join(line)
    out.write(report.to_json() + "\n" if args.json else report.to_text())
    if args.figures:
        from .plots import write_figures

        for path in write_figures(report, spec, args.figures, w):
            print(f"ceer: wrote {path}", file=sys.stderr)
    return EXIT_OK


def cmd_export_dot(args, out) -> int:
    spec = _spec(args.spec)
    n = args.window
    if args.relation is None:
        rel = spec.truth.window(n)
        name = "E"
    else:
        if spec.truth.class_kind == FC:
            raise UsageError("derived relations need a relation whose classes are all infinite")
        merged = args.relation in ("J", "G")
        coding = new_merged(spec.nu, _fuel(args)) if merged else new_coding(spec.nu, _fuel(args))
        ctx = DerivedContext(coding)
        rel = FiniteRelation.from_predicate(
            n, lambda i, j: decide(ctx, args.relation, i, j).value)
        name = args.relation
    out.write(rel.to_dot(name))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ceer", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"ceer {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def fuel_opt(q):
        q.add_argument("--fuel", type=int, default=None,
                       help=f"enumerator queries per search step (default $CEER_FUEL or {DEFAULT_FUEL})")

    g = sub.add_parser("gen", help="materialise a relation on [0, window]^2 as JSON")
    g.add_argument("spec", help="relation spec: JSON or shorthand such as mod:3")
    g.add_argument("--window", type=int, default=16)
    g.set_defaults(run=cmd_gen)

    c = sub.add_parser("code", help="print a coding table prefix as JSON")
    c.add_argument("spec")
    c.add_argument("-n", type=int, default=10, help="number of entries")
    fuel_opt(c)
    c.set_defaults(run=cmd_code)

    d = sub.add_parser("decide", help="decide one derived relation at (i, j)")
    d.add_argument("relation", choices=RELATION_NAMES)
    d.add_argument("i", type=int)
    d.add_argument("j", type=int)
    d.add_argument("--spec", default="full", help="relation spec (default: full)")
    d.add_argument("--json", action="store_true")
    fuel_opt(d)
    d.set_defaults(run=cmd_decide)

    v = sub.add_parser("verify", help="run the windowed checks")
    v.add_argument("spec", nargs="?", default=None, help="relation spec; omit for the built-in suite")
    v.add_argument("--window", type=int, default=30)
    v.add_argument("--seed", type=int, action="append")
    v.add_argument("--table-cap", type=int, default=WindowConfig.table_cap)
    v.add_argument("--merged-cap", type=int, default=WindowConfig.merged_cap)
    v.add_argument("--json", action="store_true")
    v.add_argument("--figures", metavar="DIR", help="also write PNG figures into DIR")
    fuel_opt(v)
    v.set_defaults(run=cmd_verify)

    e = sub.add_parser("export-dot", help="Graphviz rendering of a windowed relation")
    e.add_argument("spec")
    e.add_argument("--window", type=int, default=12)
    e.add_argument("--relation", choices=RELATION_NAMES, default=None,
                   help="a derived relation instead of the relation itself")
    fuel_opt(e)
    e.set_defaults(run=cmd_export_dot)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    for name in ("window", "n", "fuel", "table_cap", "merged_cap"):
        value = getattr(args, name, None)
        if value is not None and value < (0 if name == "n" else 1):
            print(f"ceer: --{name.replace('_', '-')} out of range: {value}", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.run(args, out)
    except UsageError as exc:
        print(f"ceer: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FuelExhausted, ScaleExceeded) as exc:
        print(f"ceer: {exc}", file=sys.stderr)
        return EXIT_FUEL
