"""Command-line interface: ``stackat check | bench | dot | oracle-refute``.

Exit status for ``check`` and ``oracle-refute``: 0 equivalent (or no
refutation found), 1 inequivalent, 2 error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import sys
from pathlib import Path

from . import oracle
from .ast import StackatSyntaxError, Universe, UniverseError, desugar, parse_program, parse_values
from .bench import FAMILIES, BenchSpec, run, write_csv
from .canon import poppush_close, pushpop_close, zip_automaton
from .decide import certify, check_equivalence
from .trace import TraceAutomaton, relevant_fields

log = logging.getLogger("stackat")

EXIT_EQUIVALENT, EXIT_INEQUIVALENT, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


def _read_program(inline, path, label):
    if inline is not None and path is not None:
        raise CliError(f"give program {label} inline or as a file, not both")
    if path is not None:
        try:
            source = Path(path).read_text()
        except OSError as exc:
            raise CliError(f"cannot read {path}: {exc}") from None
    elif inline is not None:
        source = inline
    else:
        raise CliError(f"program {label} missing (use -{label} or --file{label})")
    try:
        return parse_program(source)
    except StackatSyntaxError as exc:
        raise CliError(f"program {label}: syntax error at {exc}") from None
    except UniverseError as exc:
        raise CliError(f"program {label}: {exc}") from None


def _universe(args, exprs, declared) -> Universe:
    universe = Universe.infer(*exprs)
    for u in declared:
        if u is not None:
            universe = universe.union(u)
    fields, values = universe.fields, universe.values
    if args.fields is not None:
        fields = tuple(f for f in args.fields.split(",") if f)
    if args.values is not None:
        values = parse_values(args.values)
    universe = Universe(fields, values)
    for i, e in enumerate(exprs, 1):
        try:
            universe.check(e)
        except UniverseError as exc:
            raise CliError(f"program {i}: {exc}") from None
    return universe


def _add_program_args(p, count=2):
    for i in range(1, count + 1):
        p.add_argument(f"-{i}", dest=f"prog{i}", metavar="PROGRAM", help=f"program {i} as inline text")
        p.add_argument(f"--file{i}", dest=f"file{i}", metavar="PATH", help=f"program {i} from a file")
    p.add_argument("--fields", help="comma-separated field list (overrides inference)")
    p.add_argument("--values", help="value set, e.g. 0..3 or 1,4 (overrides inference)")


def _programs(args, count=2):
    parsed = [_read_program(getattr(args, f"prog{i}"), getattr(args, f"file{i}"), i) for i in range(1, count + 1)]
    exprs = [e for e, _ in parsed]
    universe = _universe(args, exprs, [u for _, u in parsed])
    return exprs, universe


def _header_name(header) -> str:
    return "-".join(str(v) for v in header) if header else "emp"


def write_stage_dots(e, universe, out_dir: Path, pairs=None, all_fields=False, prefix=""):
    """Write one DOT file per pipeline stage and header pair; returns the paths."""
    out_dir.mkdir(parents=True, exist_ok=True)
    e = desugar(e, universe)
    fields = universe.fields if all_fields else relevant_fields(e)
    headers = list(itertools.product(universe.values, repeat=len(fields)))
    written = []
    for a1 in headers:
        ta = TraceAutomaton(e, a1, fields, labels=True)
        closed = pushpop_close(ta.nfa)
        for a2 in headers:
            if pairs is not None and (a1, a2) not in pairs:
                continue
            stages = {}
            stages["trace"] = ta.for_output(a2)
            stages["pushpop"] = closed.with_final(ta.final_states(a2))
            stages["zipped"] = zip_automaton(stages["pushpop"])
            stages["poppush"] = poppush_close(stages["zipped"], universe.values)
            for stage, nfa in stages.items():
                name = f"{prefix}{stage}_{_header_name(a1)}_{_header_name(a2)}"
                path = out_dir / f"{name}.dot"
                path.write_text(nfa.to_dot(name))
                written.append(path)
    return written


def cmd_check(args) -> int:
    (e, f), universe = _programs(args)
    verdict = check_equivalence(e, f, universe, exhaustive=args.exhaustive,
                                all_fields=args.all_fields, jobs=args.jobs)
    if not verdict.equivalent and not args.no_certify and not certify(verdict, e, f):
        print("internal error: counterexample failed oracle certification", file=sys.stderr)
        return EXIT_ERROR
    if args.dot_dir:
        pairs = None
        ce = verdict.counterexample
        if ce is not None:
            fs = universe.fields
            pairs = {(tuple(ce.header_in[x] for x in fs), tuple(ce.header_out[x] for x in fs))}
        for prefix, prog in (("left_", e), ("right_", f)):
            write_stage_dots(prog, universe, Path(args.dot_dir), pairs=pairs, all_fields=True, prefix=prefix)
    if args.json:
        print(json.dumps(verdict.to_json(), indent=2))
    elif verdict.equivalent:
        print(f"equivalent ({verdict.header_pairs_checked} header pairs, {verdict.wall_time_ms:.1f} ms)")
    else:
        ce = verdict.counterexample
        print("not equivalent")
        print(f"  input:  {ce.input_packet}")
        print(f"  output: {ce.output_packet}")
        print(f"  related only by the {ce.accepted_by} program")
    return EXIT_EQUIVALENT if verdict.equivalent else EXIT_INEQUIVALENT


def cmd_bench(args) -> int:
    families = FAMILIES if args.family == "all" else (args.family,)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        specs = [BenchSpec(fam, args.n_max, args.repeats, args.n_min) for fam in families]
        rows = write_csv(itertools.chain.from_iterable(run(spec) for spec in specs), out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_EQUIVALENT if all(r["verdict"] == "equivalent" for r in rows) else EXIT_INEQUIVALENT


def cmd_dot(args) -> int:
    (e,), universe = _programs(args, count=1)
    pairs = None
    if args.pair:
        a1, a2 = (tuple(parse_values(x)) if x != "emp" else () for x in args.pair)
        pairs = {(a1, a2)}
    paths = write_stage_dots(e, universe, Path(args.out_dir), pairs=pairs, all_fields=args.all_fields)
    if pairs is not None and not paths:
        raise CliError(f"{' '.join(args.pair)} is not a header pair of this universe")
    for p in paths:
        print(p)
    return 0


def cmd_oracle_refute(args) -> int:
    (e, f), universe = _programs(args)
    e, f = desugar(e, universe), desugar(f, universe)
    found = oracle.refute(e, f, universe, args.bound, slack=args.slack)
    if args.json:
        payload = None
        if found is not None:
            p, q = found
            payload = {"input": {"header": p.header_dict(), "stack": list(p.stack)},
                       "output": {"header": q.header_dict(), "stack": list(q.stack)}}
        print(json.dumps({"refuted": found is not None, "witness": payload}, indent=2))
    elif found is None:
        print(f"no difference with stacks up to {args.bound}")
    else:
        p, q = found
        print(f"differ on input {p} -> output {q}")
    return EXIT_EQUIVALENT if found is None else EXIT_INEQUIVALENT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stackat", description="StacKAT equivalence checker")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide equivalence of two programs")
    _add_program_args(p)
    p.add_argument("--exhaustive", action="store_true", help="report the shortest counterexample over all header pairs")
    p.add_argument("--all-fields", action="store_true", help="enumerate every universe field, not only those used")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for header pairs")
    p.add_argument("--dot-dir", help="write per-stage DOT files here")
    p.add_argument("--json", action="store_true", help="print the verdict as JSON")
    p.add_argument("--no-certify", action="store_true", help="skip oracle replay of counterexamples")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", help="run the benchmark families, CSV on stdout")
    p.add_argument("--family", default="all", choices=("all",) + FAMILIES)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--output", "-o", help="CSV file (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("dot", help="write DOT files for each pipeline stage")
    _add_program_args(p, count=1)
    p.add_argument("--out-dir", default=".", help="output directory")
    p.add_argument("--pair", nargs=2, metavar=("IN", "OUT"),
                   help="restrict to one header pair, values comma-separated in field order ('emp' when no fields)")
    p.add_argument("--all-fields", action="store_true")
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("oracle-refute", help="brute-force search for a differing input/output pair")
    _add_program_args(p)
    p.add_argument("--bound", type=int, default=3, help="maximum input/output stack length")
    p.add_argument("--slack", type=int, default=None, help="extra intermediate stack headroom")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle_refute)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (CliError, UniverseError, ValueError) as exc:
        print(f"stackat: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
