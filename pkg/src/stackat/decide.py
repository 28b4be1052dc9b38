"""Equivalence checking for full StacKAT programs.

For every pair of input/output headers the two programs' trace automata are
canonicalised and compared; the programs are equivalent iff every pair
agrees.  A distinguishing zipped word for a failing pair unzips to a stack
input/output pair that exactly one program relates.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from . import oracle
from .ast import Expr, Universe, UniverseError, count_pushes, desugar
from .canon import canonicalize, poppush_close, pushpop_close, split_zip_word, zip_automaton
from .nfa import Nfa, language_equivalent
from .oracle import Packet
from .trace import ExprTable, TraceAutomaton, relevant_fields


@dataclass(frozen=True)
class Counterexample:
    header_in: dict
    input_stack: tuple
    header_out: dict
    output_stack: tuple
    accepted_by: str          # "left" or "right"
    word: tuple = ()          # the distinguishing zipped word

    @property
    def input_packet(self) -> Packet:
        return Packet.make(self.header_in, self.input_stack)

    @property
    def output_packet(self) -> Packet:
        return Packet.make(self.header_out, self.output_stack)

    def to_json(self) -> dict:
        return {
            "header_in": dict(self.header_in),
            "input_stack": list(self.input_stack),
            "header_out": dict(self.header_out),
            "output_stack": list(self.output_stack),
            "accepted_by": self.accepted_by,
        }


@dataclass(frozen=True)
class Verdict:
    equivalent: bool
    counterexample: Optional[Counterexample] = None
    header_pairs_checked: int = 0
    wall_time_ms: float = 0.0
    universe: Optional[Universe] = field(default=None, compare=False)

    def __bool__(self):
        return self.equivalent

    def to_json(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "counterexample": None if self.counterexample is None else self.counterexample.to_json(),
            "header_pairs_checked": self.header_pairs_checked,
            "wall_time_ms": round(self.wall_time_ms, 3),
        }


def extract_counterexample(word, alpha1: dict, alpha2: dict) -> tuple:
    """Unzip ``word`` into ``(input packet, output packet)``.

    The zipped word lists pops from the innermost outwards, so the first pop
    of the trace is the last zipped pop; stacks are returned top-first.
    """
    pops, pushes = split_zip_word(word)
    return Packet.make(alpha1, reversed(pops)), Packet.make(alpha2, reversed(pushes))


class _Program:
    """Per-program state reused across header pairs."""

    def __init__(self, e: Expr, fields):
        self.table = ExprTable(e, fields)
        self.fields = fields

    def closed(self, alpha1):
        ta = TraceAutomaton(None, alpha1, self.fields, table=self.table)
        return ta, pushpop_close(ta.nfa)


def _canon(ta: TraceAutomaton, closed: Nfa, alpha2, values) -> Nfa:
    return poppush_close(zip_automaton(closed.with_final(ta.final_states(alpha2))), values)


def _check_input_header(e, f, fields, values, alpha1, exhaustive):
    """Compare all output headers for one input header; returns failures in enumeration order."""
    pe, pf = _Program(e, fields), _Program(f, fields)
    ta_e, cl_e = pe.closed(alpha1)
    ta_f, cl_f = pf.closed(alpha1)
    failures = []
    for alpha2 in itertools.product(values, repeat=len(fields)):
        if not ta_e.final_states(alpha2) and not ta_f.final_states(alpha2):
            continue
        ce = _canon(ta_e, cl_e, alpha2, values)
        cf = _canon(ta_f, cl_f, alpha2, values)
        same, word = language_equivalent(ce, cf)
        if not same:
            side = "left" if ce.accepts(word) else "right"
            failures.append((alpha2, word, side))
            if not exhaustive:
                break
    return failures


def _check_input_header_star(args):
    return _check_input_header(*args)


def check_equivalence(e: Expr, f: Expr, universe: Optional[Universe] = None, *,
                      exhaustive: bool = False, all_fields: bool = False,
                      jobs: int = 1) -> Verdict:
    """Decide whether ``e`` and ``f`` denote the same packet relation.

    ``universe`` defaults to the fields and values mentioned in either
    program.  Only fields that occur in ``e`` or ``f`` are enumerated unless
    ``all_fields`` is set; the others cannot tell the programs apart.  With
    ``exhaustive`` every header pair is checked and the shortest
    counterexample overall is reported; otherwise the first failing pair in
    enumeration order wins.
    """
    t0 = time.perf_counter()
    if universe is None:
        universe = Universe.infer(e, f)
    for prog in (e, f):
        try:
            universe.check(prog)
        except UniverseError as exc:
            raise UniverseError(f"program outside universe: {exc}") from None
    e = desugar(e, universe)
    f = desugar(f, universe)
    fields = universe.fields if all_fields else relevant_fields(e, f)
    values = universe.values
    inputs = list(itertools.product(values, repeat=len(fields)))
    tasks = [(e, f, fields, values, a1, exhaustive) for a1 in inputs]

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(_check_input_header_star, tasks, chunksize=max(1, len(tasks) // (4 * jobs)))
            per_input = list(results)
    else:
        per_input = []
        for task in tasks:
            failures = _check_input_header(*task)
            per_input.append(failures)
            if failures and not exhaustive:
                break

    best = None
    for a1, failures in zip(inputs, per_input):
        for a2, word, side in failures:
            if best is None or len(word) < len(best[2]):
                best = (a1, a2, word, side)
        if best is not None and not exhaustive:
            break

    checked = len(inputs) ** 2
    counterexample = None
    if best is not None:
        a1, a2, word, side = best
        default = {fld: values[0] for fld in universe.fields}
        h_in = {**default, **dict(zip(fields, a1))}
        h_out = {**h_in, **dict(zip(fields, a2))}
        p_in, p_out = extract_counterexample(word, h_in, h_out)
        counterexample = Counterexample(h_in, p_in.stack, h_out, p_out.stack, side, tuple(word))
    return Verdict(best is None, counterexample, checked, (time.perf_counter() - t0) * 1000.0, universe)


def certification_bound(ce: Counterexample, e: Expr, f: Expr) -> int:
    return len(ce.input_stack) + len(ce.output_stack) + max(count_pushes(e), count_pushes(f)) + 1


def certify(verdict: Verdict, e: Expr, f: Expr, bound: Optional[int] = None) -> bool:
    """Replay an inequivalence verdict in the oracle.

    True iff the side named in the counterexample relates the input/output
    packets and the other side does not.  With no explicit ``bound`` the
    stack bound starts at :func:`certification_bound` and doubles (up to
    eight times the start) until the accepting side relates the pair: some
    witnesses need intermediate stacks far taller than either endpoint,
    e.g. ``[3] -> []`` through ``(push 3 ; push 3 ; push 3 ; push 3)* ; (pop 3 ; pop 3 ; pop 3)*``.
    """
    if verdict.equivalent or verdict.counterexample is None:
        raise ValueError("certify needs an Inequivalent verdict")
    ce = verdict.counterexample
    universe = verdict.universe
    if universe is not None:
        # the oracle needs totally defined headers for every field it touches
        e, f = desugar(e, universe), desugar(f, universe)
    if bound is not None:
        bounds = [bound]
    else:
        start = certification_bound(ce, e, f)
        bounds = [start << i for i in range(4)]
    accepting, other = (e, f) if ce.accepted_by == "left" else (f, e)
    p_in, p_out = ce.input_packet, ce.output_packet
    for b in bounds:
        if oracle.relates(accepting, p_in, p_out, b):
            return not oracle.relates(other, p_in, p_out, b)
    return False


def canonical_automaton(e: Expr, alpha1: dict, alpha2: dict, universe: Universe) -> Nfa:
    """The canonical zipped automaton of ``e`` for one header pair (full field list)."""
    from .trace import build_trace_nfa

    e = desugar(e, universe)
    return canonicalize(build_trace_nfa(e, alpha1, alpha2, universe), universe.values)
