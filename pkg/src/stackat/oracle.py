"""Brute-force reference semantics over bounded stacks.

The oracle interprets expressions directly on packets, the relational way:
``eval(e, p)`` is the set of packets ``e`` can output on input ``p``.  Stacks
that would grow beyond the bound are pruned, so results under-approximate the
true semantics.  That is enough to *refute* an equivalence, never to prove one.

Nothing here touches the automata code; it is the independent side of every
cross-check in the test suite.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional

from .ast import (
    Assign, AssignField, Dup, Expr, IfThenElse, One, Plus, Pop, PopField, Push,
    PushField, Seq, Star, TestEq, TestFieldEq, TestFieldNeq, TestNeq, Universe,
    While, Zero, count_pushes,
)


class Packet(NamedTuple):
    """A header/stack pair.

    ``header`` is a tuple of ``(field, value)`` pairs kept sorted by field so
    that packets hash and compare structurally; ``stack`` lists values
    top-first.
    """

    header: tuple
    stack: tuple

    @classmethod
    def make(cls, header: Mapping[str, int] = None, stack: Iterable[int] = ()) -> "Packet":
        return cls(tuple(sorted((header or {}).items())), tuple(stack))

    def get(self, field: str) -> int:
        for f, v in self.header:
            if f == field:
                return v
        raise KeyError(field)

    def set(self, field: str, value: int) -> "Packet":
        return Packet(tuple((f, value if f == field else v) for f, v in self.header), self.stack)

    def header_dict(self) -> dict:
        return dict(self.header)

    def __str__(self):
        h = ", ".join(f"{f}={v}" for f, v in self.header)
        return f"<{{{h}}}, {list(self.stack)}>"


def packet_order(p: Packet):
    """Sort key: header lexicographic, then stacks by length then values."""
    return (tuple(v for _, v in p.header), len(p.stack), p.stack)


def eval_set(e: Expr, inputs: Iterable[Packet], bound: int) -> frozenset:
    """Image of the packet set ``inputs`` under ``e``, with stacks capped at ``bound``."""
    return frozenset(_Interp(bound).run(e, frozenset(inputs)))


def eval(e: Expr, packet: Packet, bound: int) -> frozenset:  # noqa: A001 - mirrors the semantics bracket
    if len(packet.stack) > bound:
        raise ValueError(f"input stack longer than bound {bound}")
    return eval_set(e, (packet,), bound)


class _Interp:
    def __init__(self, bound: int):
        self.bound = bound

    def run(self, e: Expr, ps: frozenset) -> frozenset:
        if not ps:
            return ps
        if isinstance(e, Zero):
            return frozenset()
        if isinstance(e, One):
            return ps
        if isinstance(e, Plus):
            return self.run(e.left, ps) | self.run(e.right, ps)
        if isinstance(e, Seq):
            return self.run(e.right, self.run(e.left, ps))
        if isinstance(e, Star):
            seen = set(ps)
            frontier = ps
            while frontier:
                frontier = self.run(e.body, frontier) - seen
                seen |= frontier
            return frozenset(seen)
        if isinstance(e, TestEq):
            return frozenset(p for p in ps if p.get(e.field) == e.value)
        if isinstance(e, TestNeq):
            return frozenset(p for p in ps if p.get(e.field) != e.value)
        if isinstance(e, Assign):
            return frozenset(p.set(e.field, e.value) for p in ps)
        if isinstance(e, Push):
            return frozenset(Packet(p.header, (e.value,) + p.stack) for p in ps if len(p.stack) < self.bound)
        if isinstance(e, Pop):
            return frozenset(Packet(p.header, p.stack[1:]) for p in ps if p.stack[:1] == (e.value,))
        # derived forms, interpreted directly rather than through desugaring
        if isinstance(e, PushField):
            return frozenset(Packet(p.header, (p.get(e.field),) + p.stack)
                             for p in ps if len(p.stack) < self.bound)
        if isinstance(e, PopField):
            return frozenset(Packet(p.header, p.stack[1:]).set(e.field, p.stack[0]) for p in ps if p.stack)
        if isinstance(e, AssignField):
            return frozenset(p.set(e.field, p.get(e.source)) for p in ps)
        if isinstance(e, TestFieldEq):
            return frozenset(p for p in ps if p.get(e.field) == p.get(e.other))
        if isinstance(e, TestFieldNeq):
            return frozenset(p for p in ps if p.get(e.field) != p.get(e.other))
        if isinstance(e, IfThenElse):
            yes = frozenset(p for p in ps if p.get(e.field) == e.value)
            return self.run(e.then, yes) | self.run(e.orelse, ps - yes)
        if isinstance(e, While):
            out = set()
            seen = set(ps)
            frontier = ps
            while frontier:
                looping = frozenset(p for p in frontier if p.get(e.field) == e.value)
                out |= frontier - looping
                frontier = self.run(e.body, looping) - seen
                seen |= frontier
            return frozenset(out)
        if isinstance(e, Dup):
            out = ps
            for f, _ in next(iter(ps)).header:
                out = frozenset(Packet(p.header, (p.get(f),) + p.stack) for p in out if len(p.stack) < self.bound)
            return out
        raise TypeError(f"not an expression: {e!r}")


def all_stacks(values: Iterable[int], max_len: int) -> Iterator[tuple]:
    """Stacks by length, then lexicographically."""
    values = sorted(values)
    for n in range(max_len + 1):
        yield from itertools.product(values, repeat=n)


def all_packets(universe: Universe, max_len: int) -> Iterator[Packet]:
    for header in universe.headers():
        for stack in all_stacks(universe.values, max_len):
            yield Packet.make(header, stack)


def default_slack(*exprs: Expr) -> int:
    return max((count_pushes(e) for e in exprs), default=0) + 1


def refute(e1: Expr, e2: Expr, universe: Universe, bound: int,
           slack: Optional[int] = None) -> Optional[tuple]:
    """First ``(input, output)`` related by exactly one of ``e1``, ``e2``.

    Inputs and outputs range over packets with stacks of length at most
    ``bound``.  Intermediate stacks may grow to ``bound + slack`` (default: one
    more than the larger syntactic push count), so that a program which
    needs headroom to push and then pop is not spuriously cut off at the
    observation boundary.  Returns ``None`` when no difference is visible.
    """
    if slack is None:
        slack = default_slack(e1, e2)
    depth = bound + slack
    for p in all_packets(universe, bound):
        out1 = {q for q in eval(e1, p, depth) if len(q.stack) <= bound}
        out2 = {q for q in eval(e2, p, depth) if len(q.stack) <= bound}
        diff = out1 ^ out2
        if diff:
            return p, min(diff, key=packet_order)
    return None


def relates(e: Expr, inp: Packet, out: Packet, bound: int) -> bool:
    return out in eval(e, inp, bound)
