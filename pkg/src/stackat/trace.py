"""Trace automata of full StacKAT programs.

A state is ``<alpha, rest>``: the current header (a tuple of values in field
order) and the remaining program as a flattened sequence of interned
subterms.  ``1`` factors are dropped from the sequence and the empty sequence
is ``1``, which keeps the set of reachable states finite: the star rule
``e* -> e ; e*`` only ever prepends subterms of the source program.
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

from .ast import (
    Assign, Expr, One, Plus, Pop, Push, Seq, Star, TestEq, TestNeq, Universe,
    Zero, fields_of, is_core, pretty, seq_all,
)
from .nfa import Nfa, pop, push

# node kinds in the intern table
_ZERO, _PLUS, _STAR, _EQ, _NEQ, _ASSIGN, _PUSH, _POP = range(8)


class ExprTable:
    """Structurally interned subterms of one program.

    ``flat(i)`` is the canonical continuation list for node ``i``.
    """

    def __init__(self, e: Expr, fields: Sequence[str]):
        if not is_core(e):
            raise TypeError("trace automata need core expressions; desugar first")
        self.fields = tuple(fields)
        self.field_index = {f: i for i, f in enumerate(self.fields)}
        self.nodes = []       # (kind, a, b)
        self.exprs = []       # original subterm, for labels
        self._ids = {}
        self.root = self._flatten(e)

    def _intern(self, key, expr) -> int:
        i = self._ids.get(key)
        if i is None:
            i = self._ids[key] = len(self.nodes)
            self.nodes.append(key)
            self.exprs.append(expr)
        return i

    def _flatten(self, e: Expr) -> tuple:
        # iterative over Seq spines so long generated sequences do not recurse deeply
        out = []
        stack = [e]
        while stack:
            node = stack.pop()
            if isinstance(node, Seq):
                stack.append(node.right)
                stack.append(node.left)
            elif isinstance(node, One):
                continue
            else:
                out.append(self._atom(node))
        return tuple(out)

    def _atom(self, e: Expr) -> int:
        if isinstance(e, Zero):
            return self._intern((_ZERO, None, None), e)
        if isinstance(e, Plus):
            return self._intern((_PLUS, self._flatten(e.left), self._flatten(e.right)), e)
        if isinstance(e, Star):
            return self._intern((_STAR, self._flatten(e.body), None), e)
        if isinstance(e, (TestEq, TestNeq, Assign)):
            kind = {TestEq: _EQ, TestNeq: _NEQ, Assign: _ASSIGN}[type(e)]
            if e.field not in self.field_index:
                raise ValueError(f"field {e.field!r} not in header field list")
            return self._intern((kind, self.field_index[e.field], e.value), e)
        if isinstance(e, Push):
            return self._intern((_PUSH, e.value, None), e)
        if isinstance(e, Pop):
            return self._intern((_POP, e.value, None), e)
        raise TypeError(f"unexpected node {e!r}")

    def rest_expr(self, rest: tuple) -> Expr:
        return seq_all(self.exprs[i] for i in rest)

    def successors(self, header: tuple, rest: tuple):
        """Fig.-style one-step moves: yields ``(letter or None, header, rest)``."""
        if not rest:
            return
        head, tail = rest[0], rest[1:]
        kind, a, b = self.nodes[head]
        if kind == _PLUS:
            yield None, header, a + tail
            yield None, header, b + tail
        elif kind == _STAR:
            yield None, header, tail
            yield None, header, a + (head,) + tail
        elif kind == _EQ:
            if header[a] == b:
                yield None, header, tail
        elif kind == _NEQ:
            if header[a] != b:
                yield None, header, tail
        elif kind == _ASSIGN:
            yield None, header[:a] + (b,) + header[a + 1:], tail
        elif kind == _PUSH:
            yield push(a), header, tail
        elif kind == _POP:
            yield pop(a), header, tail
        # _ZERO: stuck


class TraceAutomaton:
    """All states reachable from ``<alpha1, e>``; finals are chosen per output header."""

    def __init__(self, e: Expr, alpha1: tuple, fields: Sequence[str], table: Optional[ExprTable] = None,
                 labels: bool = False):
        self.table = table or ExprTable(e, fields)
        self.alpha1 = tuple(alpha1)
        states = [(self.alpha1, self.table.root)]
        index = {states[0]: 0}
        eps, edges = [], []
        i = 0
        while i < len(states):
            header, rest = states[i]
            for letter, h2, r2 in self.table.successors(header, rest):
                j = index.get((h2, r2))
                if j is None:
                    j = index[(h2, r2)] = len(states)
                    states.append((h2, r2))
                if letter is None:
                    if j != i:
                        eps.append((i, j))
                else:
                    edges.append((i, letter, j))
            i += 1
        self.states = states
        # labels are for DOT output only and cost more than the construction itself
        self.nfa = Nfa(len(states), eps, edges, initial=[0],
                       labels=[self._label(s) for s in states] if labels else None)

    def _label(self, state) -> str:
        header, rest = state
        h = ",".join(f"{f}={v}" for f, v in zip(self.table.fields, header))
        parts = []
        for i in rest:
            text = pretty(self.table.exprs[i])
            parts.append(f"({text})" if self.table.nodes[i][0] == _PLUS else text)
        return f"{h} | {' ; '.join(parts) or '1'}"

    def final_states(self, alpha2: tuple) -> list:
        alpha2 = tuple(alpha2)
        return [i for i, (h, r) in enumerate(self.states) if not r and h == alpha2]

    def output_headers(self) -> set:
        """Headers ``alpha2`` for which some final state is reachable."""
        return {h for h, r in self.states if not r}

    def for_output(self, alpha2: tuple) -> Nfa:
        return self.nfa.with_final(self.final_states(alpha2))


def _header_tuple(header, fields) -> tuple:
    if isinstance(header, Mapping):
        return tuple(header[f] for f in fields)
    return tuple(header)


def build_trace_nfa(e: Expr, alpha1, alpha2, universe: Universe,
                    fields: Optional[Sequence[str]] = None) -> Nfa:
    """Automaton whose language is the set of push/pop traces of ``e`` from ``alpha1`` to ``alpha2``.

    Headers are mappings (or tuples in ``fields`` order); ``fields`` defaults
    to the universe's field list.
    """
    fields = tuple(universe.fields if fields is None else fields)
    a1, a2 = _header_tuple(alpha1, fields), _header_tuple(alpha2, fields)
    return TraceAutomaton(e, a1, fields, labels=True).for_output(a2)


def reachable_states(e: Expr, alpha1, universe: Universe, fields: Optional[Sequence[str]] = None) -> int:
    fields = tuple(universe.fields if fields is None else fields)
    return len(TraceAutomaton(e, _header_tuple(alpha1, fields), fields).states)


def relevant_fields(*exprs: Expr) -> tuple:
    return tuple(sorted(set().union(*(fields_of(e) for e in exprs))))
