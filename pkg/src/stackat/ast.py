"""Abstract syntax, parser, pretty-printer and desugaring for StacKAT.

Core constructors::

    Zero  One  Plus  Seq  Star  TestEq  TestNeq  Assign  Push  Pop

Concrete grammar (whitespace insignificant)::

    expr   := term ('+' term)*
    term   := factor (';' factor)*
    factor := atom '*'*
    atom   := '0' | '1' | field '=' nat | field '!=' nat | field ':=' nat
            | 'push' nat | 'pop' nat | '(' expr ')'

Sequencing is written with ``;``.  ``push`` and ``pop`` are reserved words and
cannot be used as field names.

The derived forms (``push f``, ``pop f``, ``f := g``, ``f = g``, ``f != g``,
``if``/``while`` and ``dup``) exist only as Python-level sugar nodes; call
:func:`desugar` to expand them into core constructors over a :class:`Universe`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Optional, Sequence


class StackatSyntaxError(ValueError):
    """Raised on malformed program text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class UniverseError(ValueError):
    """A field or value is used that the declared universe does not contain."""


# --------------------------------------------------------------------------
# Core expressions


class Expr:
    """Base class of all expression nodes.

    The operators ``+``, ``*`` (sequencing) and ``.star()`` build trees without
    simplification, which keeps generated programs syntactically predictable.
    """

    __slots__ = ()

    def __add__(self, other: "Expr") -> "Expr":
        return Plus(self, other)

    def __mul__(self, other: "Expr") -> "Expr":
        return Seq(self, other)

    def star(self) -> "Expr":
        return Star(self)

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True, repr=False)
class Zero(Expr):
    def __repr__(self):
        return "Zero()"


@dataclass(frozen=True, repr=False)
class One(Expr):
    def __repr__(self):
        return "One()"


@dataclass(frozen=True)
class Plus(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Seq(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Star(Expr):
    body: Expr


@dataclass(frozen=True)
class TestEq(Expr):
    field: str
    value: int


@dataclass(frozen=True)
class TestNeq(Expr):
    field: str
    value: int


@dataclass(frozen=True)
class Assign(Expr):
    field: str
    value: int


@dataclass(frozen=True)
class Push(Expr):
    value: int


@dataclass(frozen=True)
class Pop(Expr):
    value: int


CORE_TYPES = (Zero, One, Plus, Seq, Star, TestEq, TestNeq, Assign, Push, Pop)

# pytest would otherwise try to collect these as test classes
TestEq.__test__ = False
TestNeq.__test__ = False


# --------------------------------------------------------------------------
# Sugar


@dataclass(frozen=True)
class PushField(Expr):
    """``push f``: push the current value of field ``f``."""

    field: str


@dataclass(frozen=True)
class PopField(Expr):
    """``pop f``: pop the top of the stack into field ``f``."""

    field: str


@dataclass(frozen=True)
class AssignField(Expr):
    """``f := g``"""

    field: str
    source: str


@dataclass(frozen=True)
class TestFieldEq(Expr):
    """``f = g``"""

    field: str
    other: str


@dataclass(frozen=True)
class TestFieldNeq(Expr):
    """``f != g``"""

    field: str
    other: str


@dataclass(frozen=True)
class IfThenElse(Expr):
    """``if f = v then e1 else e2``"""

    field: str
    value: int
    then: Expr
    orelse: Expr


@dataclass(frozen=True)
class While(Expr):
    """``while f = v do e``"""

    field: str
    value: int
    body: Expr


@dataclass(frozen=True, repr=False)
class Dup(Expr):
    """NetKAT ``dup``, encoded by pushing every field in sorted name order."""

    def __repr__(self):
        return "Dup()"


TestFieldEq.__test__ = False
TestFieldNeq.__test__ = False

SUGAR_TYPES = (PushField, PopField, AssignField, TestFieldEq, TestFieldNeq, IfThenElse, While, Dup)


# --------------------------------------------------------------------------
# Universe


@dataclass(frozen=True)
class Universe:
    """The finite field set and value set a query is interpreted over.

    >>> Universe(("f",), (0, 1)).num_headers()
    2
    """

    fields: tuple = ()
    values: tuple = (0,)

    def __post_init__(self):
        object.__setattr__(self, "fields", tuple(dict.fromkeys(self.fields)))
        object.__setattr__(self, "values", tuple(sorted(set(self.values))))
        if not self.values:
            raise UniverseError("the value set must be non-empty")
        for v in self.values:
            if not isinstance(v, int) or v < 0:
                raise UniverseError(f"values must be natural numbers, got {v!r}")

    @classmethod
    def infer(cls, *exprs: Expr, fields: Iterable[str] = (), values: Iterable[int] = ()) -> "Universe":
        """The smallest universe covering every field and value in ``exprs``.

        Extra ``fields``/``values`` are merged in; an expression mentioning no
        value at all gets ``{0}`` so that headers remain total.
        """
        fs = list(fields)
        vs = set(values)
        for e in exprs:
            fs.extend(fields_of(e))
            vs |= values_of(e)
        return cls(tuple(sorted(set(fs))), tuple(sorted(vs)) or (0,))

    def union(self, other: "Universe") -> "Universe":
        return Universe(tuple(sorted(set(self.fields) | set(other.fields))),
                        tuple(sorted(set(self.values) | set(other.values))))

    def num_headers(self) -> int:
        return len(self.values) ** len(self.fields)

    def headers(self, fields: Optional[Sequence[str]] = None) -> Iterator[dict]:
        """All total headers over ``fields`` (default: all), lexicographically."""
        fs = self.fields if fields is None else tuple(fields)
        for combo in itertools.product(self.values, repeat=len(fs)):
            yield dict(zip(fs, combo))

    def check(self, e: Expr) -> None:
        """Raise :class:`UniverseError` if ``e`` leaves the universe."""
        for f in fields_of(e):
            if f not in self.fields:
                raise UniverseError(f"undeclared field {f!r}")
        for v in values_of(e):
            if v not in self.values:
                raise UniverseError(f"undeclared value {v}")


def _children(e: Expr) -> tuple:
    if isinstance(e, (Plus, Seq)):
        return (e.left, e.right)
    if isinstance(e, (Star, While)):
        return (e.body,)
    if isinstance(e, IfThenElse):
        return (e.then, e.orelse)
    return ()


def subterms(e: Expr) -> Iterator[Expr]:
    """Pre-order traversal, iterative so deep generated trees are fine."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(_children(node)))


def fields_of(e: Expr) -> set:
    out = set()
    for node in subterms(e):
        if isinstance(node, (TestEq, TestNeq, Assign, PushField, PopField, IfThenElse, While)):
            out.add(node.field)
        elif isinstance(node, AssignField):
            out.update((node.field, node.source))
        elif isinstance(node, (TestFieldEq, TestFieldNeq)):
            out.update((node.field, node.other))
    return out


def values_of(e: Expr) -> set:
    out = set()
    for node in subterms(e):
        if isinstance(node, (TestEq, TestNeq, Assign, Push, Pop, IfThenElse, While)):
            out.add(node.value)
    return out


def size(e: Expr) -> int:
    return sum(1 for _ in subterms(e))


def is_core(e: Expr) -> bool:
    return all(isinstance(node, CORE_TYPES) for node in subterms(e))


def count_pushes(e: Expr) -> int:
    """Syntactic number of push sites; ``dup`` counts as one."""
    return sum(isinstance(node, (Push, PushField, Dup)) for node in subterms(e))


# --------------------------------------------------------------------------
# Builders


def plus_all(es: Iterable[Expr]) -> Expr:
    """Left-nested sum; the empty sum is ``0``."""
    es = list(es)
    if not es:
        return Zero()
    return reduce(Plus, es)


def seq_all(es: Iterable[Expr]) -> Expr:
    """Left-nested product; the empty product is ``1``."""
    es = list(es)
    if not es:
        return One()
    return reduce(Seq, es)


def power(e: Expr, n: int) -> Expr:
    return seq_all([e] * n)


# --------------------------------------------------------------------------
# Desugaring


def neq_as_sum(field: str, value: int, universe: Universe) -> Expr:
    return plus_all(TestEq(field, w) for w in universe.values if w != value)


def desugar(e: Expr, universe: Universe, eliminate_neq: bool = False) -> Expr:
    """Expand every sugar node into core constructors.

    ``TestNeq`` survives unless ``eliminate_neq`` is set, in which case it
    becomes a sum of equality tests over the remaining values.
    """
    V = universe.values

    def go(e: Expr) -> Expr:
        if isinstance(e, Plus):
            return Plus(go(e.left), go(e.right))
        if isinstance(e, Seq):
            return Seq(go(e.left), go(e.right))
        if isinstance(e, Star):
            return Star(go(e.body))
        if isinstance(e, TestNeq):
            return neq_as_sum(e.field, e.value, universe) if eliminate_neq else e
        if isinstance(e, CORE_TYPES):
            return e
        if isinstance(e, PushField):
            return plus_all(Seq(TestEq(e.field, v), Push(v)) for v in V)
        if isinstance(e, PopField):
            return plus_all(Seq(Pop(v), Assign(e.field, v)) for v in V)
        if isinstance(e, AssignField):
            return plus_all(Seq(TestEq(e.source, v), Assign(e.field, v)) for v in V)
        if isinstance(e, TestFieldEq):
            return plus_all(Seq(TestEq(e.field, v), TestEq(e.other, v)) for v in V)
        if isinstance(e, TestFieldNeq):
            # product over v of (f != v + g != v)
            return seq_all(Plus(go(TestNeq(e.field, v)), go(TestNeq(e.other, v))) for v in V)
        if isinstance(e, IfThenElse):
            return Plus(Seq(TestEq(e.field, e.value), go(e.then)),
                        Seq(go(TestNeq(e.field, e.value)), go(e.orelse)))
        if isinstance(e, While):
            return Seq(Star(Seq(TestEq(e.field, e.value), go(e.body))), go(TestNeq(e.field, e.value)))
        if isinstance(e, Dup):
            return seq_all(go(PushField(f)) for f in sorted(universe.fields))
        raise TypeError(f"not an expression: {e!r}")

    return go(e)


# --------------------------------------------------------------------------
# Pretty-printing

_PREC_PLUS, _PREC_SEQ, _PREC_STAR = 0, 1, 2


def pretty(e: Expr) -> str:
    """Render a core expression in the concrete grammar.

    The output parses back to the same tree: sums and sequences associate to
    the left, so right-nested operands get parentheses.
    """

    def prec(e):
        if isinstance(e, Plus):
            return _PREC_PLUS
        if isinstance(e, Seq):
            return _PREC_SEQ
        return _PREC_STAR

    def wrap(e, need):
        s = go(e)
        return f"({s})" if prec(e) < need else s

    def go(e):
        if isinstance(e, Zero):
            return "0"
        if isinstance(e, One):
            return "1"
        if isinstance(e, Plus):
            return f"{wrap(e.left, _PREC_PLUS)} + {wrap(e.right, _PREC_SEQ)}"
        if isinstance(e, Seq):
            return f"{wrap(e.left, _PREC_SEQ)} ; {wrap(e.right, _PREC_STAR)}"
        if isinstance(e, Star):
            inner = go(e.body)
            if prec(e.body) < _PREC_STAR or isinstance(e.body, (TestEq, TestNeq, Assign, Push, Pop)):
                inner = f"({inner})"
            return inner + "*"
        if isinstance(e, TestEq):
            return f"{e.field}={e.value}"
        if isinstance(e, TestNeq):
            return f"{e.field}!={e.value}"
        if isinstance(e, Assign):
            return f"{e.field}:={e.value}"
        if isinstance(e, Push):
            return f"push {e.value}"
        if isinstance(e, Pop):
            return f"pop {e.value}"
        raise TypeError(f"cannot print sugar node {e!r}; desugar it first")

    return go(e)


# --------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<nat>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>!=|:=|[+;*()=])
    """,
    re.VERBOSE,
)

KEYWORDS = frozenset({"push", "pop"})


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise StackatSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rfind("\n") + 1
        else:
            tok_text = m.group()
            if kind == "ident" and tok_text in KEYWORDS:
                kind = tok_text
            tokens.append(Token(kind, tok_text, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise StackatSyntaxError(f"{msg}, found {found}", tok.line, tok.column)

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind and self.tok.text != kind:
            self.error(f"expected {what}")
        return self.advance()

    def nat(self) -> int:
        return int(self.expect("nat", "a natural number").text)

    def expr(self) -> Expr:
        e = self.term()
        while self.tok.text == "+":
            self.advance()
            e = Plus(e, self.term())
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.tok.text == ";":
            self.advance()
            e = Seq(e, self.factor())
        return e

    def factor(self) -> Expr:
        e = self.atom()
        while self.tok.text == "*":
            self.advance()
            e = Star(e)
        return e

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "nat":
            if tok.text not in ("0", "1"):
                self.error("expected an expression")
            self.advance()
            return Zero() if tok.text == "0" else One()
        if tok.kind in ("push", "pop"):
            self.advance()
            v = self.nat()
            return Push(v) if tok.kind == "push" else Pop(v)
        if tok.kind == "ident":
            self.advance()
            op = self.tok
            if op.text == "=":
                self.advance()
                return TestEq(tok.text, self.nat())
            if op.text == "!=":
                self.advance()
                return TestNeq(tok.text, self.nat())
            if op.text == ":=":
                self.advance()
                return Assign(tok.text, self.nat())
            self.error(f"expected '=', '!=' or ':=' after field {tok.text!r}")
        if tok.text == "(":
            self.advance()
            e = self.expr()
            self.expect(")", "')'")
            return e
        self.error("expected an expression")

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "eof":
            self.error("expected '+', ';', '*' or end of input")
        return e


def parse(text: str, universe: Optional[Universe] = None) -> Expr:
    """Parse program text.

    >>> parse("push 1 ; pop 1")
    Seq(left=Push(value=1), right=Pop(value=1))

    With a ``universe`` every field and value is checked for membership.
    """
    e = _Parser(text).parse()
    if universe is not None:
        universe.check(e)
    return e


_UNIVERSE_RE = re.compile(r"^#universe\b(?P<rest>.*)$")


def parse_universe_decl(line: str) -> Universe:
    """Parse ``#universe fields=f1,f2 values=0..3`` (values may also be a list)."""
    m = _UNIVERSE_RE.match(line.strip())
    if m is None:
        raise StackatSyntaxError("expected '#universe' declaration", 1, 1)
    fields, values = (), None
    for part in m.group("rest").split():
        key, _, val = part.partition("=")
        if key == "fields":
            fields = tuple(f for f in val.split(",") if f)
        elif key == "values":
            values = parse_values(val)
        else:
            raise StackatSyntaxError(f"unknown universe key {key!r}", 1, line.find(part) + 1)
    return Universe(fields, values if values is not None else (0,))


def parse_values(spec: str) -> tuple:
    """``"0..3"`` -> (0, 1, 2, 3); ``"1,4"`` -> (1, 4)."""
    out = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ".." in chunk:
            lo, hi = chunk.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(chunk))
    return tuple(out)


def parse_program(source: str) -> tuple:
    """Parse a program file: optional ``#universe`` first line, then an expression.

    Returns ``(expr, universe or None)``.  The expression is checked against a
    declared universe.
    """
    lines = source.split("\n")
    universe = None
    if lines and lines[0].lstrip().startswith("#universe"):
        universe = parse_universe_decl(lines[0])
        # keep line numbers in error messages aligned with the file
        lines[0] = ""
    return parse("\n".join(lines), universe), universe
