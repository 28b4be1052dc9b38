"""Epsilon-NFAs over an arbitrary hashable, orderable letter type.

States are dense integers ``0..n-1``.  An :class:`Nfa` is immutable once
built; every pass in the pipeline builds a new automaton from an old one.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable, NamedTuple, Optional, Sequence

from . import kernels


class StackLetter(NamedTuple):
    """``push v`` or ``pop v``.  Orders pops before pushes, then by value."""

    op: str
    value: int

    def __str__(self):
        return f"{self.op} {self.value}"


def push(v: int) -> StackLetter:
    return StackLetter("push", v)


def pop(v: int) -> StackLetter:
    return StackLetter("pop", v)


class Nfa:
    """An epsilon-NFA.

    Parameters
    ----------
    n:
        Number of states.
    eps_edges:
        ``(src, dst)`` pairs.
    letter_edges:
        ``(src, letter, dst)`` triples.
    initial, final:
        State sets.
    labels:
        Optional per-state labels, used only for DOT output.
    """

    __slots__ = ("n", "eps", "delta", "initial", "final", "labels", "_closure")

    def __init__(self, n: int, eps_edges: Iterable = (), letter_edges: Iterable = (),
                 initial: Iterable[int] = (), final: Iterable[int] = (),
                 labels: Optional[Sequence[str]] = None):
        eps = [set() for _ in range(n)]
        delta = [{} for _ in range(n)]
        for s, t in eps_edges:
            eps[s].add(t)
        for s, a, t in letter_edges:
            delta[s].setdefault(a, set()).add(t)
        self.n = n
        self.eps = tuple(tuple(sorted(x)) for x in eps)
        self.delta = tuple({a: tuple(sorted(ts)) for a, ts in d.items()} for d in delta)
        self.initial = frozenset(initial)
        self.final = frozenset(final)
        self.labels = tuple(labels) if labels is not None else None
        self._closure = None
        for q in self.initial | self.final:
            if not 0 <= q < n:
                raise ValueError(f"state {q} out of range")

    @classmethod
    def _raw(cls, n, eps, delta, initial, final, labels=None) -> "Nfa":
        # trusted constructor for already-normalised adjacency
        a = cls.__new__(cls)
        a.n, a.eps, a.delta = n, eps, delta
        a.initial, a.final = frozenset(initial), frozenset(final)
        a.labels = labels
        a._closure = None
        return a

    def __repr__(self):
        return (f"Nfa(n={self.n}, eps={sum(map(len, self.eps))}, "
                f"edges={sum(len(ts) for d in self.delta for ts in d.values())}, "
                f"initial={sorted(self.initial)}, final={sorted(self.final)})")

    # ------------------------------------------------------------------ views

    def eps_edges(self):
        return [(s, t) for s in range(self.n) for t in self.eps[s]]

    def letter_edges(self):
        return [(s, a, t) for s in range(self.n) for a, ts in self.delta[s].items() for t in ts]

    def alphabet(self) -> list:
        return sorted({a for d in self.delta for a in d})

    def with_final(self, final: Iterable[int]) -> "Nfa":
        a = Nfa._raw(self.n, self.eps, self.delta, self.initial, final, self.labels)
        a._closure = self._closure
        return a

    # ---------------------------------------------------------------- closure

    def closure(self) -> tuple:
        """Per-state epsilon closure, reflexive-transitive."""
        if self._closure is None:
            self._closure = tuple(frozenset(c) for c in kernels.transitive_closure(self.n, self.eps))
        return self._closure

    def close_set(self, states: Iterable[int]) -> frozenset:
        cl = self.closure()
        out = set()
        for q in states:
            out |= cl[q]
        return frozenset(out)

    def saturate_eps(self) -> "Nfa":
        """Same language; the epsilon relation becomes reflexive-transitive."""
        cl = self.closure()
        a = Nfa._raw(self.n, tuple(tuple(sorted(c)) for c in cl), self.delta,
                     self.initial, self.final, self.labels)
        a._closure = cl
        return a

    def is_eps_saturated(self) -> bool:
        return all(set(self.eps[q]) == self.closure()[q] for q in range(self.n))

    # -------------------------------------------------------------- language

    def start(self) -> frozenset:
        return self.close_set(self.initial)

    def step(self, states: frozenset, letter) -> frozenset:
        cl = self.closure()
        out = set()
        for q in states:
            for t in self.delta[q].get(letter, ()):
                out |= cl[t]
        return frozenset(out)

    def accepts(self, word: Iterable) -> bool:
        cur = self.start()
        for a in word:
            cur = self.step(cur, a)
            if not cur:
                return False
        return bool(cur & self.final)

    def is_empty(self) -> bool:
        return shortest_word(self) is None

    # ----------------------------------------------------------- structural

    def useful_states(self) -> set:
        """States on some path from an initial to a final state."""
        fwd = _reach(self.initial, lambda q: _succ(self, q))
        pred = [set() for _ in range(self.n)]
        for s in range(self.n):
            for t in _succ(self, s):
                pred[t].add(s)
        bwd = _reach(self.final, lambda q: pred[q])
        return fwd & bwd

    def trim(self) -> "Nfa":
        """Restrict to useful states, renumbering them in increasing order."""
        keep = sorted(self.useful_states())
        if len(keep) == self.n:
            return self
        index = {q: i for i, q in enumerate(keep)}
        eps = tuple(tuple(index[t] for t in self.eps[q] if t in index) for q in keep)
        delta = []
        for q in keep:
            d = {}
            for a, ts in self.delta[q].items():
                ts2 = tuple(index[t] for t in ts if t in index)
                if ts2:
                    d[a] = ts2
            delta.append(d)
        labels = tuple(self.labels[q] for q in keep) if self.labels is not None else None
        return Nfa._raw(len(keep), eps, tuple(delta),
                        [index[q] for q in self.initial if q in index],
                        [index[q] for q in self.final if q in index], labels)

    def to_dot(self, name: str = "nfa", letter_label: Callable = str) -> str:
        """Graphviz source: epsilon edges labelled "ε", finals double-circled."""
        lines = [f'digraph "{name}" {{', "  rankdir=LR;", '  node [shape=circle];']
        for q in range(self.n):
            shape = "doublecircle" if q in self.final else "circle"
            label = self.labels[q] if self.labels is not None else str(q)
            label = label.replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'  q{q} [shape={shape}, label="{label}"];')
        for q in sorted(self.initial):
            lines.append(f'  init{q} [shape=point];')
            lines.append(f"  init{q} -> q{q};")
        for s, t in self.eps_edges():
            lines.append(f'  q{s} -> q{t} [label="ε"];')
        for s, a, t in self.letter_edges():
            lines.append(f'  q{s} -> q{t} [label="{letter_label(a)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _succ(a: Nfa, q: int):
    yield from a.eps[q]
    for ts in a.delta[q].values():
        yield from ts


def _reach(start, succ) -> set:
    seen = set(start)
    todo = list(start)
    while todo:
        q = todo.pop()
        for t in succ(q):
            if t not in seen:
                seen.add(t)
                todo.append(t)
    return seen


def empty_nfa() -> Nfa:
    return Nfa(1, initial=[0])


def universal_nfa(alphabet: Iterable) -> Nfa:
    return Nfa(1, letter_edges=[(0, a, 0) for a in alphabet], initial=[0], final=[0])


def word_nfa(word: Sequence) -> Nfa:
    """Line automaton accepting exactly ``word``."""
    n = len(word) + 1
    return Nfa(n, letter_edges=[(i, a, i + 1) for i, a in enumerate(word)], initial=[0], final=[n - 1])


# ------------------------------------------------------------------ algorithms


def intersect(a: Nfa, b: Nfa) -> Nfa:
    """Product automaton; an epsilon step of either factor moves that factor alone."""
    index = {}
    order = []
    eps, edges = [], []

    def state(p):
        i = index.get(p)
        if i is None:
            i = index[p] = len(order)
            order.append(p)
        return i

    for p in sorted((x, y) for x in a.initial for y in b.initial):
        state(p)
    i = 0
    while i < len(order):
        x, y = order[i]
        for x2 in a.eps[x]:
            eps.append((i, state((x2, y))))
        for y2 in b.eps[y]:
            eps.append((i, state((x, y2))))
        for letter, xs in a.delta[x].items():
            ys = b.delta[y].get(letter)
            if ys:
                for x2 in xs:
                    for y2 in ys:
                        edges.append((i, letter, state((x2, y2))))
        i += 1
    init = [index[(x, y)] for x in a.initial for y in b.initial]
    final = [j for j, (x, y) in enumerate(order) if x in a.final and y in b.final]
    return Nfa(len(order), eps, edges, init, final, labels=[f"{x},{y}" for x, y in order])


def shortest_word(a: Nfa) -> Optional[tuple]:
    """A shortest accepted word, lexicographically least among those; ``None`` if empty."""
    alphabet = a.alphabet()
    start = a.start()
    parent = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur & a.final:
            return _spell(parent, cur)
        for letter in alphabet:
            nxt = a.step(cur, letter)
            if nxt and nxt not in parent:
                parent[nxt] = (cur, letter)
                queue.append(nxt)
    return None


def _spell(parent, node) -> tuple:
    word = []
    while parent[node] is not None:
        node, letter = parent[node]
        word.append(letter)
    return tuple(reversed(word))


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            root = self.find(p)
            self.parent[x] = root
            return root
        return p

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[rx] = ry
        return True


def hopcroft_karp(a: Nfa, b: Nfa) -> bool:
    """Language equality via on-the-fly determinisation and union-find."""
    alphabet = sorted(set(a.alphabet()) | set(b.alphabet()))
    x0, y0 = ("a", a.start()), ("b", b.start())
    uf = _UnionFind()
    uf.union(x0, y0)
    todo = [(x0[1], y0[1])]
    while todo:
        x, y = todo.pop()
        if bool(x & a.final) != bool(y & b.final):
            return False
        for letter in alphabet:
            x2, y2 = a.step(x, letter), b.step(y, letter)
            if uf.union(("a", x2), ("b", y2)):
                todo.append((x2, y2))
    return True


def distinguishing_word(a: Nfa, b: Nfa) -> Optional[tuple]:
    """Shortest word accepted by exactly one of ``a``, ``b`` (lexicographic tie-break)."""
    alphabet = sorted(set(a.alphabet()) | set(b.alphabet()))
    start = (a.start(), b.start())
    parent = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        x, y = cur
        if bool(x & a.final) != bool(y & b.final):
            return _spell(parent, cur)
        for letter in alphabet:
            nxt = (a.step(x, letter), b.step(y, letter))
            if (nxt[0] or nxt[1]) and nxt not in parent:
                parent[nxt] = (cur, letter)
                queue.append(nxt)
    return None


def language_equivalent(a: Nfa, b: Nfa) -> tuple:
    """``(True, None)`` if ``L(a) = L(b)``, else ``(False, shortest distinguishing word)``."""
    if hopcroft_karp(a, b):
        return True, None
    word = distinguishing_word(a, b)
    assert word is not None
    return False, word


def accepted_words(a: Nfa, max_len: int, alphabet: Optional[Iterable] = None) -> set:
    """All accepted words of length at most ``max_len`` (brute force, for testing)."""
    alphabet = sorted(alphabet) if alphabet is not None else a.alphabet()
    out = set()
    layer = {(): a.start()}
    for _ in range(max_len + 1):
        nxt = {}
        for w, cur in layer.items():
            if cur & a.final:
                out.add(w)
            for letter in alphabet:
                s = a.step(cur, letter)
                if s:
                    nxt[w + (letter,)] = s
        layer = nxt
    return out
