"""Canonicalisation of trace automata.

The pipeline is::

    pushpop_close  ->  zip_automaton  ->  poppush_close

giving an automaton over :class:`ZipLetter` whose language is a complete
invariant of the program's stack behaviour.  :func:`filter_popstar_pushstar`
is kept for inspection; zipping already discards every word that is not of
the form pops-then-pushes.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Optional, Sequence

from . import kernels
from .nfa import Nfa, StackLetter, intersect, pop, push


class _Done:
    """The ``done`` marker of a zipped letter; orders after every value."""

    __slots__ = ()

    def __repr__(self):
        return "DONE"

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __reduce__(self):
        return "DONE"


DONE = _Done()


class ZipLetter(NamedTuple):
    """A zipped letter ``(pop v, push w)``; either side may be :data:`DONE`."""

    pop: object
    push: object

    @property
    def kind(self) -> str:
        if self.pop is DONE:
            return "push_only"
        if self.push is DONE:
            return "pop_only"
        return "pair"

    def __str__(self):
        left = "done" if self.pop is DONE else f"pop {self.pop}"
        right = "done" if self.push is DONE else f"push {self.push}"
        return f"({left}, {right})"


def pair(v: int, w: int) -> ZipLetter:
    return ZipLetter(v, w)


def pop_only(v: int) -> ZipLetter:
    return ZipLetter(v, DONE)


def push_only(v: int) -> ZipLetter:
    return ZipLetter(DONE, v)


# ------------------------------------------------------------------ passes


def pushpop_close(a: Nfa) -> Nfa:
    """Add ``q1 -eps-> q4`` for every ``q1 -push v-> q2 -eps*-> q3 -pop v-> q4``, to a fixpoint.

    The epsilon relation of the result is reflexive and transitive.
    """
    push_edges, pop_edges = [], []
    for s, letter, t in a.letter_edges():
        (push_edges if letter.op == "push" else pop_edges).append((s, letter.value, t))
    eps = kernels.pushpop_saturate(a.n, a.eps, push_edges, pop_edges)
    out = Nfa._raw(a.n, tuple(tuple(x) for x in eps), a.delta, a.initial, a.final, a.labels)
    out._closure = tuple(frozenset(x) for x in eps)
    return out


def popstar_pushstar_nfa(values: Iterable[int]) -> Nfa:
    """Two states: loop on pops, then loop on pushes."""
    values = sorted(set(values))
    edges = [(0, pop(v), 0) for v in values]
    edges += [(0, push(v), 1) for v in values] + [(1, push(v), 1) for v in values]
    return Nfa(2, (), edges, initial=[0], final=[0, 1])


def filter_popstar_pushstar(a: Nfa, values: Optional[Iterable[int]] = None) -> Nfa:
    """Intersect with ``(pop V)* (push V)*``; ``V`` defaults to the values on ``a``'s edges."""
    if values is None:
        values = {letter.value for letter in a.alphabet()}
    return intersect(a, popstar_pushstar_nfa(values))


def zip_automaton(a: Nfa) -> Nfa:
    """Read ``a`` from the pop/push border outwards.

    State ``(x, y)`` has walked backwards from the border to ``x`` over pops
    and forwards to ``y`` over pushes; either side becomes :data:`DONE` once it
    has reached an initial (left) or final (right) state.
    """
    a = a.trim().saturate_eps()
    n = a.n
    rev_pop = [[] for _ in range(n)]
    fwd_push = [[] for _ in range(n)]
    rev_eps = [[] for _ in range(n)]
    for s, letter, t in a.letter_edges():
        if letter.op == "pop":
            rev_pop[t].append((letter.value, s))
        else:
            fwd_push[s].append((letter.value, t))
    for s, t in a.eps_edges():
        if s != t:
            rev_eps[t].append(s)
    eps_fwd = [[t for t in a.eps[q] if t != q] for q in range(n)]
    initial, final = a.initial, a.final

    D = DONE
    states = [(q, q) for q in range(n)]
    index = {s: i for i, s in enumerate(states)}
    eps, edges = [], []

    def target(s):
        j = index.get(s)
        if j is None:
            j = index[s] = len(states)
            states.append(s)
        return j

    i = 0
    while i < len(states):
        x, y = states[i]
        if x is not D and y is not D:
            for v, x0 in rev_pop[x]:
                for w, y2 in fwd_push[y]:
                    edges.append((i, ZipLetter(v, w), target((x0, y2))))
        elif x is D and y is not D:
            for w, y2 in fwd_push[y]:
                edges.append((i, ZipLetter(D, w), target((D, y2))))
        elif x is not D and y is D:
            for v, x0 in rev_pop[x]:
                edges.append((i, ZipLetter(v, D), target((x0, D))))
        if x is not D:
            if x in initial:
                eps.append((i, target((D, y))))
            for x0 in rev_eps[x]:
                eps.append((i, target((x0, y))))
        if y is not D:
            if y in final:
                eps.append((i, target((x, D))))
            for y2 in eps_fwd[y]:
                eps.append((i, target((x, y2))))
        i += 1

    done = index.get((D, D))
    labels = None if a.labels is None else [f"({_side(x, a)}, {_side(y, a)})" for x, y in states]
    z = Nfa(len(states), eps, edges, initial=range(n), final=[] if done is None else [done], labels=labels)
    return z.trim()


def _side(q: int, a: Nfa) -> str:
    if q is DONE:
        return "done"
    return a.labels[q]


def poppush_close(z: Nfa, values: Iterable[int]) -> Nfa:
    """Prefix the language with ``{(pop v, push v) | v in values}*``.

    A fresh state carries the ``(pop v, push v)`` loops and is the only
    initial state; it reaches the old initial states by epsilon.
    """
    s0 = z.n
    eps = z.eps_edges() + [(s0, q) for q in sorted(z.initial)]
    edges = z.letter_edges() + [(s0, ZipLetter(v, v), s0) for v in sorted(set(values))]
    labels = None if z.labels is None else list(z.labels) + ["A*"]
    return Nfa(z.n + 1, eps, edges, initial=[s0], final=z.final, labels=labels)


def canonicalize(a: Nfa, values: Iterable[int]) -> Nfa:
    return poppush_close(zip_automaton(pushpop_close(a)), values)


# --------------------------------------------------------- word-level zip


def zip_word(word: Sequence[StackLetter]) -> Optional[tuple]:
    """Zip a pops-then-pushes word from the middle outwards; ``None`` otherwise."""
    k = 0
    while k < len(word) and word[k].op == "pop":
        k += 1
    pops = [letter.value for letter in word[:k]]
    pushes = [letter.value for letter in word[k:]]
    if any(letter.op != "push" for letter in word[k:]):
        return None
    pops.reverse()
    out = []
    for i in range(max(len(pops), len(pushes))):
        v = pops[i] if i < len(pops) else DONE
        w = pushes[i] if i < len(pushes) else DONE
        out.append(ZipLetter(v, w))
    return tuple(out)


class MalformedZipWord(ValueError):
    pass


def split_zip_word(zword: Sequence[ZipLetter]) -> tuple:
    """``(pops, pushes)`` with both lists in zip order (innermost first)."""
    pops, pushes = [], []
    left_done = right_done = False
    for i, z in enumerate(zword):
        if z.pop is DONE and z.push is DONE:
            raise MalformedZipWord(f"letter {i} is (done, done)")
        if z.pop is DONE:
            left_done = True
        elif left_done:
            raise MalformedZipWord(f"pop at position {i} after the pop side finished")
        else:
            pops.append(z.pop)
        if z.push is DONE:
            right_done = True
        elif right_done:
            raise MalformedZipWord(f"push at position {i} after the push side finished")
        else:
            pushes.append(z.push)
    return pops, pushes


def unzip_word(zword: Sequence[ZipLetter]) -> tuple:
    """Inverse of :func:`zip_word`."""
    pops, pushes = split_zip_word(zword)
    return tuple(pop(v) for v in reversed(pops)) + tuple(push(w) for w in pushes)
