"""Test-side generators and brute-force language semantics.

Nothing in here goes through the automata code.
"""

import itertools
import random

from hypothesis import strategies as st

from stackat.ast import (
    Assign, One, Plus, Pop, Push, Seq, Star, TestEq, TestNeq, Zero, subterms,
)
from stackat.nfa import pop, push

# ---------------------------------------------------------------- generation


def random_expr(rng, size, leaves):
    """Random tree with exactly ``size`` nodes (leaves are thunks)."""
    if size <= 1:
        return rng.choice(leaves)()
    if size == 2 or rng.random() < 0.2:
        return Star(random_expr(rng, size - 1, leaves))
    left = rng.randint(1, size - 2)
    ctor = Plus if rng.random() < 0.45 else Seq
    return ctor(random_expr(rng, left, leaves), random_expr(rng, size - 1 - left, leaves))


def pushpop_leaves(rng, values):
    return [lambda: Push(rng.choice(values)), lambda: Pop(rng.choice(values)),
            lambda: Push(rng.choice(values)), lambda: Pop(rng.choice(values)), One, Zero]


def full_leaves(rng, field, values):
    return pushpop_leaves(rng, values) + [
        lambda: TestEq(field, rng.choice(values)),
        lambda: TestNeq(field, rng.choice(values)),
        lambda: Assign(field, rng.choice(values)),
    ]


def _replace_at(e, target, new):
    """Replace the subterm object ``target`` (by identity) with ``new``."""
    if e is target:
        return new
    if isinstance(e, (Plus, Seq)):
        return type(e)(_replace_at(e.left, target, new), _replace_at(e.right, target, new))
    if isinstance(e, Star):
        return Star(_replace_at(e.body, target, new))
    return e


def _equivalent_variant(rng, e, values):
    v, w = rng.choice(values), rng.choice(values)
    choices = [
        lambda: Plus(e, Zero()),
        lambda: Plus(Zero(), e),
        lambda: Seq(One(), e),
        lambda: Seq(e, One()),
        lambda: Plus(e, e),
        lambda: Seq(Seq(Push(v), Pop(v)), e),
        lambda: Seq(e, Seq(Push(v), Pop(v))),
        lambda: Seq(Plus(Seq(Pop(v), Push(v)), One()), e),
        lambda: Plus(e, Seq(Push(v), Pop(w)) if v != w else Zero()),
    ]
    if isinstance(e, Plus):
        choices.append(lambda: Plus(e.right, e.left))
    if isinstance(e, Star):
        choices += [lambda: Plus(One(), Seq(e.body, e)), lambda: Seq(e, e), lambda: Star(e)]
    if isinstance(e, Seq) and isinstance(e.right, Plus):
        a, b, c = e.left, e.right.left, e.right.right
        choices.append(lambda: Plus(Seq(a, b), Seq(a, c)))
    if isinstance(e, Seq) and isinstance(e.left, Seq):
        choices.append(lambda: Seq(e.left.left, Seq(e.left.right, e.right)))
    return rng.choice(choices)()


def rewrite_equivalent(rng, e, values, steps=2):
    """Apply semantics-preserving rewrites at random positions."""
    for _ in range(steps):
        target = rng.choice(list(subterms(e)))
        e = _replace_at(e, target, _equivalent_variant(rng, target, values))
    return e


def mutate(rng, e, leaves):
    """Swap one random subterm for a fresh leaf: usually, not always, inequivalent."""
    target = rng.choice(list(subterms(e)))
    return _replace_at(e, target, rng.choice(leaves)())


def random_pairs(seed, count, leaves_fn, values, max_size):
    """Deterministic mix of independent, rewritten and mutated pairs."""
    rng = random.Random(seed)
    leaves = leaves_fn(rng)
    for i in range(count):
        e = random_expr(rng, rng.randint(1, max_size), leaves)
        kind = i % 3
        if kind == 0:
            f = random_expr(rng, rng.randint(1, max_size), leaves)
        elif kind == 1:
            f = rewrite_equivalent(rng, e, values, steps=rng.randint(1, 2))
        else:
            f = mutate(rng, e, leaves)
        yield ("independent", "rewrite", "mutant")[kind], e, f


# hypothesis strategies -----------------------------------------------------


@st.composite
def exprs(draw, values=(1, 2), fields=(), max_size=7):
    size = draw(st.integers(1, max_size))
    leaf_kinds = ["push", "pop", "one", "zero"] + (["eq", "neq", "assign"] if fields else [])

    def build(n):
        if n <= 1:
            kind = draw(st.sampled_from(leaf_kinds))
            if kind == "one":
                return One()
            if kind == "zero":
                return Zero()
            v = draw(st.sampled_from(values))
            if kind == "push":
                return Push(v)
            if kind == "pop":
                return Pop(v)
            f = draw(st.sampled_from(fields))
            return {"eq": TestEq, "neq": TestNeq, "assign": Assign}[kind](f, v)
        if n == 2 or draw(st.integers(0, 4)) == 0:
            return Star(build(n - 1))
        left = draw(st.integers(1, n - 2))
        ctor = draw(st.sampled_from([Plus, Seq]))
        return ctor(build(left), build(n - 1 - left))

    return build(size)


# ------------------------------------------------ brute-force word semantics


def _concat(a, b, cap):
    return {x + y for x in a for y in b if len(x) + len(y) <= cap}


class TooManyWords(Exception):
    pass


def regex_words(e, cap, limit=None):
    """Words of length at most ``cap`` in ``e`` read as a regular expression over push/pop letters.

    Raises :class:`TooManyWords` as soon as an intermediate set exceeds ``limit``.
    """

    def check(ws):
        if limit is not None and len(ws) > limit:
            raise TooManyWords
        return ws

    def go(e):
        if isinstance(e, Zero):
            return set()
        if isinstance(e, One):
            return {()}
        if isinstance(e, Push):
            return {(push(e.value),)} if cap >= 1 else set()
        if isinstance(e, Pop):
            return {(pop(e.value),)} if cap >= 1 else set()
        if isinstance(e, Plus):
            return check(go(e.left) | go(e.right))
        if isinstance(e, Seq):
            return check(_concat(go(e.left), go(e.right), cap))
        if isinstance(e, Star):
            body = go(e.body)
            out = {()}
            frontier = {()}
            while frontier:
                frontier = _concat(frontier, body, cap) - out
                out |= frontier
                check(out)
            return out
        raise TypeError(e)

    return go(e)


def trace_words(e, fields, values, cap):
    """Language-level trace semantics: ``{(a1, a2): words}`` with words capped at ``cap``.

    Headers are tuples in ``fields`` order; defined by structural recursion
    with relational composition for sequencing.
    """
    headers = list(itertools.product(values, repeat=len(fields)))
    idx = {f: i for i, f in enumerate(fields)}

    def ident(words_for):
        return {(h, h): set(words_for(h)) for h in headers if words_for(h)}

    def compose(r1, r2):
        out = {}
        for (a, b), w1 in r1.items():
            for (b2, c), w2 in r2.items():
                if b == b2:
                    ws = _concat(w1, w2, cap)
                    if ws:
                        out.setdefault((a, c), set()).update(ws)
        return out

    def union(r1, r2):
        out = {k: set(v) for k, v in r1.items()}
        for k, v in r2.items():
            out.setdefault(k, set()).update(v)
        return out

    def go(e):
        if isinstance(e, Zero):
            return {}
        if isinstance(e, One):
            return ident(lambda h: {()})
        if isinstance(e, TestEq):
            return ident(lambda h: {()} if h[idx[e.field]] == e.value else set())
        if isinstance(e, TestNeq):
            return ident(lambda h: {()} if h[idx[e.field]] != e.value else set())
        if isinstance(e, Assign):
            i = idx[e.field]
            return {(h, h[:i] + (e.value,) + h[i + 1:]): {()} for h in headers}
        if isinstance(e, Push):
            return ident(lambda h: {(push(e.value),)})
        if isinstance(e, Pop):
            return ident(lambda h: {(pop(e.value),)})
        if isinstance(e, Plus):
            return union(go(e.left), go(e.right))
        if isinstance(e, Seq):
            return compose(go(e.left), go(e.right))
        if isinstance(e, Star):
            body = go(e.body)
            acc = ident(lambda h: {()})
            while True:
                nxt = union(acc, compose(acc, body))
                if nxt == acc:
                    return acc
                acc = nxt
        raise TypeError(e)

    return go(e)


def pushpop_words(words, cap):
    """Close a word set under deleting adjacent ``push v ; pop v`` (keeps originals)."""
    out = set(words)
    todo = list(out)
    while todo:
        w = todo.pop()
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if a.op == "push" and b.op == "pop" and a.value == b.value:
                r = w[:i] + w[i + 2:]
                if r not in out:
                    out.add(r)
                    todo.append(r)
    return {w for w in out if len(w) <= cap}


def all_words(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(sorted(alphabet), repeat=n)
