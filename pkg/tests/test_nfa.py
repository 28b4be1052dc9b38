from hypothesis import given, strategies as st

from stackat.nfa import (
    Nfa, StackLetter, accepted_words, distinguishing_word, empty_nfa, hopcroft_karp, intersect,
    language_equivalent, pop, push, shortest_word, universal_nfa, word_nfa,
)

from helpers import all_words


def naive_accepts(a, word):
    """Search over (state, position) using the raw edge lists."""
    eps = a.eps_edges()
    edges = a.letter_edges()
    seen = set()
    todo = [(q, 0) for q in a.initial]
    while todo:
        q, i = todo.pop()
        if (q, i) in seen:
            continue
        seen.add((q, i))
        if i == len(word) and q in a.final:
            return True
        todo.extend((t, i) for s, t in eps if s == q)
        if i < len(word):
            todo.extend((t, i + 1) for s, x, t in edges if s == q and x == word[i])
    return False


def naive_words(a, alphabet, max_len):
    return {w for w in all_words(alphabet, max_len) if naive_accepts(a, w)}


@st.composite
def nfas(draw, letters=("a", "b"), max_states=5):
    n = draw(st.integers(1, max_states))
    state = st.integers(0, n - 1)
    eps = draw(st.lists(st.tuples(state, state), max_size=n))
    edges = draw(st.lists(st.tuples(state, st.sampled_from(letters), state), max_size=2 * n + 2))
    initial = draw(st.sets(state, min_size=1, max_size=2))
    final = draw(st.sets(state, max_size=n))
    return Nfa(n, eps, edges, initial, final)


AB = ("a", "b")


def star_of(letter):
    return Nfa(1, (), [(0, letter, 0)], [0], [0])


class TestExamples:
    def test_reflexive(self):
        a = word_nfa([push(1), pop(2)])
        assert language_equivalent(a, a) == (True, None)

    def test_eps_vs_empty(self):
        assert language_equivalent(Nfa(1, initial=[0], final=[0]), empty_nfa()) == (False, ())

    def test_push3_closure_filter(self):
        # closure+filter of push3*.pop3* against push3* + pop3*, built by hand
        lhs = Nfa(3, [], [(0, push(3), 1), (1, push(3), 1), (0, pop(3), 2), (2, pop(3), 2)], [0], [0, 1, 2])
        rhs = Nfa(3, [(0, 1), (0, 2)], [(1, push(3), 1), (2, pop(3), 2)], [0], [1, 2])
        assert language_equivalent(lhs, rhs)[0]

    def test_shortest_distinguishing(self):
        a = star_of("a")
        b = Nfa(3, [], [(0, "a", 1), (1, "a", 2), (2, "a", 0)], [0], [0, 1])
        assert language_equivalent(a, b) == (False, ("a", "a"))

    def test_lexicographic_tie_break(self):
        a = Nfa(2, [], [(0, "a", 1), (0, "b", 1)], [0], [1])
        assert distinguishing_word(a, empty_nfa()) == ("a",)
        assert distinguishing_word(empty_nfa(), a) == ("a",)


class TestIntersect:
    def test_universal_identity(self):
        a = Nfa(2, [(0, 1)], [(0, "a", 0), (1, "b", 1)], [0], [1])
        assert language_equivalent(intersect(a, universal_nfa(AB)), a)[0]

    def test_push_pop_excluded(self):
        popstar_pushstar = Nfa(2, [], [(0, pop(3), 0), (0, push(3), 1), (1, push(3), 1)], [0], [0, 1])
        assert intersect(word_nfa([push(3), pop(3)]), popstar_pushstar).is_empty()

    def test_pop_push_kept(self):
        popstar_pushstar = Nfa(2, [], [(0, pop(3), 0), (0, push(3), 1), (1, push(3), 1)], [0], [0, 1])
        a = Nfa(2, [(0, 1)], [(0, pop(3), 0), (1, push(3), 1)], [0], [1])
        assert language_equivalent(intersect(a, popstar_pushstar), a)[0]

    @given(nfas(), nfas())
    def test_brute_force(self, a, b):
        assert naive_words(intersect(a, b), AB, 6) == naive_words(a, AB, 6) & naive_words(b, AB, 6)


class TestShortestWord:
    def test_empty(self):
        assert shortest_word(empty_nfa()) is None

    def test_star(self):
        assert shortest_word(star_of(push(3))) == ()

    def test_line(self):
        assert shortest_word(word_nfa([push(1), push(2)])) == (push(1), push(2))

    @given(nfas())
    def test_is_shortest(self, a):
        words = naive_words(a, AB, 6)
        w = shortest_word(a)
        if words:
            assert w == min(words, key=lambda x: (len(x), x))
        elif w is not None:
            assert len(w) > 6 and naive_accepts(a, w)


class TestSaturate:
    def test_no_eps(self):
        a = Nfa(3, [], [(0, "a", 1)], [0], [1]).saturate_eps()
        assert a.eps_edges() == [(0, 0), (1, 1), (2, 2)]

    def test_chain(self):
        a = Nfa(3, [(0, 1), (1, 2)], [], [0], [2]).saturate_eps()
        assert (0, 2) in a.eps_edges() and a.is_eps_saturated()

    def test_fixpoint(self):
        a = Nfa(3, [(0, 1), (1, 2), (2, 0)], [], [0], [2]).saturate_eps()
        assert a.saturate_eps().eps_edges() == a.eps_edges()

    @given(nfas())
    def test_language_unchanged(self, a):
        assert naive_words(a.saturate_eps(), AB, 5) == naive_words(a, AB, 5)


@given(nfas(), nfas())
def test_agrees_with_word_sets(a, b):
    same, word = language_equivalent(a, b)
    wa, wb = naive_words(a, AB, 8), naive_words(b, AB, 8)
    if same:
        assert wa == wb
    else:
        # the witness replays, and is a shortest difference when one exists below length 8
        assert naive_accepts(a, word) != naive_accepts(b, word)
        if wa != wb:
            assert len(word) == min(len(w) for w in wa ^ wb)


@given(nfas(), nfas(), nfas())
def test_equivalence_relation(a, b, c):
    assert hopcroft_karp(a, a)
    assert hopcroft_karp(a, b) == hopcroft_karp(b, a)
    if hopcroft_karp(a, b) and hopcroft_karp(b, c):
        assert hopcroft_karp(a, c)


@given(nfas())
def test_trim_preserves_language(a):
    assert naive_words(a.trim(), AB, 5) == naive_words(a, AB, 5)


@given(nfas())
def test_accepted_words_matches_naive(a):
    assert accepted_words(a, 6, AB) == naive_words(a, AB, 6)


def test_dot():
    a = Nfa(2, [(0, 1)], [(1, push(3), 1)], [0], [1], labels=["s", 'q"1'])
    dot = a.to_dot("demo")
    assert dot.startswith('digraph "demo" {')
    assert 'q1 [shape=doublecircle, label="q\\"1"];' in dot
    assert "q0 [shape=circle" in dot
    assert "init0 -> q0;" in dot
    assert 'q0 -> q1 [label="ε"];' in dot
    assert 'q1 -> q1 [label="push 3"];' in dot


def test_stack_letter_order_and_text():
    assert str(push(2)) == "push 2" and str(pop(0)) == "pop 0"
    assert isinstance(push(1), StackLetter)
    assert sorted([push(1), pop(1)]) == [pop(1), push(1)]
