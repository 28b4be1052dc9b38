import pytest
from hypothesis import given, strategies as st

from stackat import kernels
from stackat import _kernels_py as py

try:
    cy = kernels.get("cython")
except ImportError:  # pragma: no cover
    cy = None

needs_cython = pytest.mark.skipif(cy is None, reason="compiled extension not built")


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    node = st.integers(0, n - 1)
    adj = [sorted(set(draw(st.lists(node, max_size=3)))) for _ in range(n)]
    edge = st.tuples(node, st.integers(0, 2), node)
    return n, adj, draw(st.lists(edge, max_size=2 * n)), draw(st.lists(edge, max_size=2 * n))


def _naive_closure(n, adj):
    reach = [{i} for i in range(n)]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in list(reach[i]):
                new = set(adj[j]) - reach[i]
                if new:
                    reach[i] |= new
                    changed = True
    return reach


def _naive_saturate(n, eps, pushes, pops):
    adj = [set(s) for s in eps]
    while True:
        reach = _naive_closure(n, adj)
        added = False
        for q1, v, q2 in pushes:
            for q3, w, q4 in pops:
                if v == w and q3 in reach[q2] and q4 not in reach[q1]:
                    adj[q1].add(q4)
                    added = True
        if not added:
            return [sorted(r) for r in reach]


def test_selection():
    assert kernels.IMPLEMENTATION in ("python", "cython")
    assert kernels.get("python") is py
    with pytest.raises(ValueError):
        kernels.get("fortran")


def test_saturate_example():
    # 0 -push 1-> 1 -eps-> 2 -pop 1-> 3
    got = py.pushpop_saturate(4, [[], [2], [], []], [(0, 1, 1)], [(2, 1, 3)])
    assert got == [[0, 3], [1, 2], [2], [3]]


@given(graphs())
def test_python_closure_naive(g):
    n, adj, _, _ = g
    assert py.transitive_closure(n, adj) == [sorted(r) for r in _naive_closure(n, adj)]


@given(graphs())
def test_python_saturate_naive(g):
    assert py.pushpop_saturate(*g) == _naive_saturate(*g)


@needs_cython
@given(graphs(max_n=80))
def test_cython_matches_python(g):
    n, adj, pushes, pops = g
    assert cy.transitive_closure(n, adj) == py.transitive_closure(n, adj)
    assert cy.pushpop_saturate(n, adj, pushes, pops) == py.pushpop_saturate(n, adj, pushes, pops)


@needs_cython
def test_cython_word_boundaries():
    # chains crossing 64-bit word edges
    for n in (63, 64, 65, 130):
        adj = [[i + 1] if i + 1 < n else [] for i in range(n)]
        assert cy.transitive_closure(n, adj) == py.transitive_closure(n, adj)
