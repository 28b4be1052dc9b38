"""Pure-Python closure kernels.

Both functions take and return adjacency as lists of sorted state lists; the
relation returned is reflexive and transitive.  ``_kernels.pyx`` implements the
same two entry points over packed bit matrices.
"""


def _bits(x):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _close(n, reach):
    # Warshall over int bitsets
    for k in range(n):
        bk = 1 << k
        rk = reach[k]
        for i in range(n):
            if reach[i] & bk:
                reach[i] |= rk
    return reach


def _to_lists(reach):
    return [list(_bits(r)) for r in reach]


def transitive_closure(n, adj):
    """Reflexive-transitive closure of the graph ``adj`` on ``n`` nodes."""
    reach = [1 << i for i in range(n)]
    for i, succ in enumerate(adj):
        for j in succ:
            reach[i] |= 1 << j
    return _to_lists(_close(n, reach))


def pushpop_saturate(n, eps_adj, push_edges, pop_edges):
    """Saturate epsilon edges under ``q1 -push v-> q2 -eps*-> q3 -pop v-> q4``.

    ``push_edges`` and ``pop_edges`` are ``(src, value, dst)`` triples.  Every
    match adds ``q1 -eps-> q4``; the epsilon relation is kept
    reflexive-transitive throughout, so paths with intervening epsilon steps
    are caught by a single lookup.
    """
    reach = [1 << i for i in range(n)]
    for i, succ in enumerate(eps_adj):
        for j in succ:
            reach[i] |= 1 << j
    _close(n, reach)

    popsucc = {}
    for src, v, dst in pop_edges:
        row = popsucc.setdefault(v, [0] * n)
        row[src] |= 1 << dst
    pushes = [(q1, popsucc[v], q2) for q1, v, q2 in push_edges if v in popsucc]

    changed = True
    while changed:
        changed = False
        for q1, row, q2 in pushes:
            targets = 0
            for q3 in _bits(reach[q2]):
                targets |= row[q3]
            new = targets & ~reach[q1]
            if not new:
                continue
            changed = True
            for q4 in _bits(new):
                if reach[q1] >> q4 & 1:
                    continue
                add = reach[q4]
                bq1 = 1 << q1
                for p in range(n):
                    if reach[p] & bq1:
                        reach[p] |= add
    return _to_lists(reach)
