# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled closure kernels over packed uint64 bit matrices.

Same entry points and results as ``_kernels_py``.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport calloc, free


cdef inline void _set(uint64_t* row, Py_ssize_t j) nogil:
    row[j >> 6] |= (<uint64_t>1) << (j & 63)


cdef inline bint _get(uint64_t* row, Py_ssize_t j) nogil:
    return (row[j >> 6] >> (j & 63)) & 1


cdef void _warshall(uint64_t* m, Py_ssize_t n, Py_ssize_t w) nogil:
    cdef Py_ssize_t i, k, x
    cdef uint64_t* rk
    cdef uint64_t* ri
    for k in range(n):
        rk = m + k * w
        for i in range(n):
            ri = m + i * w
            if _get(ri, k):
                for x in range(w):
                    ri[x] |= rk[x]


cdef list _rows(uint64_t* m, Py_ssize_t n, Py_ssize_t w):
    cdef Py_ssize_t i, x, b
    cdef uint64_t word
    cdef list out = []
    cdef list row
    for i in range(n):
        row = []
        for x in range(w):
            word = m[i * w + x]
            b = 0
            while word:
                if word & 1:
                    row.append(x * 64 + b)
                word >>= 1
                b += 1
        out.append(row)
    return out


cdef uint64_t* _init(Py_ssize_t n, Py_ssize_t w, adj) except NULL:
    cdef uint64_t* m = <uint64_t*>calloc(max(n * w, 1), sizeof(uint64_t))
    cdef Py_ssize_t i, j
    if m == NULL:
        raise MemoryError()
    for i in range(n):
        _set(m + i * w, i)
        for j in adj[i]:
            _set(m + i * w, j)
    return m


def transitive_closure(Py_ssize_t n, adj):
    """Reflexive-transitive closure of the graph ``adj`` on ``n`` nodes."""
    cdef Py_ssize_t w = (n + 63) // 64
    cdef uint64_t* m = _init(n, w, adj)
    try:
        _warshall(m, n, w)
        return _rows(m, n, w)
    finally:
        free(m)


def pushpop_saturate(Py_ssize_t n, eps_adj, push_edges, pop_edges):
    """Saturate epsilon edges under matching push/pop pairs; see ``_kernels_py``."""
    cdef Py_ssize_t w = (n + 63) // 64
    cdef uint64_t* reach = _init(n, w, eps_adj)
    cdef uint64_t* popsucc = NULL
    cdef uint64_t* targets = NULL
    cdef Py_ssize_t nv, npush, e, q1, q2, q3, q4, p, x, vi
    cdef bint changed
    cdef uint64_t* rq1
    cdef uint64_t* rq4
    cdef uint64_t* rp
    cdef uint64_t* src
    cdef Py_ssize_t* pq1 = NULL
    cdef Py_ssize_t* pq2 = NULL
    cdef Py_ssize_t* pv = NULL

    try:
        _warshall(reach, n, w)
        vindex = {}
        for _, v, _ in pop_edges:
            if v not in vindex:
                vindex[v] = len(vindex)
        nv = len(vindex)
        popsucc = <uint64_t*>calloc(max(nv * n * w, 1), sizeof(uint64_t))
        targets = <uint64_t*>calloc(max(w, 1), sizeof(uint64_t))
        if popsucc == NULL or targets == NULL:
            raise MemoryError()
        for s, v, t in pop_edges:
            _set(popsucc + (<Py_ssize_t>vindex[v] * n + <Py_ssize_t>s) * w, t)

        kept = [(a, vindex[v], b) for a, v, b in push_edges if v in vindex]
        npush = len(kept)
        pq1 = <Py_ssize_t*>calloc(max(npush, 1), sizeof(Py_ssize_t))
        pq2 = <Py_ssize_t*>calloc(max(npush, 1), sizeof(Py_ssize_t))
        pv = <Py_ssize_t*>calloc(max(npush, 1), sizeof(Py_ssize_t))
        if pq1 == NULL or pq2 == NULL or pv == NULL:
            raise MemoryError()
        for e in range(npush):
            pq1[e], pv[e], pq2[e] = kept[e]

        with nogil:
            changed = True
            while changed:
                changed = False
                for e in range(npush):
                    q1 = pq1[e]
                    q2 = pq2[e]
                    vi = pv[e]
                    for x in range(w):
                        targets[x] = 0
                    for q3 in range(n):
                        if _get(reach + q2 * w, q3):
                            src = popsucc + (vi * n + q3) * w
                            for x in range(w):
                                targets[x] |= src[x]
                    rq1 = reach + q1 * w
                    for q4 in range(n):
                        if not _get(targets, q4) or _get(rq1, q4):
                            continue
                        changed = True
                        rq4 = reach + q4 * w
                        for p in range(n):
                            rp = reach + p * w
                            if _get(rp, q1):
                                for x in range(w):
                                    rp[x] |= rq4[x]
        return _rows(reach, n, w)
    finally:
        free(reach)
        free(popsucc)
        free(targets)
        free(pq1)
        free(pq2)
        free(pv)
