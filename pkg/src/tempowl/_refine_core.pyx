# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled refinement kernel.

Same contract as tempowl._refine_py.refine_rounds; that module is the
readable reference. Neighbour (colour, relation) pairs are packed into one
unsigned 64-bit key each — colour in the high half, relation id in the low
half, so sorting the packed keys equals sorting the pairs — and each node's
signature is interned as raw little-endian bytes.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdlib cimport free, malloc, qsort
from libc.string cimport memcpy


cdef int _cmp_u64(const void* a, const void* b) noexcept nogil:
    cdef unsigned long long x = (<const unsigned long long*>a)[0]
    cdef unsigned long long y = (<const unsigned long long*>b)[0]
    if x < y:
        return -1
    if x > y:
        return 1
    return 0


def refine_rounds(int n, indptr, srcs, rels, init, int max_layers):
    cdef Py_ssize_t m = len(srcs)
    cdef long long* c_indptr = <long long*>malloc((n + 1) * sizeof(long long))
    cdef long long* c_srcs = <long long*>malloc(max(m, 1) * sizeof(long long))
    cdef long long* c_rels = <long long*>malloc(max(m, 1) * sizeof(long long))
    cdef unsigned long long* cur = <unsigned long long*>malloc(max(n, 1) * sizeof(unsigned long long))
    cdef unsigned long long* nxt = <unsigned long long*>malloc(max(n, 1) * sizeof(unsigned long long))
    cdef unsigned long long* scratch = NULL
    cdef unsigned long long* tmp
    cdef Py_ssize_t i, v, e, lo, deg, max_deg
    cdef bint changed
    cdef object stable_at = None

    if (c_indptr == NULL or c_srcs == NULL or c_rels == NULL
            or cur == NULL or nxt == NULL):
        free(c_indptr); free(c_srcs); free(c_rels); free(cur); free(nxt)
        raise MemoryError()

    try:
        for i in range(n + 1):
            c_indptr[i] = indptr[i]
        for i in range(m):
            c_srcs[i] = srcs[i]
            c_rels[i] = rels[i]
        max_deg = 0
        for v in range(n):
            deg = c_indptr[v + 1] - c_indptr[v]
            if deg > max_deg:
                max_deg = deg
        scratch = <unsigned long long*>malloc((max_deg + 1) * sizeof(unsigned long long))
        if scratch == NULL:
            raise MemoryError()

        layers = [list(init)]
        for v in range(n):
            cur[v] = <unsigned long long>(<long long>init[v])

        for _ in range(max_layers):
            table = {}
            for v in range(n):
                lo = c_indptr[v]
                deg = c_indptr[v + 1] - lo
                scratch[0] = cur[v]
                for e in range(deg):
                    scratch[e + 1] = (
                        (cur[c_srcs[lo + e]] << 32)
                        | <unsigned long long>c_rels[lo + e]
                    )
                qsort(scratch + 1, deg, sizeof(unsigned long long), _cmp_u64)
                key = PyBytes_FromStringAndSize(
                    <char*>scratch, (deg + 1) * sizeof(unsigned long long)
                )
                cid = table.get(key)
                if cid is None:
                    cid = len(table)
                    table[key] = cid
                nxt[v] = <unsigned long long><long long>cid
            changed = False
            for v in range(n):
                if nxt[v] != cur[v]:
                    changed = True
                    break
            if not changed:
                stable_at = len(layers) - 1
                break
            layers.append([<long long>nxt[v] for v in range(n)])
            tmp = cur
            cur = nxt
            nxt = tmp
        return layers, stable_at
    finally:
        free(c_indptr)
        free(c_srcs)
        free(c_rels)
        free(cur)
        free(nxt)
        free(scratch)
