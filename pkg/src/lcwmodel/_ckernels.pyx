# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring ``_pykernels`` (see there for the encoding)."""

from libc.stdlib cimport malloc, free, qsort
from libc.stdint cimport uint64_t, int64_t

cdef uint64_t O_FLAG = (<uint64_t>1) << 31

ctypedef struct Row:
    uint64_t c
    uint64_t key
    uint64_t extra


cdef int _cmp_rows(const void *a, const void *b) noexcept nogil:
    cdef const Row *ra = <const Row *>a
    cdef const Row *rb = <const Row *>b
    if ra.c != rb.c:
        return -1 if ra.c < rb.c else 1
    if ra.key != rb.key:
        return -1 if ra.key < rb.key else 1
    if ra.extra != rb.extra:
        return -1 if ra.extra < rb.extra else 1
    return 0


cdef class _Flat:
    cdef const uint64_t[:] mask
    cdef const int64_t[:] parent
    cdef const int64_t[:] label
    cdef const int64_t[:] isc
    cdef const int64_t[:] cptr
    cdef const int64_t[:] child
    cdef Py_ssize_t n
    cdef uint64_t *clus
    cdef uint64_t *rank
    cdef Row *rows
    cdef Py_ssize_t cap

    def __cinit__(self, flat):
        self.mask, self.parent, self.label, self.isc, self.cptr, self.child = flat
        self.n = self.mask.shape[0]
        # one N-row per node plus at most one O-row per child
        self.cap = 2 * self.n + 1
        self.clus = <uint64_t *>malloc(max(self.n, 1) * sizeof(uint64_t))
        self.rank = <uint64_t *>malloc(max(self.n, 1) * sizeof(uint64_t))
        self.rows = <Row *>malloc(self.cap * sizeof(Row))
        if not self.clus or not self.rank or not self.rows:
            raise MemoryError()

    def __dealloc__(self):
        free(self.clus)
        free(self.rank)
        free(self.rows)

    cdef Py_ssize_t fill(self, uint64_t x) noexcept nogil:
        cdef Py_ssize_t u, k, nr = 0, nk
        cdef int64_t p
        cdef uint64_t c, r, km, pos
        for u in range(self.n):
            c = self.mask[u] & x
            self.clus[u] = c
            if c == 0:
                continue
            p = self.parent[u]
            if p >= 0 and self.clus[p] == c:
                r = self.rank[p] + 1
            else:
                r = 0
            self.rank[u] = r
            self.rows[nr].c = c
            self.rows[nr].key = (r << 32) | <uint64_t>self.label[u]
            self.rows[nr].extra = 0
            nr += 1
            if self.isc[u]:
                nk = 0
                for k in range(self.cptr[u], self.cptr[u + 1]):
                    if self.mask[self.child[k]] & x:
                        nk += 1
                if nk >= 2:
                    pos = 0
                    for k in range(self.cptr[u], self.cptr[u + 1]):
                        km = self.mask[self.child[k]] & x
                        if km:
                            self.rows[nr].c = c
                            self.rows[nr].key = (r << 32) | O_FLAG | pos
                            self.rows[nr].extra = km
                            nr += 1
                            pos += 1
        qsort(self.rows, nr, sizeof(Row), _cmp_rows)
        return nr


cdef bint _equal(_Flat a, _Flat b, uint64_t x) noexcept nogil:
    cdef Py_ssize_t na = a.fill(x)
    cdef Py_ssize_t nb = b.fill(x)
    cdef Py_ssize_t i
    if na != nb:
        return False
    for i in range(na):
        if a.rows[i].c != b.rows[i].c or a.rows[i].key != b.rows[i].key \
                or a.rows[i].extra != b.rows[i].extra:
            return False
    return True


def records(flat, x):
    cdef _Flat f = _Flat(flat)
    cdef Py_ssize_t nr = f.fill(<uint64_t>x)
    return [(f.rows[i].c, f.rows[i].key, f.rows[i].extra) for i in range(nr)]


def same_restriction(fa, fb, x):
    return bool(_equal(_Flat(fa), _Flat(fb), <uint64_t>x))


def scan_submasks(fa, fb, q):
    cdef _Flat a = _Flat(fa)
    cdef _Flat b = _Flat(fb)
    cdef uint64_t qq = <uint64_t>q
    cdef uint64_t x = qq
    cdef long long checked = 0, fails = 0
    cdef long long first = -1
    with nogil:
        while x:
            checked += 1
            if not _equal(a, b, x):
                fails += 1
                if first < 0:
                    first = <long long>x
            x = (x - 1) & qq
    return checked, fails, first


BACKEND = "cython"
