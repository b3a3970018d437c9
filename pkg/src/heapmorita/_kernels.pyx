# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled axiom scans.

Every scan walks its tuple space in lexicographic order over the leading
coordinate range ``[lo, hi)`` and returns the flat index of the first failing
tuple, or -1. The GIL is released so slabs can run on worker threads.
"""

ctypedef long long idx_t


cdef Py_ssize_t _assoc(const idx_t[:, ::1] mul, Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    cdef Py_ssize_t n = mul.shape[0]
    cdef Py_ssize_t a, b, c
    cdef idx_t ab
    for a in range(lo, hi):
        for b in range(n):
            ab = mul[a, b]
            for c in range(n):
                if mul[ab, c] != mul[a, mul[b, c]]:
                    return (a * n + b) * n + c
    return -1


cdef Py_ssize_t _a1(const idx_t[:, :, ::1] t, Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    cdef Py_ssize_t x
    for x in range(lo, hi):
        if t[x, x, x] != x:
            return x
    return -1


cdef Py_ssize_t _a2(const idx_t[:, :, ::1] t, Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    cdef Py_ssize_t n = t.shape[0]
    cdef Py_ssize_t x1, x2, x3, x4, x5
    cdef idx_t inner, rev, lhs, mid, rhs
    for x1 in range(lo, hi):
        for x2 in range(n):
            for x3 in range(n):
                inner = t[x1, x2, x3]
                for x4 in range(n):
                    rev = t[x4, x3, x2]
                    for x5 in range(n):
                        lhs = t[inner, x4, x5]
                        mid = t[x1, rev, x5]
                        rhs = t[x1, x2, t[x3, x4, x5]]
                        if lhs != mid or mid != rhs:
                            return (((x1 * n + x2) * n + x3) * n + x4) * n + x5
    return -1


cdef Py_ssize_t _a3(const idx_t[:, :, ::1] t, Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    cdef Py_ssize_t n = t.shape[0]
    cdef Py_ssize_t x, y, z
    for x in range(lo, hi):
        for y in range(n):
            for z in range(n):
                if t[x, x, t[y, y, z]] != t[y, y, t[x, x, z]]:
                    return (x * n + y) * n + z
    return -1


cdef Py_ssize_t _a4(const idx_t[:, :, ::1] t, Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    cdef Py_ssize_t n = t.shape[0]
    cdef Py_ssize_t x, y, z
    for x in range(lo, hi):
        for y in range(n):
            for z in range(n):
                if t[t[z, x, x], y, y] != t[t[z, y, y], x, x]:
                    return (x * n + y) * n + z
    return -1


def assoc_first(const idx_t[:, ::1] mul, Py_ssize_t lo, Py_ssize_t hi):
    cdef Py_ssize_t r
    with nogil:
        r = _assoc(mul, lo, hi)
    return r


def heap_first(const idx_t[:, :, ::1] ter, str axiom, Py_ssize_t lo, Py_ssize_t hi):
    cdef Py_ssize_t r
    cdef int which
    if axiom == "A1":
        which = 1
    elif axiom == "A2":
        which = 2
    elif axiom == "A3":
        which = 3
    elif axiom == "A4":
        which = 4
    else:
        raise ValueError(f"unknown heap axiom {axiom!r}")
    with nogil:
        if which == 1:
            r = _a1(ter, lo, hi)
        elif which == 2:
            r = _a2(ter, lo, hi)
        elif which == 3:
            r = _a3(ter, lo, hi)
        else:
            r = _a4(ter, lo, hi)
    return r
