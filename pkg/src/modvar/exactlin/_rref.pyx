# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled modular row reduction (reduced row echelon form over GF(p))."""

from libc.stdint cimport int64_t


cdef int64_t _inv(int64_t a, int64_t p):
    cdef int64_t r = 1, b = a % p, e = p - 2
    while e > 0:
        if e & 1:
            r = (r * b) % p
        b = (b * b) % p
        e >>= 1
    return r


def rref_modp(int64_t[:, ::1] a, int64_t p):
    cdef Py_ssize_t rows = a.shape[0], cols = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef int64_t inv, f, t
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        inv = _inv(a[r, c], p)
        if inv != 1:
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
        for i in range(rows):
            if i == r:
                continue
            f = a[i, c]
            if f == 0:
                continue
            for j in range(c, cols):
                if a[r, j] != 0:
                    a[i, j] = (a[i, j] + (p - (f * a[r, j]) % p)) % p
        pivots.append(c)
        r += 1
    return pivots
