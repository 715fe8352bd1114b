"""Numpy fallback for modular row reduction.

Same contract as the compiled ``_rref`` kernel: reduce ``a`` (C-contiguous
int64, entries in ``[0, p)``) to reduced row echelon form in place and return
the pivot columns.
"""

import numpy as np


def rref_modp(a, p):
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r, c:] = (a[r, c:] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            # entries < 2**31 keep every product inside int64
            a[hit, c:] = (a[hit, c:] - (col[hit, None] * a[r, c:]) % p) % p
        pivots.append(c)
        r += 1
    return pivots
