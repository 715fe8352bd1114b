"""Selects the row-reduction kernel at import time.

The compiled ``_rref`` extension is used when it has been built; otherwise
(or when ``MODVAR_PURE_PYTHON`` is set to a non-empty value) the numpy
fallback is used.  Both share one signature::

    rref_modp(a: int64[rows, cols], p: int) -> list[int]   # in place
"""

import os

from . import _rref_py

if os.environ.get("MODVAR_PURE_PYTHON"):
    rref_modp = _rref_py.rref_modp
    KERNEL = "python"
else:
    try:
        from ._rref import rref_modp
        KERNEL = "cython"
    except ImportError:  # extension not built
        rref_modp = _rref_py.rref_modp
        KERNEL = "python"

python_rref_modp = _rref_py.rref_modp
