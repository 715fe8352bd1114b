"""Exact fields and dense linear algebra over them.

Two fields are provided: :class:`PrimeField` (entries are int64 residues,
row reduction goes through the compiled kernel when it is available) and
:class:`Rationals` (object arrays of :class:`fractions.Fraction`).

Matrices are plain 2-D numpy arrays.  Every method returns canonical
entries: residues in ``[0, p)`` for prime fields and ``Fraction`` for the
rationals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import isprime

from . import kernel

DEFAULT_PRIME = 2147483647  # 2**31 - 1
RATIONAL_SAMPLE_RANGE = 9  # rationals mode samples integers in [-9, 9]

_FRACTION_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_scalar(text: str) -> Fraction:
    """Parse an integer or ``p/q`` fraction literal."""
    m = _FRACTION_RE.match(text)
    if not m:
        raise ValueError(f"not a number: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def _as_2d(data, shape):
    src = np.asarray(data, dtype=object)
    if shape is not None:
        return src.reshape(shape)
    if src.ndim == 2:
        return src
    if src.size == 0:
        return src.reshape(0, 0)
    raise ValueError("expected a 2-D array")


@dataclass(frozen=True)
class PrimeField:
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not isinstance(self.p, int) or not isprime(self.p):
            raise ValueError(f"{self.p!r} is not a prime")
        if self.p >= 2**31:
            raise ValueError("prime fields are limited to p < 2**31")

    @property
    def name(self) -> str:
        return f"GF({self.p})"

    @property
    def size(self) -> int:
        return self.p

    def __str__(self):
        return self.name

    # scalars

    def element(self, x) -> int:
        if isinstance(x, str):
            x = parse_scalar(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in {self.name}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def format(self, x) -> str:
        return str(int(x))

    # matrices

    def array(self, data, shape=None) -> np.ndarray:
        if isinstance(data, np.ndarray) and data.dtype.kind in "iu":
            out = data.astype(np.int64) % self.p
            if shape is not None:
                out = out.reshape(shape)
        else:
            src = _as_2d(data, shape)
            out = np.zeros(src.shape, dtype=np.int64)
            for idx in np.ndindex(src.shape):
                out[idx] = self.element(src[idx])
        return np.ascontiguousarray(out)

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def matmul(self, a, b) -> np.ndarray:
        if a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        if self.p < 2**16 and a.shape[1] < 2**30:
            return (a @ b) % self.p
        lo = b & 0xFFFF
        hi = b >> 16
        return (((a @ hi) % self.p) * 65536 + (a @ lo)) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def scale(self, c, a):
        c = self.element(c)
        return (a * c) % self.p

    def kron(self, a, b) -> np.ndarray:
        return np.kron(a, b) % self.p

    def is_zero(self, a) -> bool:
        return not np.any(a)

    def rref(self, a):
        """Return ``(R, pivots)``; ``a`` is not modified."""
        work = np.ascontiguousarray(a, dtype=np.int64).copy()
        if work.size == 0:
            return work, []
        pivots = kernel.rref_modp(work, self.p)
        return work, list(pivots)

    def random(self, rows: int, cols: int, rng) -> np.ndarray:
        return rng.integers(0, self.p, size=(rows, cols), dtype=np.int64)

    def random_scalar(self, rng) -> int:
        return int(rng.integers(0, self.p))


@dataclass(frozen=True)
class Rationals:
    @property
    def name(self) -> str:
        return "QQ"

    @property
    def size(self):
        return None

    def __str__(self):
        return self.name

    def element(self, x) -> Fraction:
        if isinstance(x, str):
            return parse_scalar(x)
        return Fraction(x)

    def inv(self, x) -> Fraction:
        return 1 / Fraction(x)

    def format(self, x) -> str:
        return str(Fraction(x))

    def array(self, data, shape=None) -> np.ndarray:
        src = _as_2d(data, shape)
        out = np.empty(src.shape, dtype=object)
        for idx in np.ndindex(src.shape):
            out[idx] = self.element(src[idx])
        return out

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        out = np.empty((rows, cols), dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = Fraction(1)
        return out

    def matmul(self, a, b) -> np.ndarray:
        if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        return a @ b

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def scale(self, c, a):
        c = self.element(c)
        if a.size == 0:
            return a.copy()
        return a * c

    def kron(self, a, b) -> np.ndarray:
        if a.size == 0 or b.size == 0:
            return self.zeros(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
        return np.kron(a, b)

    def is_zero(self, a) -> bool:
        return all(x == 0 for x in a.flat)

    def rref(self, a):
        rows, cols = a.shape
        m = [[Fraction(x) for x in a[i]] for i in range(rows)]
        pivots = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        out = self.zeros(rows, cols)
        for i in range(rows):
            for j in range(cols):
                out[i, j] = m[i][j]
        return out, pivots

    def random(self, rows: int, cols: int, rng) -> np.ndarray:
        vals = rng.integers(-RATIONAL_SAMPLE_RANGE, RATIONAL_SAMPLE_RANGE + 1, size=(rows, cols))
        return self.array(vals.tolist() if rows else [], shape=(rows, cols))

    def random_scalar(self, rng) -> Fraction:
        return Fraction(int(rng.integers(-RATIONAL_SAMPLE_RANGE, RATIONAL_SAMPLE_RANGE + 1)))


Field = PrimeField | Rationals
DEFAULT_FIELD = PrimeField()


def field_from_name(name: str) -> Field:
    """Accept ``GF(p)``, a bare prime, ``p`` (default prime), ``QQ`` or ``rat``."""
    name = name.strip()
    if name in ("QQ", "rat"):
        return Rationals()
    if name == "p":
        return DEFAULT_FIELD
    m = re.fullmatch(r"GF\((\d+)\)|(\d+)", name)
    if not m:
        raise ValueError(f"unknown field {name!r}")
    return PrimeField(int(m.group(1) or m.group(2)))


# -- module-level helpers ---------------------------------------------------


def rank(m, field: Field = DEFAULT_FIELD) -> int:
    if m.size == 0:
        return 0
    return len(field.rref(m)[1])


def nullspace(m, field: Field = DEFAULT_FIELD) -> np.ndarray:
    """Right null space of ``m`` as the columns of a ``cols x k`` matrix."""
    rows, cols = m.shape
    if rows == 0:
        return field.eye(cols)
    r, pivots = field.rref(m)
    free = [j for j in range(cols) if j not in set(pivots)]
    out = field.zeros(cols, len(free))
    for k, j in enumerate(free):
        out[j, k] = field.element(1)
        for i, pc in enumerate(pivots):
            out[pc, k] = field.neg(r[i, j])
    return out


def kernel_basis(m, field: Field = DEFAULT_FIELD) -> list[np.ndarray]:
    ns = nullspace(m, field)
    return [ns[:, [k]] for k in range(ns.shape[1])]


def solve_linear(m, rhs, field: Field = DEFAULT_FIELD):
    """One solution ``x`` of ``m @ x = rhs``, or ``None`` when unsolvable.

    Free variables are set to zero, so the returned solution is the one
    supported on the pivot columns.
    """
    rows, cols = m.shape
    if rhs.ndim == 1:
        rhs = rhs.reshape(-1, 1)
    if rhs.shape[0] != rows:
        raise ValueError("right-hand side has the wrong number of rows")
    k = rhs.shape[1]
    if rows == 0:
        return field.zeros(cols, k)
    aug = np.concatenate([m, rhs], axis=1)
    r, pivots = field.rref(aug)
    if any(pc >= cols for pc in pivots):
        return None
    x = field.zeros(cols, k)
    for i, pc in enumerate(pivots):
        x[pc, :] = r[i, cols:]
    return x


def inverse(m, field: Field = DEFAULT_FIELD) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return field.zeros(0, 0)
    r, pivots = field.rref(np.concatenate([m, field.eye(n)], axis=1))
    if len([pc for pc in pivots if pc < n]) < n:
        raise ZeroDivisionError("singular matrix")
    return np.ascontiguousarray(r[:, n:])


def is_invertible(m, field: Field = DEFAULT_FIELD) -> bool:
    return m.shape[0] == m.shape[1] and rank(m, field) == m.shape[0]


def row_space(m, field: Field = DEFAULT_FIELD) -> np.ndarray:
    """Basis rows (echelon form) of the row space of ``m``."""
    if m.size == 0:
        return field.zeros(0, m.shape[1])
    r, pivots = field.rref(m)
    return np.ascontiguousarray(r[: len(pivots)])


def left_nullspace(m, field: Field = DEFAULT_FIELD) -> np.ndarray:
    """Rows ``v`` with ``v @ m = 0``, as a ``k x rows`` matrix."""
    return np.ascontiguousarray(nullspace(np.ascontiguousarray(m.T), field).T)


def random_matrix(rows: int, cols: int, field: Field = DEFAULT_FIELD, rng=None) -> np.ndarray:
    if rng is None:
        raise ValueError("random_matrix needs an explicit generator")
    return field.random(rows, cols, rng)


def random_invertible(n: int, field: Field, rng, max_tries: int = 1000) -> np.ndarray:
    for _ in range(max_tries):
        g = field.random(n, n, rng)
        if is_invertible(g, field):
            return g
    raise RuntimeError("could not sample an invertible matrix")
