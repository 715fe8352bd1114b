"""Truncated power series ``k[T]/T^N`` and matrices over them.

At ``N = 2`` these are dual numbers, which is how exact Jacobians are taken
elsewhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exactlin import Field, inverse


@dataclass(frozen=True)
class TruncSeries:
    """Scalar series ``c0 + c1 T + ... + c_{N-1} T^{N-1}`` over ``field``."""

    field: Field
    coeffs: tuple

    @classmethod
    def of(cls, field, coeffs, order=None) -> TruncSeries:
        cs = [field.element(c) for c in coeffs]
        order = len(cs) if order is None else order
        cs = (cs + [field.element(0)] * order)[:order]
        return cls(field, tuple(cs))

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def _check(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.of(self.field, [other], self.order)
        if other.order != self.order or other.field != self.field:
            raise ValueError("series have different truncation orders or fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        F = self.field
        return TruncSeries(F, tuple(F.element(a + b) for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return TruncSeries(F, tuple(F.element(-a) for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        F = self.field
        n = self.order
        out = []
        for r in range(n):
            out.append(F.element(sum(self.coeffs[i] * other.coeffs[r - i] for i in range(r + 1))))
        return TruncSeries(F, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> TruncSeries:
        F = self.field
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term")
        inv0 = F.inv(c0)
        out = [inv0]
        for r in range(1, self.order):
            s = sum(self.coeffs[i] * out[r - i] for i in range(1, r + 1))
            out.append(F.element(-s * inv0))
        return TruncSeries(F, tuple(out))

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None


class TruncMat:
    """Matrix over ``k[T]/T^N``, stored as ``N`` coefficient matrices."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        self.field = field
        self.coeffs = [np.asarray(c) for c in coeffs]
        if not self.coeffs:
            raise ValueError("truncation order must be at least 1")
        shape = self.coeffs[0].shape
        if any(c.shape != shape for c in self.coeffs):
            raise ValueError("coefficient matrices differ in shape")

    @classmethod
    def constant(cls, field, mat, order: int) -> TruncMat:
        z = field.zeros(*mat.shape)
        return cls(field, [mat] + [z] * (order - 1))

    @classmethod
    def identity(cls, field, n: int, order: int) -> TruncMat:
        return cls.constant(field, field.eye(n), order)

    @classmethod
    def zeros(cls, field, rows: int, cols: int, order: int) -> TruncMat:
        return cls(field, [field.zeros(rows, cols) for _ in range(order)])

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def shape(self):
        return self.coeffs[0].shape

    def coeff(self, r: int):
        return self.coeffs[r]

    def __add__(self, other: TruncMat) -> TruncMat:
        F = self.field
        return TruncMat(F, [F.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: TruncMat) -> TruncMat:
        F = self.field
        return TruncMat(F, [F.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> TruncMat:
        return TruncMat(self.field, [self.field.neg(a) for a in self.coeffs])

    def scale(self, c) -> TruncMat:
        return TruncMat(self.field, [self.field.scale(c, a) for a in self.coeffs])

    def __matmul__(self, other: TruncMat) -> TruncMat:
        F = self.field
        n = self.order
        rows, cols = self.shape[0], other.shape[1]
        out = []
        for r in range(n):
            acc = F.zeros(rows, cols)
            for i in range(r + 1):
                a, b = self.coeffs[i], other.coeffs[r - i]
                if F.is_zero(a) or F.is_zero(b):
                    continue
                acc = F.add(acc, F.matmul(a, b))
            out.append(acc)
        return TruncMat(F, out)

    def __getitem__(self, key) -> TruncMat:
        return TruncMat(self.field, [c[key] for c in self.coeffs])

    def truncate(self, order: int) -> TruncMat:
        if order <= self.order:
            return TruncMat(self.field, self.coeffs[:order])
        z = self.field.zeros(*self.shape)
        return TruncMat(self.field, self.coeffs + [z] * (order - self.order))

    def is_zero(self) -> bool:
        return all(self.field.is_zero(c) for c in self.coeffs)

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if not self.field.is_zero(c):
                return i
        return None

    def inverse(self) -> TruncMat:
        """Inverse, defined when the constant term is invertible."""
        F = self.field
        inv0 = inverse(self.coeffs[0], F)
        out = [inv0]
        for r in range(1, self.order):
            acc = F.zeros(*self.shape)
            for i in range(1, r + 1):
                acc = F.add(acc, F.matmul(self.coeffs[i], out[r - i]))
            out.append(F.neg(F.matmul(inv0, acc)))
        return TruncMat(F, out)

    def entry(self, i: int, j: int) -> TruncSeries:
        return TruncSeries(self.field, tuple(self.field.element(c[i, j]) for c in self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, TruncMat) or other.shape != self.shape or other.order != self.order:
            return NotImplemented
        return all(np.array_equal(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __repr__(self):
        return f"TruncMat(shape={self.shape}, order={self.order})"


def block_matrix(field, blocks) -> np.ndarray:
    """Assemble a 2-D grid of matrices, tolerating empty blocks."""
    rows = [np.concatenate(row, axis=1) if row else field.zeros(0, 0) for row in blocks]
    return np.ascontiguousarray(np.concatenate(rows, axis=0))
