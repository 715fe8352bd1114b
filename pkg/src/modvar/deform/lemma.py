"""Order-by-order triangularization of deformations.

A deformation is a homomorphism from the algebra into ``d x d`` matrices
over ``k[T]/T^N``, stored as one :class:`TruncMat` per generator of the
generator form.  Given a split ``d = d1 + d2`` for which the constant term is
block upper triangular, the lower-left block of the first nonzero order is
a derivation into ``Hom_k(M2, M1)``.  If that derivation is inner, say
``c21(a) = m22(a) theta - theta m11(a)``, conjugating by
``[[1, 0], [T^n theta, 1]]`` clears order ``n``.  A non-inner derivation is
an obstruction and witnesses a nonzero ``Ext^1(M2, M1)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..algebra import AlgebraPresentation
from ..exactlin import Field, solve_linear
from ..modpoint.point import ModulePoint, generator_form
from .series import TruncMat, block_matrix

DEFAULT_ORDER = 8


@dataclass(frozen=True)
class TruncatedPoint:
    presentation: AlgebraPresentation
    field: Field
    dim: int
    gens: tuple  # TruncMat per generator, generator-form order

    @property
    def order(self) -> int:
        return self.gens[0].order if self.gens else 1

    @property
    def generator_names(self) -> tuple:
        return generator_form(self.presentation).generators

    @classmethod
    def constant(cls, m: ModulePoint, order: int = DEFAULT_ORDER) -> TruncatedPoint:
        F = m.field
        gens = tuple(TruncMat.constant(F, g, order) for g in m.generator_matrices())
        return cls(m.presentation, F, m.total_dim, gens)

    @classmethod
    def from_arrows(cls, presentation, dims, arrows: dict, field: Field, order: int) -> TruncatedPoint:
        """Idempotents act as constant block identities; ``arrows`` maps name -> TruncMat (total form)."""
        base = ModulePoint.create(presentation, dims, {}, field)
        q = presentation.quiver
        d = base.total_dim
        gens = [TruncMat.constant(field, e, order) for e in base.generator_matrices()[: q.n]]
        for a in q.arrows:
            x = arrows.get(a.name)
            gens.append(TruncMat.zeros(field, d, d, order) if x is None else x.truncate(order))
        return cls(presentation, field, d, tuple(gens))

    def constant_term(self) -> tuple:
        return tuple(g.coeff(0) for g in self.gens)

    def conjugate(self, g: TruncMat) -> TruncatedPoint:
        ginv = g.inverse()
        return TruncatedPoint(self.presentation, self.field, self.dim, tuple(g @ x @ ginv for x in self.gens))

    def __eq__(self, other):
        if not isinstance(other, TruncatedPoint):
            return NotImplemented
        return (
            self.presentation == other.presentation
            and self.field == other.field
            and self.dim == other.dim
            and all(a == b for a, b in zip(self.gens, other.gens))
        )

    __hash__ = None


def _relation_value(tp: TruncatedPoint, poly) -> TruncMat:
    F = tp.field
    n, N = tp.dim, tp.order
    acc = TruncMat.zeros(F, n, n, N)
    for c, word in poly:
        prod = TruncMat.identity(F, n, N)
        for g in word:
            prod = prod @ tp.gens[g]
        acc = acc + prod.scale(c)
    return acc


def check_truncated(tp: TruncatedPoint) -> list[int]:
    """Indices of generator-form relations that fail modulo ``T^N``."""
    gf = generator_form(tp.presentation)
    if len(tp.gens) != gf.n_generators:
        raise ValueError(f"expected {gf.n_generators} generators, got {len(tp.gens)}")
    return [i for i, poly in enumerate(gf.relations) if not _relation_value(tp, poly).is_zero()]


@dataclass(frozen=True)
class SplitData:
    d1: int
    d2: int
    m11: tuple  # per-generator d1 x d1 constant blocks (quotient)
    m22: tuple  # per-generator d2 x d2 constant blocks (submodule)


def split_data(tp: TruncatedPoint, d1: int, d2: int) -> SplitData:
    if d1 < 0 or d2 < 0 or d1 + d2 != tp.dim:
        raise ValueError(f"split {d1}+{d2} does not match dimension {tp.dim}")
    F = tp.field
    m11, m22 = [], []
    for g in tp.constant_term():
        if not F.is_zero(g[d1:, :d1]):
            raise ValueError("constant term is not block upper triangular for this split")
        m11.append(np.ascontiguousarray(g[:d1, :d1]))
        m22.append(np.ascontiguousarray(g[d1:, d1:]))
    return SplitData(d1, d2, tuple(m11), tuple(m22))


@dataclass(frozen=True)
class Obstruction:
    """A derivation into ``Hom_k(M2, M1)`` that is not inner."""

    witness: tuple  # per-generator d2 x d1 matrices


@dataclass(frozen=True)
class ObstructionAt:
    order: int
    witness: tuple


def derivation_defect(presentation, c21, m11, m22, field: Field) -> list[int]:
    """Relations violating the Leibniz condition for ``c21`` (left action ``m22``, right ``m11``)."""
    F = field
    gf = generator_form(presentation)
    d2, d1 = (c21[0].shape if c21 else (0, 0))
    bad = []
    for idx, poly in enumerate(gf.relations):
        acc = F.zeros(d2, d1)
        for c, word in poly:
            for j, g in enumerate(word):
                left = F.eye(d2)
                for h in word[:j]:
                    left = F.matmul(left, m22[h])
                right = F.eye(d1)
                for h in word[j + 1 :]:
                    right = F.matmul(right, m11[h])
                acc = F.add(acc, F.scale(c, F.matmul(F.matmul(left, c21[g]), right)))
        if not F.is_zero(acc):
            bad.append(idx)
    return bad


def inner_system(m11, m22, field: Field) -> np.ndarray:
    """Matrix of ``vec(theta) -> (m22(a) theta - theta m11(a))_a`` in row-major vectorization."""
    F = field
    blocks = []
    for a, b in zip(m22, m11):
        d2, d1 = a.shape[0], b.shape[0]
        blocks.append(F.sub(F.kron(a, F.eye(d1)), F.kron(F.eye(d2), np.ascontiguousarray(b.T))))
    if not blocks:
        return F.zeros(0, 0)
    return np.ascontiguousarray(np.concatenate(blocks, axis=0))


def solve_theta(c21, m11, m22, field: Field, presentation=None):
    """``theta`` (``d2 x d1``) with ``c21(a) = m22(a) theta - theta m11(a)``, else :class:`Obstruction`.

    When ``presentation`` is given the Leibniz condition on ``c21`` is checked first.
    """
    F = field
    c21 = tuple(np.asarray(x) for x in c21)
    if presentation is not None:
        bad = derivation_defect(presentation, c21, m11, m22, F)
        if bad:
            raise ValueError(f"c21 is not a derivation (relations {bad})")
    d2, d1 = m22[0].shape[0], m11[0].shape[0]
    if d1 == 0 or d2 == 0:
        return F.zeros(d2, d1)
    sysm = inner_system(m11, m22, F)
    rhs = np.concatenate([x.reshape(-1) for x in c21]).reshape(-1, 1)
    x = solve_linear(sysm, rhs, F)
    if x is None:
        return Obstruction(c21)
    return np.ascontiguousarray(x.reshape(d2, d1))


def _lower_left(tp: TruncatedPoint, d1: int, n: int) -> tuple:
    return tuple(np.ascontiguousarray(g.coeff(n)[d1:, :d1]) for g in tp.gens)


def _elementary(F, d1: int, d2: int, theta, n: int, order: int) -> TruncMat:
    """``[[1, 0], [T^n theta, 1]]`` over ``k[T]/T^order``."""
    d = d1 + d2
    coeffs = [F.eye(d)] + [F.zeros(d, d) for _ in range(order - 1)]
    coeffs[n] = block_matrix(F, [[F.zeros(d1, d1), F.zeros(d1, d2)], [theta, F.zeros(d2, d2)]])
    return TruncMat(F, coeffs)


def triangularize(tp: TruncatedPoint, split: SplitData):
    """Return ``(g, tp')`` with ``tp' = g tp g^-1`` block upper triangular mod ``T^N``,
    or :class:`ObstructionAt` for the first order whose lower-left block is not inner."""
    F = tp.field
    d1, d2 = split.d1, split.d2
    N = tp.order
    if d1 + d2 != tp.dim:
        raise ValueError("split does not match the point's dimension")
    bad = check_truncated(tp)
    if bad:
        raise ValueError(f"not a deformation: relations {bad} fail mod T^{N}")
    for g in tp.gens:
        if not F.is_zero(g.coeff(0)[d1:, :d1]):
            raise ValueError("constant term is not block upper triangular for this split")
    g_total = TruncMat.identity(F, tp.dim, N)
    cur = tp
    for n in range(1, N):
        c21 = _lower_left(cur, d1, n)
        if all(F.is_zero(x) for x in c21):
            continue
        theta = solve_theta(c21, split.m11, split.m22, F, cur.presentation)
        if isinstance(theta, Obstruction):
            return ObstructionAt(n, theta.witness)
        gn = _elementary(F, d1, d2, theta, n, N)
        cur = cur.conjugate(gn)
        g_total = gn @ g_total
        for x in cur.gens:
            for r in range(n + 1):
                if not F.is_zero(x.coeff(r)[d1:, :d1]):
                    raise AssertionError(f"lower-left block not cleared through order {n}")
    return g_total, cur


def is_upper_triangular(tp: TruncatedPoint, d1: int) -> bool:
    F = tp.field
    return all(F.is_zero(c[d1:, :d1]) for g in tp.gens for c in g.coeffs)
