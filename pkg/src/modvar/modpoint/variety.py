"""Defining equations of representation spaces and scheme tangent spaces."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..algebra import AlgebraPresentation
from ..deform.series import TruncMat
from ..exactlin import rank
from .point import ModulePoint


@dataclass(frozen=True)
class PolySystem:
    """Polynomials in the arrow entries ``X[a][i, j]``.

    ``variables[k] = (arrow, i, j)``; an equation maps a sorted tuple of
    variable indices (a commutative monomial) to its rational coefficient.
    ``labels[e]`` names the relation and matrix entry equation ``e`` came from.
    """

    dims: tuple
    variables: tuple
    equations: tuple
    labels: tuple

    def evaluate(self, m: ModulePoint) -> list:
        F = m.field
        vals = [m.mats[a][i, j] for a, i, j in self.variables]
        out = []
        for eq in self.equations:
            acc = F.element(0)
            for mono, c in eq.items():
                term = F.element(c)
                for k in mono:
                    term = term * vals[k]
                acc = F.element(acc + term)
            out.append(acc)
        return out


def _variables(p: AlgebraPresentation, d) -> tuple:
    q = p.quiver
    out = []
    for a in q.arrows:
        rows, cols = d[q.vertex_index(a.source)], d[q.vertex_index(a.target)]
        out.extend((a.name, i, j) for i in range(rows) for j in range(cols))
    return tuple(out)


def variety_equations(p: AlgebraPresentation, d, zeroed=()) -> PolySystem:
    """One polynomial per entry of each relation evaluated at generic matrices.

    Arrows in ``zeroed`` are set to zero before expanding.
    """
    q = p.quiver
    d = tuple(d)
    variables = _variables(p, d)
    index = {v: k for k, v in enumerate(variables)}
    zeroed = set(zeroed)
    equations, labels = [], []
    for r, rel in enumerate(p.relations):
        src, tgt = rel.ends(q)
        rows, cols = d[q.vertex_index(src)], d[q.vertex_index(tgt)]
        for i in range(rows):
            for j in range(cols):
                poly: dict = {}
                for coeff, path in rel.terms:
                    if zeroed & set(path):
                        continue
                    inner = [d[q.vertex_index(q.arrow(x).target)] for x in path[:-1]]
                    for chain in itertools.product(*(range(n) for n in inner)):
                        idx = (i,) + chain + (j,)
                        mono = tuple(sorted(index[(x, idx[k], idx[k + 1])] for k, x in enumerate(path)))
                        poly[mono] = poly.get(mono, Fraction(0)) + coeff
                poly = {k: v for k, v in poly.items() if v != 0}
                equations.append(poly)
                labels.append((r, i, j))
    return PolySystem(d, variables, tuple(equations), tuple(labels))


def _dual_relations(m: ModulePoint, direction: dict) -> list:
    """Relation values at ``X + eps * direction``, as dual-number matrices."""
    F = m.field
    q = m.quiver
    dual = {a.name: TruncMat(F, [m.mats[a.name], direction[a.name]]) for a in q.arrows}
    out = []
    for rel in m.presentation.relations:
        src, tgt = rel.ends(q)
        acc = TruncMat.zeros(F, m.dim_at(src), m.dim_at(tgt), 2)
        for c, path in rel.terms:
            prod = dual[path[0]]
            for x in path[1:]:
                prod = prod @ dual[x]
            acc = acc + prod.scale(c)
        out.append(acc)
    return out


def jacobian(m: ModulePoint) -> np.ndarray:
    """Jacobian of the variety equations at ``m`` (rows: equations, cols: variables)."""
    F = m.field
    q = m.quiver
    cols = []
    zero = {a.name: F.zeros(*m.mats[a.name].shape) for a in q.arrows}
    for a in q.arrows:
        rows_, cols_ = m.mats[a.name].shape
        for i in range(rows_):
            for j in range(cols_):
                direction = dict(zero)
                e = F.zeros(rows_, cols_)
                e[i, j] = F.element(1)
                direction[a.name] = e
                parts = [t.coeff(1).reshape(-1) for t in _dual_relations(m, direction)]
                cols.append(np.concatenate(parts) if parts else F.zeros(0, 1)[:, 0])
    n_eq = sum(m.dim_at(r.ends(q)[0]) * m.dim_at(r.ends(q)[1]) for r in m.presentation.relations)
    if not cols:
        return F.zeros(n_eq, 0)
    return np.ascontiguousarray(np.stack(cols, axis=1))


def n_arrow_variables(m: ModulePoint) -> int:
    return sum(x.size for x in m.mats.values())


def tangent_dim(m: ModulePoint) -> int:
    """Dimension of the scheme tangent space of the representation space at ``m``."""
    jac = jacobian(m)
    return n_arrow_variables(m) - rank(jac, m.field)


def orbit_dim(m: ModulePoint) -> int:
    """Dimension of the orbit under the product of ``GL(d_v)``."""
    from .linear import end_dim

    return sum(x * x for x in m.dims) - end_dim(m)
