"""Points of module varieties.

A :class:`ModulePoint` stores one matrix per arrow; arrow ``a: u -> v`` gets
a ``d_u x d_v`` matrix acting on row vectors.  The total (ungraded) form
places the vertex spaces consecutively in vertex order and sends the
idempotent ``e_v`` to the identity on the ``v`` block.
"""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field as dc_field
from functools import lru_cache

import numpy as np

from ..algebra import AlgebraPresentation, DimensionVector, GeneratorForm, Relation, to_generator_form
from ..exactlin import DEFAULT_FIELD, Field, inverse


@lru_cache(maxsize=None)
def generator_form(p: AlgebraPresentation) -> GeneratorForm:
    return to_generator_form(p)


class MismatchError(ValueError):
    """Modules over different presentations or fields."""


@dataclass(frozen=True, eq=False)
class ModulePoint:
    presentation: AlgebraPresentation
    dims: DimensionVector
    mats: dict
    field: Field = DEFAULT_FIELD
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def create(cls, presentation, dims, mats=None, field: Field = DEFAULT_FIELD) -> ModulePoint:
        """Build a point; missing arrows default to zero matrices."""
        q = presentation.quiver
        dims = tuple(int(x) for x in dims)
        if len(dims) != q.n or any(x < 0 for x in dims):
            raise ValueError(f"bad dimension vector {dims} for {q.n} vertices")
        mats = dict(mats or {})
        unknown = set(mats) - {a.name for a in q.arrows}
        if unknown:
            raise ValueError(f"unknown arrows {sorted(unknown)}")
        out = {}
        for a in q.arrows:
            shape = (dims[q.vertex_index(a.source)], dims[q.vertex_index(a.target)])
            if a.name in mats:
                m = field.array(mats[a.name], shape=shape if np.size(mats[a.name]) == 0 else None)
                if m.shape != shape:
                    raise ValueError(f"arrow {a.name}: expected shape {shape}, got {m.shape}")
            else:
                m = field.zeros(*shape)
            m.setflags(write=False)
            out[a.name] = m
        return cls(presentation, dims, out, field)

    @property
    def quiver(self):
        return self.presentation.quiver

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def dim_at(self, v: str) -> int:
        return self.dims[self.quiver.vertex_index(v)]

    def offsets(self) -> list[int]:
        out = [0]
        for x in self.dims:
            out.append(out[-1] + x)
        return out

    def vertex_slice(self, v: str) -> slice:
        i = self.quiver.vertex_index(v)
        off = self.offsets()
        return slice(off[i], off[i + 1])

    def arrow(self, name: str) -> np.ndarray:
        return self.mats[name]

    def path_matrix(self, path) -> np.ndarray:
        """Product of arrow matrices along ``path`` (left to right)."""
        q = self.quiver
        if not path:
            raise ValueError("empty path")
        out = self.mats[path[0]]
        for x in path[1:]:
            out = self.field.matmul(out, self.mats[x])
        return out

    def relation_matrix(self, rel: Relation) -> np.ndarray:
        F = self.field
        src, tgt = rel.ends(self.quiver)
        acc = F.zeros(self.dim_at(src), self.dim_at(tgt))
        for c, path in rel.terms:
            acc = F.add(acc, F.scale(c, self.path_matrix(path)))
        return acc

    def generator_matrices(self) -> tuple[np.ndarray, ...]:
        """Total-form ``d x d`` matrices, one per generator of the generator form."""
        if "gens" not in self._cache:
            F = self.field
            q = self.quiver
            d = self.total_dim
            off = self.offsets()
            out = []
            for i in range(q.n):
                e = F.zeros(d, d)
                for j in range(off[i], off[i + 1]):
                    e[j, j] = F.element(1)
                out.append(e)
            for a in q.arrows:
                m = F.zeros(d, d)
                m[self.vertex_slice(a.source), self.vertex_slice(a.target)] = self.mats[a.name]
                out.append(m)
            for m in out:
                m.setflags(write=False)
            self._cache["gens"] = tuple(out)
        return self._cache["gens"]

    def vector(self) -> np.ndarray:
        """Arrow coordinates flattened in arrow order (row-major)."""
        parts = [self.mats[a.name].reshape(-1) for a in self.quiver.arrows]
        if not parts:
            return self.field.zeros(1, 0)[0]
        return np.concatenate(parts)

    def with_mats(self, mats) -> ModulePoint:
        return ModulePoint.create(self.presentation, self.dims, mats, self.field)

    def conjugate(self, g: dict) -> ModulePoint:
        """Base change ``X_a -> g_s X_a g_t^{-1}`` with ``g`` keyed by vertex."""
        F = self.field
        q = self.quiver
        ginv = {v: inverse(g[v], F) for v in q.vertices}
        return self.with_mats(
            {a.name: F.matmul(F.matmul(g[a.source], self.mats[a.name]), ginv[a.target]) for a in q.arrows}
        )

    def same_space(self, other: ModulePoint) -> bool:
        return self.presentation == other.presentation and self.field == other.field

    def __eq__(self, other):
        if not isinstance(other, ModulePoint):
            return NotImplemented
        return (
            self.same_space(other)
            and self.dims == other.dims
            and all(np.array_equal(self.mats[k], other.mats[k]) for k in self.mats)
        )

    def __hash__(self):
        return hash((self.presentation.label, self.dims))

    def __repr__(self):
        return f"ModulePoint({self.presentation.label}, dims={self.dims}, field={self.field.name})"


def require_same_space(*points: ModulePoint) -> None:
    first = points[0]
    for p in points[1:]:
        if not first.same_space(p):
            raise MismatchError("modules live over different presentations or fields")


def check_point(m: ModulePoint) -> list[Relation]:
    """Relations whose evaluation at ``m`` is nonzero (empty means valid)."""
    return [rel for rel in m.presentation.relations if not m.field.is_zero(m.relation_matrix(rel))]


def zero_module(p: AlgebraPresentation, field: Field = DEFAULT_FIELD) -> ModulePoint:
    return ModulePoint.create(p, (0,) * p.quiver.n, {}, field)


def simple_module(p: AlgebraPresentation, vertex: str, field: Field = DEFAULT_FIELD) -> ModulePoint:
    """One-dimensional module at ``vertex`` with every arrow acting as zero."""
    dims = [0] * p.quiver.n
    dims[p.quiver.vertex_index(vertex)] = 1
    return ModulePoint.create(p, dims, {}, field)


def direct_sum(parts) -> ModulePoint:
    parts = list(parts)
    if not parts:
        raise ValueError("direct sum of no modules")
    require_same_space(*parts)
    first = parts[0]
    if len(parts) == 1:
        return first
    F = first.field
    q = first.quiver
    dims = tuple(sum(p.dims[i] for p in parts) for i in range(q.n))
    mats = {}
    for a in q.arrows:
        rows = dims[q.vertex_index(a.source)]
        cols = dims[q.vertex_index(a.target)]
        m = F.zeros(rows, cols)
        r = c = 0
        for p in parts:
            x = p.mats[a.name]
            m[r : r + x.shape[0], c : c + x.shape[1]] = x
            r += x.shape[0]
            c += x.shape[1]
        mats[a.name] = m
    return ModulePoint.create(first.presentation, dims, mats, F)
