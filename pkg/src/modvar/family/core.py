"""Sampling, generic values and dimensions of families.

Dimensions are ranks of differentials.  :func:`_sample` returns a point of
the family together with a spanning set of tangent directions of the
parametrization (group directions included), so the graded dimension of
the ``prod GL(d_v)``-saturated family is the rank of those directions at a
random point.  Derivatives of the relations are taken exactly with
dual-number arithmetic (see :func:`modvar.modpoint.variety.jacobian`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..exactlin import random_invertible, rank, solve_linear
from ..modpoint.decompose import decompose
from ..modpoint.linear import ConsistencyError, ext1_dim, extension_from_graded, graded_der_basis, hom_dim
from ..modpoint.point import ModulePoint, check_point, direct_sum
from ..modpoint.variety import jacobian, variety_equations
from .expr import ExtFam, FamilyError, Orbit, RepSpace, Slice, Sum, family_label

DEFAULT_TRIALS = 5
DEFAULT_STABILITY_ROUNDS = 4


def as_generator(rng):
    """Accept a seed or a Generator; return ``(generator, seed or None)``."""
    if isinstance(rng, np.random.Generator):
        return rng, None
    seed = 0 if rng is None else int(rng)
    return np.random.default_rng(seed), seed


# -- variable layout ---------------------------------------------------------


def _arrow_offsets(p, dims):
    q = p.quiver
    off, out = 0, {}
    for a in q.arrows:
        rows, cols = dims[q.vertex_index(a.source)], dims[q.vertex_index(a.target)]
        out[a.name] = (off, rows, cols)
        off += rows * cols
    return out, off


def _embed(p, dims, child_dims, row_off, col_off, vecs):
    """Place child direction vectors into the block at per-vertex offsets."""
    q = p.quiver
    par, n = _arrow_offsets(p, dims)
    ch, _ = _arrow_offsets(p, child_dims)
    out = np.zeros((n, vecs.shape[1]), dtype=vecs.dtype)
    if vecs.dtype == object:
        out.fill(Fraction(0))
    for a in q.arrows:
        o, rows, cols = ch[a.name]
        if not rows or not cols:
            continue
        po, _, pcols = par[a.name]
        r0, c0 = row_off[a.source], col_off[a.target]
        for i in range(rows):
            src = slice(o + i * cols, o + (i + 1) * cols)
            start = po + (r0 + i) * pcols + c0
            out[start : start + cols] = vecs[src]
    return out


def orbit_tangents(m: ModulePoint) -> np.ndarray:
    """Columns ``xi_s X_a - X_a xi_t`` for elementary ``xi`` in each ``gl(d_v)``."""
    F = m.field
    q = m.quiver
    offs, n = _arrow_offsets(m.presentation, m.dims)
    cols = []
    for v in q.vertices:
        dv = m.dim_at(v)
        for i in range(dv):
            for j in range(dv):
                col = F.zeros(n, 1)[:, 0]
                for a in q.arrows:
                    o, rows, cc = offs[a.name]
                    if not rows or not cc:
                        continue
                    x = m.mats[a.name]
                    blk = F.zeros(rows, cc)
                    if a.source == v:
                        blk[i, :] = F.add(blk[i, :].reshape(1, -1), x[j, :].reshape(1, -1))[0]
                    if a.target == v:
                        blk[:, j] = F.sub(blk[:, j].reshape(-1, 1), x[:, i].reshape(-1, 1))[:, 0]
                    col[o : o + rows * cc] = blk.reshape(-1)
                cols.append(col)
    if not cols:
        return F.zeros(n, 0)
    return np.ascontiguousarray(np.stack(cols, axis=1))


def _hcat(F, n, mats):
    mats = [x for x in mats if x.shape[1]]
    if not mats:
        return F.zeros(n, 0)
    return np.ascontiguousarray(np.concatenate(mats, axis=1))


# -- validity ----------------------------------------------------------------


def slice_valid(f: Slice, rng=None, samples: int = 2) -> bool:
    """True iff all relations vanish identically once the zeroed arrows are removed."""
    system = variety_equations(f.presentation, f.dims, f.zeroed)
    symbolic = all(not eq for eq in system.equations)
    if symbolic:
        gen, _ = as_generator(rng)
        for _ in range(samples):
            if check_point(_slice_point(f, gen)):
                raise ConsistencyError("slice passed the symbolic check but a random point violates a relation")
    return symbolic


def _slice_point(f, rng) -> ModulePoint:
    F = f.field
    q = f.presentation.quiver
    mats = {}
    zeroed = getattr(f, "zeroed", frozenset())
    for a in q.arrows:
        if a.name in zeroed:
            continue
        rows, cols = f.dims[q.vertex_index(a.source)], f.dims[q.vertex_index(a.target)]
        mats[a.name] = F.random(rows, cols, rng)
    return ModulePoint.create(f.presentation, f.dims, mats, F)


def validate(f) -> None:
    if isinstance(f, Slice):
        if not slice_valid(f):
            raise FamilyError(f"slice {f.dims} with zeroed {sorted(f.zeroed)} is not contained in the module variety")
    elif isinstance(f, Orbit):
        if check_point(f.point):
            raise FamilyError("orbit point violates the relations")
    elif isinstance(f, Sum):
        for p in f.parts:
            validate(p)
    elif isinstance(f, ExtFam):
        validate(f.quotient)
        validate(f.sub)


# -- sampling ----------------------------------------------------------------


def _sample(f, rng, tangents: bool):
    """``(point, tangent columns or None)``."""
    if isinstance(f, Orbit):
        m = f.point
        g = {v: random_invertible(m.dim_at(v), m.field, rng) for v in m.quiver.vertices}
        pt = m.conjugate(g)
        return pt, (orbit_tangents(pt) if tangents else None)
    if isinstance(f, (RepSpace, Slice)):
        pt = _slice_point(f, rng)
        if not tangents:
            return pt, None
        F = f.field
        offs, n = _arrow_offsets(f.presentation, f.dims)
        zeroed = getattr(f, "zeroed", frozenset())
        free = [k for a, (o, r, c) in offs.items() if a not in zeroed for k in range(o, o + r * c)]
        basis = F.zeros(n, len(free))
        for col, k in enumerate(free):
            basis[k, col] = F.element(1)
        return pt, _hcat(F, n, [basis, orbit_tangents(pt)])
    if isinstance(f, Sum):
        kids = [_sample(p, rng, tangents) for p in f.parts]
        pt = direct_sum([k[0] for k in kids])
        if not tangents:
            return pt, None
        F = f.field
        _, n = _arrow_offsets(f.presentation, pt.dims)
        q = f.presentation.quiver
        cols = []
        off = {v: 0 for v in q.vertices}
        for kp, kt in kids:
            cols.append(_embed(f.presentation, pt.dims, kp.dims, off, off, kt))
            off = {v: off[v] + kp.dim_at(v) for v in q.vertices}
        cols.append(orbit_tangents(pt))
        return pt, _hcat(F, n, cols)
    if isinstance(f, ExtFam):
        m1, t1 = _sample(f.quotient, rng, tangents)
        m2, t2 = _sample(f.sub, rng, tangents)
        basis = graded_der_basis(m1, m2)
        pt = extension_from_graded(m1, m2, basis.random_element(rng))
        if not tangents:
            return pt, None
        return pt, _ext_tangents(f, m1, m2, t1, t2, basis, pt)
    raise TypeError(f"not a family: {f!r}")


def _ext_tangents(f, m1, m2, t1, t2, basis, pt):
    """Tangents of ``(m1, m2, D) -> [[m1, D], [0, m2]]`` with ``D`` in the graded derivation space.

    Child directions are lifted by solving the linearized derivation system at
    the sampled point; this fixes the pivot coordinates of ``D`` and is the
    local trivialization of the derivation bundle.
    """
    F = f.field
    p = f.presentation
    q = p.quiver
    dims = pt.dims
    offs, n = _arrow_offsets(p, dims)
    zero = {v: 0 for v in q.vertices}
    d1 = {v: m1.dim_at(v) for v in q.vertices}
    diag = [
        _embed(p, dims, m1.dims, zero, zero, t1),
        _embed(p, dims, m2.dims, d1, d1, t2),
    ]
    # upper-right coordinates carry D
    ur_cols = []
    for a in q.arrows:
        o, rows, cols = offs[a.name]
        r1, c1 = d1[a.source], d1[a.target]
        ur_cols.extend(o + i * cols + j for i in range(r1) for j in range(c1, cols))
    # upper-right entries of the relations
    ur_rows, r0 = [], 0
    for rel in p.relations:
        src, tgt = rel.ends(q)
        rows, cols = dims[q.vertex_index(src)], dims[q.vertex_index(tgt)]
        ur_rows.extend(r0 + i * cols + j for i in range(d1[src]) for j in range(d1[tgt], cols))
        r0 += rows * cols
    jac = jacobian(pt)
    j_ur = jac[np.ix_(ur_rows, list(range(n)))] if ur_rows else F.zeros(0, n)
    j_dd = np.ascontiguousarray(j_ur[:, ur_cols]) if ur_cols else F.zeros(len(ur_rows), 0)
    out = []
    for block in diag:
        for k in range(block.shape[1]):
            col = block[:, k : k + 1].copy()
            if ur_cols and ur_rows:
                rhs = F.neg(F.matmul(j_ur, col))
                lift = solve_linear(j_dd, rhs, F)
                if lift is None:
                    raise ConsistencyError("child tangent does not lift to the derivation bundle")
                col[ur_cols, 0] = lift[:, 0]
            out.append(col)
    # fiber directions: the derivation basis itself in the upper-right block
    fiber = F.zeros(n, len(basis.elements))
    for k, blocks in enumerate(basis.elements):
        for a in q.arrows:
            o, rows, cols = offs[a.name]
            r1, c1 = d1[a.source], d1[a.target]
            blk = blocks[a.name]
            for i in range(r1):
                for j in range(cols - c1):
                    fiber[o + i * cols + c1 + j, k] = blk[i, j]
    out.append(fiber)
    out.append(orbit_tangents(pt))
    return _hcat(F, n, out)


def sample(f, rng) -> ModulePoint:
    """A random point of the family; the result always satisfies the relations."""
    gen, _ = as_generator(rng)
    validate(f)
    pt, _ = _sample(f, gen, False)
    if check_point(pt):
        raise ConsistencyError("sampled point violates a relation")
    return pt


# -- generic values ----------------------------------------------------------


@dataclass(frozen=True)
class GenericStats:
    """Minimum over sampled points.

    Samples come from the parametrized dense part of each family, so for a
    family that is not a component the value is only an upper bound for the
    minimum over its closure; reports carry ``"bound": "upper"`` for that.
    """

    value: int
    trials: int
    seed: int | None
    values: tuple

    def as_dict(self) -> dict:
        return {"value": self.value, "bound": "upper", "trials": self.trials, "seed": self.seed, "values": list(self.values)}


def _generic(fn, f1, f2, trials, rng) -> GenericStats:
    if trials < 1:
        raise ValueError("trials must be positive")
    if f1.presentation != f2.presentation or f1.field != f2.field:
        raise FamilyError("families live over different presentations or fields")
    gen, seed = as_generator(rng)
    validate(f1)
    validate(f2)
    vals = []
    for _ in range(trials):
        m1, _ = _sample(f1, gen, False)
        m2, _ = _sample(f2, gen, False)
        vals.append(fn(m1, m2))
    return GenericStats(min(vals), trials, seed, tuple(vals))


def generic_hom(f1, f2, trials: int = DEFAULT_TRIALS, rng=None) -> GenericStats:
    return _generic(hom_dim, f1, f2, trials, rng)


def generic_ext(f1, f2, trials: int = DEFAULT_TRIALS, rng=None) -> GenericStats:
    return _generic(ext1_dim, f1, f2, trials, rng)


@dataclass(frozen=True)
class SumReport:
    value: bool
    ext: tuple  # ext[i][j] = generic ext(C_i, C_j); None on the diagonal
    trials: int
    seed: int | None

    def __bool__(self):
        return self.value

    def as_dict(self) -> dict:
        return {
            "component": self.value,
            "ext": [list(r) for r in self.ext],
            "ext_bound": "upper",
            "trials": self.trials,
            "seed": self.seed,
        }


def _ext_matrix(parts, trials, gen):
    n = len(parts)
    subs = gen.spawn(n * n)
    mat = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                mat[i][j] = generic_ext(parts[i], parts[j], trials, subs[i * n + j]).value
    return tuple(tuple(r) for r in mat)


def sum_is_component(parts, trials: int = DEFAULT_TRIALS, rng=None) -> SumReport:
    """Direct-sum criterion: the sum of components is a component iff all cross ext vanish."""
    parts = list(parts)
    gen, seed = as_generator(rng)
    mat = _ext_matrix(parts, trials, gen)
    ok = all(mat[i][j] == 0 for i in range(len(parts)) for j in range(len(parts)) if i != j)
    return SumReport(ok, mat, trials, seed)


# -- dimensions --------------------------------------------------------------


def family_dim(f, rng=None) -> dict:
    """``{"graded": ..., "saturated": ...}`` for the saturated family."""
    gen, _ = as_generator(rng)
    validate(f)
    pt, tan = _sample(f, gen, True)
    graded = rank(tan, f.field) if tan.size else 0
    d = sum(pt.dims)
    return {"graded": graded, "saturated": graded + d * d - sum(x * x for x in pt.dims)}


def sum_dim(parts, trials: int = DEFAULT_TRIALS, rng=None) -> int:
    """``sum_i dim C_i + sum_{i != j} (d_i d_j - hom(C_i, C_j))`` in the saturated convention."""
    parts = list(parts)
    gen, _ = as_generator(rng)
    total = sum(family_dim(p, gen)["saturated"] for p in parts)
    for i, a in enumerate(parts):
        for j, b in enumerate(parts):
            if i != j:
                total += sum(a.dims) * sum(b.dims) - generic_hom(a, b, trials, gen).value
    return total


# -- canonical decomposition -------------------------------------------------


class UnstableDecompositionError(RuntimeError):
    def __init__(self, observed):
        super().__init__(f"decomposition unstable across samples: {observed}")
        self.observed = observed


@dataclass
class CanonicalClass:
    dims: tuple
    multiplicity: int
    witness: ModulePoint = field(repr=False)
    certified: bool

    def as_dict(self) -> dict:
        return {"dims": list(self.dims), "multiplicity": self.multiplicity, "certified": self.certified}


def _classes(result) -> list[CanonicalClass]:
    by_dims: dict = {}
    for s in result.summands:
        c = by_dims.get(s.dims)
        if c is None:
            by_dims[s.dims] = CanonicalClass(s.dims, s.multiplicity, s.module, s.certified)
        else:
            c.multiplicity += s.multiplicity
            c.certified = c.certified and s.certified
    return [by_dims[k] for k in sorted(by_dims)]


def canonical_decomposition(f, rng=None, max_rounds: int = DEFAULT_STABILITY_ROUNDS) -> list[CanonicalClass]:
    """Summand classes of a generic point, keyed by dimension vector.

    Two consecutive samples must agree on the multiset of summand dimension
    vectors; after ``max_rounds`` samples without agreement the run fails.
    """
    gen, _ = as_generator(rng)
    validate(f)
    observed = []
    prev = None
    for _ in range(max(2, max_rounds)):
        pt, _ = _sample(f, gen, False)
        res = decompose(pt, gen)
        key = tuple(res.dimension_vectors())
        observed.append(key)
        if prev is not None and key == prev[0]:
            return _classes(prev[1])
        prev = (key, res)
    raise UnstableDecompositionError(observed)


# -- component graph ---------------------------------------------------------


@dataclass(frozen=True)
class ComponentGraph:
    vertices: tuple
    arrows: tuple  # (C1, C2) with generic ext(C2, C1) = 0
    edges: tuple  # unordered pairs with both arrows
    ext: tuple
    trials: int
    seed: int | None

    def as_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [list(a) for a in self.arrows],
            "edges": [list(e) for e in self.edges],
            "ext": [list(r) for r in self.ext],
            "ext_bound": "upper",
            "trials": self.trials,
            "seed": self.seed,
        }

    def to_dot(self, name: str = "components") -> str:
        esc = lambda s: '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'  # noqa: E731
        lines = [f"digraph {esc(name)} {{"]
        lines += [f"  {esc(v)};" for v in self.vertices]
        paired = {frozenset(e) for e in self.edges}
        for a, b in self.arrows:
            if frozenset((a, b)) in paired:
                continue
            lines.append(f"  {esc(a)} -> {esc(b)};")
        for a, b in self.edges:
            lines.append(f"  {esc(a)} -> {esc(b)} [dir=both];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def component_graph(parts, trials: int = DEFAULT_TRIALS, rng=None) -> ComponentGraph:
    parts = list(parts)
    labels = [family_label(p, f"C{i + 1}") for i, p in enumerate(parts)]
    if len(set(labels)) != len(labels):
        raise FamilyError("component labels must be unique")
    gen, seed = as_generator(rng)
    mat = _ext_matrix(parts, trials, gen)
    n = len(parts)
    arrows = sorted((labels[i], labels[j]) for i in range(n) for j in range(n) if i != j and mat[j][i] == 0)
    arrow_set = set(arrows)
    edges = sorted(
        tuple(sorted((a, b))) for a, b in arrows if (b, a) in arrow_set and a < b
    )
    return ComponentGraph(tuple(labels), tuple(arrows), tuple(edges), mat, trials, seed)
