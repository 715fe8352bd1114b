"""Exhaustive enumeration over tiny prime fields.

This is an oracle for the linear-algebra routines: intertwiners and
derivations are counted by brute force, and the counts must be powers of
``q``.  Budgets count visited search nodes, so a search that prunes early
may cover a nominal space larger than the budget.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraPresentation
from .exactlin import PrimeField, is_invertible
from .modpoint.point import ModulePoint, check_point, generator_form, require_same_space

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    pass


class CensusFault(RuntimeError):
    """A solution count that is not a power of ``q``."""


def _exact_log(count: int, q: int) -> int:
    k, x = 0, 1
    while x < count:
        x *= q
        k += 1
    if x != count:
        raise CensusFault(f"solution count {count} is not a power of {q}")
    return k


def _field(q: int) -> PrimeField:
    return PrimeField(q)


def enumerate_points(p: AlgebraPresentation, d, q: int, budget: int = DEFAULT_BUDGET) -> list[ModulePoint]:
    """All points of dimension vector ``d`` over ``F_q``, in lexicographic order of arrow entries."""
    F = _field(q)
    qv = p.quiver
    d = tuple(d)
    shapes = [(d[qv.vertex_index(a.source)], d[qv.vertex_index(a.target)]) for a in qv.arrows]
    n_vars = sum(r * c for r, c in shapes)
    if q**n_vars > budget:
        raise BudgetExceeded(f"{q}^{n_vars} candidate points exceed the budget {budget}")
    out = []
    for values in itertools.product(range(q), repeat=n_vars):
        mats, pos = {}, 0
        for a, (r, c) in zip(qv.arrows, shapes):
            mats[a.name] = np.array(values[pos : pos + r * c], dtype=np.int64).reshape(r, c)
            pos += r * c
        m = ModulePoint.create(p, d, mats, F)
        if not check_point(m):
            out.append(m)
    return out


def count_intertwiners(m: ModulePoint, n: ModulePoint, budget: int = DEFAULT_BUDGET) -> int:
    """Number of ``d_M x d_N`` matrices commuting with every generator (ungraded search)."""
    require_same_space(m, n)
    F = m.field
    q = F.p
    dm, dn = m.total_dim, n.total_dim
    if q ** (dm * dn) > budget:
        raise BudgetExceeded(f"{q}^{dm * dn} candidate maps exceed the budget {budget}")
    gm, gn = m.generator_matrices(), n.generator_matrices()
    count = 0
    for values in itertools.product(range(q), repeat=dm * dn):
        t = np.array(values, dtype=np.int64).reshape(dm, dn)
        if all(np.array_equal(F.matmul(a, t), F.matmul(t, b)) for a, b in zip(gm, gn)):
            count += 1
    return count


def count_derivations(m: ModulePoint, n: ModulePoint, budget: int = DEFAULT_BUDGET) -> int:
    """Number of generator-value tuples satisfying the Leibniz condition on every relation.

    Values are assigned generator by generator (idempotents first) and each
    relation is checked as soon as all generators it mentions are assigned;
    at each search node all ``q^(dM dN)`` candidates are tested at once.
    """
    require_same_space(m, n)
    F = m.field
    q = F.p
    gf = generator_form(m.presentation)
    dm, dn = m.total_dim, n.total_dim
    gm, gn = m.generator_matrices(), n.generator_matrices()
    ngen = gf.n_generators
    size = dm * dn

    def prod(mats, word, dim):
        out = F.eye(dim)
        for h in word:
            out = F.matmul(out, mats[h])
        return out

    # per level k: relations whose largest generator is k, expanded into
    # (coefficient, left action, generator, right action) Leibniz terms
    ready: list[list] = [[] for _ in range(ngen)]
    for poly in gf.relations:
        used = {g for _, w in poly for g in w}
        if not used:
            continue
        terms = []
        for c, word in poly:
            for j, g in enumerate(word):
                terms.append((F.element(c), prod(gm, word[:j], dm), g, prod(gn, word[j + 1 :], dn)))
        ready[max(used)].append(terms)

    candidates = np.array(list(itertools.product(range(q), repeat=size)), dtype=np.int64).reshape(q**size, dm, dn)
    n_cand = candidates.shape[0]
    visited = 0
    vals: list = [None] * ngen

    def survivors(k: int) -> np.ndarray:
        mask = np.ones(n_cand, dtype=bool)
        for terms in ready[k]:
            acc = np.zeros((n_cand, dm, dn), dtype=np.int64)
            for c, left, g, right in terms:
                x = candidates if g == k else vals[g][None, :, :]
                acc = (acc + c * ((left @ x % q) @ right)) % q
            mask &= ~acc.reshape(n_cand, -1).any(axis=1)
        return np.nonzero(mask)[0]

    def search(k: int) -> int:
        nonlocal visited
        if k == ngen:
            return 1
        visited += n_cand
        if visited > budget:
            raise BudgetExceeded(f"derivation search visited more than {budget} nodes")
        ok = survivors(k)
        if k == ngen - 1:
            return len(ok)
        total = 0
        for idx in ok:
            vals[k] = candidates[idx]
            total += search(k + 1)
        vals[k] = None
        return total

    return search(0)


def brute_dims(m: ModulePoint, n: ModulePoint, q: int | None = None, budget: int = DEFAULT_BUDGET) -> dict:
    """``{"hom": ..., "der": ...}`` as base-``q`` logarithms of exact counts."""
    F = m.field
    if not isinstance(F, PrimeField):
        raise ValueError("brute force needs a prime field")
    if q is not None and q != F.p:
        raise ValueError(f"modules are over GF({F.p}), not GF({q})")
    return {
        "hom": _exact_log(count_intertwiners(m, n, budget), F.p),
        "der": _exact_log(count_derivations(m, n, budget), F.p),
    }


def _orbit_count(points: list[ModulePoint], budget: int) -> int:
    """Orbits under ``prod GL(d_v, F_q)`` by union-find over the group action."""
    if not points:
        return 0
    F = points[0].field
    q = F.p
    qv = points[0].quiver
    dims = points[0].dims
    index = {tuple(pt.vector().tolist()): i for i, pt in enumerate(points)}
    parent = list(range(len(points)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def invertibles(n):
        for vals in itertools.product(range(q), repeat=n * n):
            g = np.array(vals, dtype=np.int64).reshape(n, n)
            if is_invertible(g, F):
                yield g

    groups = [list(invertibles(d)) for d in dims]
    size = 1
    for g in groups:
        size *= len(g)
    if size * len(points) > budget:
        raise BudgetExceeded(f"orbit count needs {size * len(points)} group actions")
    for gs in itertools.product(*groups):
        g = dict(zip(qv.vertices, gs))
        for i, pt in enumerate(points):
            j = index[tuple(pt.conjugate(g).vector().tolist())]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    return len({find(i) for i in range(len(points))})


@dataclass
class CensusReport:
    label: str
    dims: tuple
    q: int
    points: int
    orbits: int | None = None
    pairs: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "algebra": self.label,
            "dims": list(self.dims),
            "q": self.q,
            "points": self.points,
            "orbits": self.orbits,
            "pairs": self.pairs,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def census(
    p: AlgebraPresentation,
    d,
    q: int,
    budget: int = DEFAULT_BUDGET,
    orbits: bool = False,
    pairs=(),
) -> CensusReport:
    """Point count, optional orbit count, and brute dims for ``pairs`` of point indices."""
    pts = enumerate_points(p, d, q, budget)
    report = CensusReport(p.label, tuple(d), q, len(pts))
    if orbits:
        report.orbits = _orbit_count(pts, budget)
    for i, j in pairs:
        dims = brute_dims(pts[i], pts[j], q, budget)
        report.pairs.append({"m": i, "n": j, **dims})
    return report
