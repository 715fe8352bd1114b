"""Hom, derivations and Ext^1 as linear systems.

``Hom_k(M, N)`` is identified with ``dim M x dim N`` matrices and made an
``A``-``A``-bimodule by ``a . t . b = m_M(a) t m_N(b)``.  A derivation
satisfies ``d(ab) = m_M(a) d(b) + d(a) m_N(b)`` and is inner when
``d(a) = m_M(a) t - t m_N(a)``.  The middle term of the extension built from
``d`` is ``[[m_M, d], [0, m_N]]``, with ``N`` as the submodule.

Two routes compute derivations:

* the reference route (:func:`der_basis`) solves the Leibniz system on the
  full generator form (idempotents included) in total dimensions;
* the graded route (:func:`graded_der_basis`) only solves for derivations
  that vanish on the idempotents.  These take values ``D_a`` in the
  ``(source, target)`` block, and
  ``dim Der = dim Der_graded + dim M dim N - sum_v dM_v dN_v``.

All vectorizations are row-major, so ``vec(A X B) = kron(A, B^T) vec(X)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exactlin import nullspace, rank, solve_linear
from .point import ModulePoint, check_point, generator_form, require_same_space


class ConsistencyError(RuntimeError):
    """An internal identity failed; signals a broken computation."""


def _hstack(field, rows: int, blocks) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[1]]
    if not blocks:
        return field.zeros(rows, 0)
    return np.ascontiguousarray(np.concatenate(blocks, axis=1))


def _vstack(field, cols: int, blocks) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[0]]
    if not blocks:
        return field.zeros(0, cols)
    return np.ascontiguousarray(np.concatenate(blocks, axis=0))


def _combine(field, basis: np.ndarray, rng) -> np.ndarray:
    coeffs = field.random(basis.shape[1], 1, rng)
    return field.matmul(basis, coeffs)[:, 0]


# -- Hom ---------------------------------------------------------------------


@dataclass(frozen=True)
class HomBasis:
    """Basis of ``Hom_A(M, N)``; each element maps vertex name -> block."""

    source: ModulePoint
    target: ModulePoint
    elements: tuple
    matrix: np.ndarray  # columns are the vectorized basis elements

    @property
    def dim(self) -> int:
        return len(self.elements)

    def random_element(self, rng) -> dict:
        return _unvec_vertex_blocks(self.source, self.target, _combine(self.source.field, self.matrix, rng))


def _vertex_layout(m: ModulePoint, n: ModulePoint):
    out, pos = {}, 0
    for v in m.quiver.vertices:
        r, c = m.dim_at(v), n.dim_at(v)
        out[v] = (pos, r, c)
        pos += r * c
    return out, pos


def _unvec_vertex_blocks(m, n, vec) -> dict:
    layout, _ = _vertex_layout(m, n)
    return {v: np.ascontiguousarray(vec[pos : pos + r * c].reshape(r, c)) for v, (pos, r, c) in layout.items()}


def hom_system(m: ModulePoint, n: ModulePoint) -> np.ndarray:
    """Rows encode ``X^M_a theta_t - theta_s X^N_a = 0`` for every arrow."""
    F = m.field
    layout, total = _vertex_layout(m, n)
    q = m.quiver
    rows = []
    for a in q.arrows:
        xm, xn = m.mats[a.name], n.mats[a.name]
        ds, dt = xm.shape[0], xn.shape[1]
        block = F.zeros(ds * dt, total)
        ps, rs, cs = layout[a.source]
        pt, rt, ct = layout[a.target]
        if rt * ct:
            block[:, pt : pt + rt * ct] = F.add(block[:, pt : pt + rt * ct], F.kron(xm, F.eye(ct)))
        if rs * cs:
            block[:, ps : ps + rs * cs] = F.sub(block[:, ps : ps + rs * cs], F.kron(F.eye(rs), np.ascontiguousarray(xn.T)))
        rows.append(block)
    return _vstack(F, total, rows)


def hom_basis(m: ModulePoint, n: ModulePoint) -> HomBasis:
    require_same_space(m, n)
    F = m.field
    ns = nullspace(hom_system(m, n), F)
    elements = tuple(_unvec_vertex_blocks(m, n, ns[:, k]) for k in range(ns.shape[1]))
    return HomBasis(m, n, elements, ns)


def hom_dim(m: ModulePoint, n: ModulePoint) -> int:
    require_same_space(m, n)
    sysm = hom_system(m, n)
    return sysm.shape[1] - rank(sysm, m.field)


def end_dim(m: ModulePoint) -> int:
    return hom_dim(m, m)


def is_homomorphism(m: ModulePoint, n: ModulePoint, theta: dict) -> bool:
    F = m.field
    for a in m.quiver.arrows:
        lhs = F.matmul(m.mats[a.name], theta[a.target])
        rhs = F.matmul(theta[a.source], n.mats[a.name])
        if not np.array_equal(lhs, rhs):
            return False
    return True


def ungraded_hom_dim(m: ModulePoint, n: ModulePoint) -> int:
    """``dim Hom_A(M, N)`` from ``m_M(g) t = t m_N(g)`` over all generators."""
    require_same_space(m, n)
    F = m.field
    dm, dn = m.total_dim, n.total_dim
    blocks = []
    for gm, gn in zip(m.generator_matrices(), n.generator_matrices()):
        blocks.append(F.sub(F.kron(gm, F.eye(dn)), F.kron(F.eye(dm), np.ascontiguousarray(gn.T))))
    sysm = _vstack(F, dm * dn, blocks)
    return dm * dn - rank(sysm, F)


# -- derivations on the full generator form ------------------------------------


@dataclass(frozen=True)
class DerBasis:
    """Basis of ``Der(A, Hom_k(M, N))``; elements are per-generator matrices."""

    source: ModulePoint
    target: ModulePoint
    elements: tuple
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.elements)

    def random_element(self, rng) -> tuple:
        vec = _combine(self.source.field, self.matrix, rng)
        return _unvec_generators(self.source, self.target, vec)


def _unvec_generators(m, n, vec) -> tuple:
    dm, dn = m.total_dim, n.total_dim
    ngen = generator_form(m.presentation).n_generators
    return tuple(np.ascontiguousarray(vec[i * dm * dn : (i + 1) * dm * dn].reshape(dm, dn)) for i in range(ngen))


def _prefix_products(field, mats, word, size):
    out = [field.eye(size)]
    for g in word:
        out.append(field.matmul(out[-1], mats[g]))
    return out


def der_system(m: ModulePoint, n: ModulePoint) -> np.ndarray:
    """Linearized Leibniz conditions, one block row per generator-form relation."""
    F = m.field
    gf = generator_form(m.presentation)
    gm, gn = m.generator_matrices(), n.generator_matrices()
    dm, dn = m.total_dim, n.total_dim
    blk = dm * dn
    total = gf.n_generators * blk
    rows = []
    for poly in gf.relations:
        block = F.zeros(blk, total)
        for coeff, word in poly:
            if not word:
                continue
            c = F.element(coeff)
            pre = _prefix_products(F, gm, word, dm)
            suf = [F.eye(dn)]
            for h in reversed(word):
                suf.append(F.matmul(gn[h], suf[-1]))
            suf.reverse()
            # suf[k] is the product of word[k:] acting through N
            for j, g in enumerate(word):
                term = F.scale(c, F.kron(pre[j], np.ascontiguousarray(suf[j + 1].T)))
                block[:, g * blk : (g + 1) * blk] = F.add(block[:, g * blk : (g + 1) * blk], term)
        rows.append(block)
    return _vstack(F, total, rows)


def der_basis(m: ModulePoint, n: ModulePoint) -> DerBasis:
    require_same_space(m, n)
    F = m.field
    ns = nullspace(der_system(m, n), F)
    elements = tuple(_unvec_generators(m, n, ns[:, k]) for k in range(ns.shape[1]))
    return DerBasis(m, n, elements, ns)


def is_derivation(m: ModulePoint, n: ModulePoint, dval) -> bool:
    F = m.field
    vec = np.concatenate([np.asarray(x).reshape(-1) for x in dval]) if len(dval) else F.zeros(0, 1)[:, 0]
    sysm = der_system(m, n)
    if sysm.shape[1] != vec.shape[0]:
        raise ValueError("derivation value has the wrong shape")
    return F.is_zero(F.matmul(sysm, vec.reshape(-1, 1)))


def inner_derivation(m: ModulePoint, n: ModulePoint, theta) -> tuple:
    """Generator values of ``a -> m_M(a) theta - theta m_N(a)``."""
    F = m.field
    return tuple(
        F.sub(F.matmul(gm, theta), F.matmul(theta, gn)) for gm, gn in zip(m.generator_matrices(), n.generator_matrices())
    )


def inner_der_rank(m: ModulePoint, n: ModulePoint) -> int:
    """Rank of ``theta -> inner_derivation(theta)``, computed directly."""
    F = m.field
    dm, dn = m.total_dim, n.total_dim
    blocks = [
        F.sub(F.kron(gm, F.eye(dn)), F.kron(F.eye(dm), np.ascontiguousarray(gn.T)))
        for gm, gn in zip(m.generator_matrices(), n.generator_matrices())
    ]
    return rank(_vstack(F, dm * dn, blocks), F)


def inner_der_dim(m: ModulePoint, n: ModulePoint) -> int:
    return m.total_dim * n.total_dim - hom_dim(m, n)


# -- graded derivations (vanishing on idempotents) ---------------------------------


@dataclass(frozen=True)
class GradedDerBasis:
    """Derivations vanishing on the idempotents, as arrow -> block ``D_a``."""

    source: ModulePoint
    target: ModulePoint
    elements: tuple
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.elements)

    def random_element(self, rng) -> dict:
        return unvec_arrow_blocks(self.source, self.target, _combine(self.source.field, self.matrix, rng))


def arrow_layout(m: ModulePoint, n: ModulePoint):
    out, pos = {}, 0
    for a in m.quiver.arrows:
        r, c = m.dim_at(a.source), n.dim_at(a.target)
        out[a.name] = (pos, r, c)
        pos += r * c
    return out, pos


def unvec_arrow_blocks(m, n, vec) -> dict:
    layout, _ = arrow_layout(m, n)
    return {a: np.ascontiguousarray(vec[pos : pos + r * c].reshape(r, c)) for a, (pos, r, c) in layout.items()}


def vec_arrow_blocks(m, n, blocks) -> np.ndarray:
    F = m.field
    parts = [np.asarray(blocks[a.name]).reshape(-1) for a in m.quiver.arrows]
    return np.concatenate(parts) if parts else F.zeros(0, 1)[:, 0]


def graded_der_system(m: ModulePoint, n: ModulePoint) -> np.ndarray:
    """Linearized user relations in the unknown blocks ``D_a``."""
    F = m.field
    q = m.quiver
    layout, total = arrow_layout(m, n)
    rows = []
    for rel in m.presentation.relations:
        u, v = rel.ends(q)
        du, dv = m.dim_at(u), n.dim_at(v)
        block = F.zeros(du * dv, total)
        for coeff, path in rel.terms:
            c = F.element(coeff)
            for j, a in enumerate(path):
                pos, r, cc = layout[a]
                if not r * cc or not du * dv:
                    continue
                pre = m.path_matrix(path[:j]) if j else F.eye(du)
                suf = n.path_matrix(path[j + 1 :]) if j + 1 < len(path) else F.eye(dv)
                term = F.scale(c, F.kron(pre, np.ascontiguousarray(suf.T)))
                block[:, pos : pos + r * cc] = F.add(block[:, pos : pos + r * cc], term)
        rows.append(block)
    return _vstack(F, total, rows)


def graded_der_basis(m: ModulePoint, n: ModulePoint) -> GradedDerBasis:
    require_same_space(m, n)
    F = m.field
    ns = nullspace(graded_der_system(m, n), F)
    elements = tuple(unvec_arrow_blocks(m, n, ns[:, k]) for k in range(ns.shape[1]))
    return GradedDerBasis(m, n, elements, ns)


def graded_der_dim(m: ModulePoint, n: ModulePoint) -> int:
    require_same_space(m, n)
    sysm = graded_der_system(m, n)
    return sysm.shape[1] - rank(sysm, m.field)


def _vertex_pairing(m: ModulePoint, n: ModulePoint) -> int:
    return sum(x * y for x, y in zip(m.dims, n.dims))


def der_dim(m: ModulePoint, n: ModulePoint, method: str = "graded") -> int:
    """``dim Der(A, Hom_k(M, N))`` by either route."""
    if method == "full":
        require_same_space(m, n)
        sysm = der_system(m, n)
        return sysm.shape[1] - rank(sysm, m.field)
    if method == "graded":
        return graded_der_dim(m, n) + m.total_dim * n.total_dim - _vertex_pairing(m, n)
    raise ValueError(f"unknown method {method!r}")


def ext1_dim(m: ModulePoint, n: ModulePoint, method: str = "graded") -> int:
    """``dim Ext^1(M, N) = dim Der + dim Hom - dim M dim N``."""
    value = der_dim(m, n, method) + hom_dim(m, n) - m.total_dim * n.total_dim
    if value < 0:
        raise ConsistencyError(f"negative Ext dimension {value} for {m} and {n}")
    return value


# -- extensions ----------------------------------------------------------------


def extension_from_graded(m1: ModulePoint, m2: ModulePoint, blocks: dict) -> ModulePoint:
    """Middle term ``[[X1_a, D_a], [0, X2_a]]``; per vertex, ``M2`` is the last block."""
    require_same_space(m1, m2)
    F = m1.field
    q = m1.quiver
    dims = tuple(x + y for x, y in zip(m1.dims, m2.dims))
    mats = {}
    for a in q.arrows:
        x1, x2 = m1.mats[a.name], m2.mats[a.name]
        d = np.asarray(blocks[a.name]) if a.name in blocks else F.zeros(x1.shape[0], x2.shape[1])
        if d.shape != (x1.shape[0], x2.shape[1]):
            raise ValueError(f"derivation block for {a.name} has shape {d.shape}")
        top = np.concatenate([x1, d], axis=1)
        bottom = np.concatenate([F.zeros(x2.shape[0], x1.shape[1]), x2], axis=1)
        mats[a.name] = np.concatenate([top, bottom], axis=0)
    out = ModulePoint.create(m1.presentation, dims, mats, F)
    if check_point(out):
        raise ValueError("blocks do not form a derivation: the middle term violates relations")
    return out


def normalize_derivation(m1: ModulePoint, m2: ModulePoint, dval) -> dict:
    """Subtract an inner derivation so ``dval`` vanishes on idempotents.

    Returns the arrow blocks of the normalized derivation.
    """
    F = m1.field
    gf = generator_form(m1.presentation)
    d1, d2 = m1.total_dim, m2.total_dim
    if len(dval) != gf.n_generators or any(np.asarray(x).shape != (d1, d2) for x in dval):
        raise ValueError("derivation value has the wrong shape")
    if not is_derivation(m1, m2, dval):
        raise ValueError("value is not a derivation")
    g1, g2 = m1.generator_matrices(), m2.generator_matrices()
    n = gf.n_idempotents
    blocks = [F.sub(F.kron(g1[i], F.eye(d2)), F.kron(F.eye(d1), np.ascontiguousarray(g2[i].T))) for i in range(n)]
    rhs = np.concatenate([np.asarray(dval[i]).reshape(-1) for i in range(n)]).reshape(-1, 1)
    theta = solve_linear(_vstack(F, d1 * d2, blocks), rhs, F)
    if theta is None:
        raise ConsistencyError("derivation restricted to idempotents is not inner")
    theta = theta.reshape(d1, d2)
    inner = inner_derivation(m1, m2, theta)
    reduced = [F.sub(np.asarray(x), y) for x, y in zip(dval, inner)]
    q = m1.quiver
    out = {}
    for i, a in enumerate(q.arrows):
        full = reduced[n + i]
        out[a.name] = np.ascontiguousarray(full[m1.vertex_slice(a.source), m2.vertex_slice(a.target)])
    return out


def extension_from_derivation(m1: ModulePoint, m2: ModulePoint, dval) -> ModulePoint:
    """Middle term of ``0 -> M2 -> M -> M1 -> 0`` for a derivation ``A -> Hom_k(M1, M2)``.

    ``dval`` is either per-generator total matrices (a :class:`DerBasis`
    element) or a dict of graded arrow blocks.
    """
    require_same_space(m1, m2)
    if isinstance(dval, dict):
        return extension_from_graded(m1, m2, dval)
    return extension_from_graded(m1, m2, normalize_derivation(m1, m2, dval))
