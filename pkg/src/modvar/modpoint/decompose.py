"""Direct-sum decomposition by Fitting splits of random endomorphisms.

For an endomorphism ``f`` of a module of total dimension ``D`` the module is
``ker(f^D) + im(f^D)``, both arrow-stable.  A random endomorphism of a
decomposable module over a large field usually has a characteristic
polynomial with at least two distinct irreducible factors; applying the
Fitting split to ``q(f)`` for one such factor ``q`` then separates the
module.  A module is declared indecomposable after ``trials`` endomorphisms
fail to split it, which is a heuristic verdict unless ``End`` is
one-dimensional.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy
from sympy.polys.galoistools import gf_factor
from sympy.polys.domains import ZZ

from ..exactlin import PrimeField, inverse, is_invertible, left_nullspace, rank, row_space
from .linear import end_dim, hom_basis, hom_dim, is_homomorphism
from .point import ModulePoint, direct_sum, require_same_space

DEFAULT_TRIALS = 8


@dataclass(frozen=True)
class Split:
    """``basis[v]`` rows span the image part then the kernel part at ``v``."""

    image: ModulePoint
    kernel: ModulePoint
    basis: dict


class Whole:
    """Marker: the endomorphism was nilpotent or invertible."""

    def __repr__(self):
        return "Whole"


WHOLE = Whole()


def _mat_power(F, m, k):
    out = F.eye(m.shape[0])
    base = m
    while k:
        if k & 1:
            out = F.matmul(out, base)
        base = F.matmul(base, base)
        k >>= 1
    return out


def _restrict(m: ModulePoint, basis: dict, rows: dict) -> ModulePoint:
    """Module on the row spans ``rows[v]`` of an arrow-stable subspace."""
    F = m.field
    q = m.quiver
    mats = {}
    for a in q.arrows:
        p_s, p_t = basis[a.source], basis[a.target]
        conj = F.matmul(F.matmul(p_s, m.mats[a.name]), inverse(p_t, F)) if p_t.shape[0] else F.zeros(p_s.shape[0], 0)
        rs, rt = rows[a.source], rows[a.target]
        mats[a.name] = np.ascontiguousarray(conj[rs][:, rt])
    dims = [rows[v].stop - rows[v].start for v in q.vertices]
    return ModulePoint.create(m.presentation, dims, mats, F)


def fitting_split(m: ModulePoint, f: dict):
    """Fitting decomposition for the endomorphism ``f`` (vertex -> block).

    Returns :class:`Split` or :data:`WHOLE`.
    """
    F = m.field
    q = m.quiver
    if not is_homomorphism(m, m, f):
        raise ValueError("f is not an endomorphism")
    big = m.total_dim
    im_rows, ker_rows, basis = {}, {}, {}
    im_total = 0
    for v in q.vertices:
        dv = m.dim_at(v)
        power = _mat_power(F, np.asarray(f[v]), big) if dv else F.zeros(0, 0)
        im = row_space(power, F) if dv else F.zeros(0, 0)
        ker = left_nullspace(power, F) if dv else F.zeros(0, 0)
        if im.shape[0] + ker.shape[0] != dv:
            raise RuntimeError("Fitting decomposition has the wrong dimension")
        basis[v] = np.ascontiguousarray(np.concatenate([im, ker], axis=0)) if dv else F.zeros(0, 0)
        im_rows[v] = slice(0, im.shape[0])
        ker_rows[v] = slice(im.shape[0], dv)
        im_total += im.shape[0]
    if im_total in (0, big):
        return WHOLE
    for a in q.arrows:
        p_s, p_t = basis[a.source], basis[a.target]
        if not p_s.shape[0] or not p_t.shape[0]:
            continue
        conj = F.matmul(F.matmul(p_s, m.mats[a.name]), inverse(p_t, F))
        if not F.is_zero(conj[im_rows[a.source]][:, ker_rows[a.target]]) or not F.is_zero(
            conj[ker_rows[a.source]][:, im_rows[a.target]]
        ):
            raise RuntimeError("Fitting subspaces are not arrow-stable")
    return Split(_restrict(m, basis, im_rows), _restrict(m, basis, ker_rows), basis)


def _total_matrix(m: ModulePoint, f: dict):
    F = m.field
    d = m.total_dim
    out = F.zeros(d, d)
    for v in m.quiver.vertices:
        sl = m.vertex_slice(v)
        out[sl, sl] = f[v]
    return out


def _irreducible_factors(m: ModulePoint, f: dict) -> list[list]:
    """Distinct irreducible factors of the characteristic polynomial of ``f``."""
    F = m.field
    total = _total_matrix(m, f)
    if isinstance(F, PrimeField):
        from sympy.polys.matrices import DomainMatrix

        dom = sympy.GF(F.p)
        dm = DomainMatrix([[dom(int(x)) for x in row] for row in total], total.shape, dom)
        coeffs = [int(c) % F.p for c in dm.charpoly()]
        _, facs = gf_factor(coeffs, F.p, ZZ)
        return [[int(c) % F.p for c in g] for g, _ in facs]
    x = sympy.Symbol("x")
    poly = sympy.Matrix(total.tolist()).charpoly(x)
    _, facs = sympy.factor_list(poly.as_expr(), x)
    out = []
    for g, _ in facs:
        cs = [sympy.Rational(c) for c in sympy.Poly(g, x).all_coeffs()]
        out.append([Fraction(int(c.p), int(c.q)) for c in cs])
    return out


def _poly_at(m: ModulePoint, coeffs, f: dict) -> dict:
    """Evaluate the polynomial (highest degree first) at ``f`` by Horner."""
    F = m.field
    out = {}
    for v in m.quiver.vertices:
        blk = np.asarray(f[v])
        acc = F.zeros(*blk.shape)
        for c in coeffs:
            acc = F.add(F.matmul(acc, blk), F.scale(c, F.eye(blk.shape[0])))
        out[v] = acc
    return out


def split_once(m: ModulePoint, rng, trials: int = DEFAULT_TRIALS, hom=None):
    """Try up to ``trials`` random endomorphisms; return a :class:`Split` or ``None``."""
    if m.total_dim <= 1:
        return None
    hb = hom or hom_basis(m, m)
    if hb.dim <= 1:
        return None
    for _ in range(trials):
        f = hb.random_element(rng)
        res = fitting_split(m, f)
        if isinstance(res, Split):
            return res
        factors = _irreducible_factors(m, f)
        if len(factors) < 2:
            continue
        res = fitting_split(m, _poly_at(m, factors[0], f))
        if isinstance(res, Split):
            return res
    return None


def is_isomorphic(m: ModulePoint, n: ModulePoint, rng, trials: int = DEFAULT_TRIALS):
    """``(True, witness)`` with an exactly verified isomorphism, else ``(False, None)``.

    A negative answer after the dimension checks is probabilistic: over a
    field of size ``q`` a random element of ``Hom(M, N)`` is invertible with
    probability at least ``1 - dim M / q`` when ``M`` and ``N`` are isomorphic.
    """
    require_same_space(m, n)
    F = m.field
    if m.dims != n.dims:
        return False, None
    if m.total_dim == 0:
        return True, {v: F.zeros(0, 0) for v in m.quiver.vertices}
    e = end_dim(m)
    if end_dim(n) != e or hom_dim(m, n) != e:
        return False, None
    hb = hom_basis(m, n)
    for _ in range(trials):
        theta = hb.random_element(rng)
        if all(is_invertible(theta[v], F) for v in m.quiver.vertices) and is_homomorphism(m, n, theta):
            return True, theta
    return False, None


@dataclass
class Summand:
    module: ModulePoint
    multiplicity: int
    end_dim: int
    certified: bool  # End is one-dimensional, so indecomposability is exact

    @property
    def dims(self):
        return self.module.dims


@dataclass
class DecompositionResult:
    summands: list
    pieces: list = field(repr=False)
    basis: dict = field(repr=False)  # rows: bases of the pieces, in piece order
    zero: ModulePoint | None = field(default=None, repr=False)  # set when the input is zero

    def dimension_vectors(self) -> list[tuple]:
        out = []
        for s in self.summands:
            out.extend([s.dims] * s.multiplicity)
        return sorted(out)

    def reassemble(self) -> ModulePoint:
        if not self.summands:
            return self.zero
        mods = []
        for s in self.summands:
            mods.extend([s.module] * s.multiplicity)
        return direct_sum(mods)


def decompose(m: ModulePoint, rng, trials: int = DEFAULT_TRIALS) -> DecompositionResult:
    F = m.field
    q = m.quiver
    if m.total_dim == 0:
        return DecompositionResult([], [], {v: F.zeros(0, 0) for v in q.vertices}, m)
    # each stack entry: module and its basis rows in original coordinates
    stack = [(m, {v: F.eye(m.dim_at(v)) for v in q.vertices})]
    pieces = []
    while stack:
        mod, rows = stack.pop()
        res = split_once(mod, rng, trials)
        if res is None:
            pieces.append((mod, rows))
            continue
        for part, sl in ((res.image, 0), (res.kernel, 1)):
            sub = {}
            for v in q.vertices:
                k = res.image.dim_at(v)
                local = res.basis[v][:k] if sl == 0 else res.basis[v][k:]
                sub[v] = F.matmul(local, rows[v]) if local.shape[0] else F.zeros(0, m.dim_at(v))
            stack.append((part, sub))
    pieces.sort(key=lambda pr: (pr[0].dims, pr[0].total_dim))
    basis = {v: np.ascontiguousarray(np.concatenate([rows[v] for _, rows in pieces], axis=0)) for v in q.vertices}
    summands: list[Summand] = []
    for mod, _ in pieces:
        for s in summands:
            if is_isomorphic(s.module, mod, rng, trials)[0]:
                s.multiplicity += 1
                break
        else:
            e = end_dim(mod)
            summands.append(Summand(mod, 1, e, e == 1))
    return DecompositionResult(summands, [p for p, _ in pieces], basis)


def check_decomposition(m: ModulePoint, result: DecompositionResult) -> bool:
    """Exact check that ``result.basis`` conjugates ``m`` to the sum of pieces."""
    F = m.field
    target = direct_sum(result.pieces) if result.pieces else None
    if target is None:
        return m.total_dim == 0
    for v in m.quiver.vertices:
        if result.basis[v].shape[0] and rank(result.basis[v], F) != m.dim_at(v):
            return False
    return m.conjugate(result.basis) == target
