"""Presentations and random module generators shared by the tests."""

from __future__ import annotations

import itertools

import numpy as np

from modvar.algebra import parse_presentation
from modvar.exactlin import DEFAULT_FIELD
from modvar.family import ExtFam, Slice, sample, slice_valid
from modvar.modpoint import ModulePoint, direct_sum

SOURCES = {
    "dual": "algebra dual\nvertices: 1\narrows: x: 1 -> 1\nrelations: x*x\n",
    "loop": "algebra loop\nvertices: 1\narrows: x: 1 -> 1\nrelations:\n",
    "a2": "algebra a2\nvertices: 1 2\narrows: a: 1 -> 2\nrelations:\n",
    "ss": "algebra ss\nvertices: 1 2\narrows:\nrelations:\n",
    "kronecker": "algebra kronecker\nvertices: 1 2\narrows: a: 1 -> 2 ; b: 1 -> 2\nrelations:\n",
    "chain4": (
        "algebra chain4\nvertices: 1 2 3 4\n"
        "arrows: al: 1 -> 2 ; be: 2 -> 3 ; ga: 3 -> 4\nrelations: al*be ; be*ga\n"
    ),
    "twoloops": (
        "algebra twoloops\nvertices: 1 2\n"
        "arrows: al: 1 -> 1 ; be: 1 -> 1 ; ga: 1 -> 2\nrelations: al*ga ; be*ga\n"
    ),
    "twocycle": "algebra twocycle\nvertices: 1 2\narrows: al: 1 -> 2 ; be: 2 -> 1\nrelations: al*be ; be*al\n",
    "comm": (
        "algebra comm\nvertices: 1 2 3 4\n"
        "arrows: a: 1 -> 2 ; b: 2 -> 4 ; c: 1 -> 3 ; d: 3 -> 4\nrelations: a*b - c*d\n"
    ),
}

PRES = {name: parse_presentation(text) for name, text in SOURCES.items()}

# presentations with relations used for randomized cross-checks
WITH_RELATIONS = ("dual", "chain4", "twoloops", "twocycle", "comm")


def module(name: str, dims, mats=None, field=DEFAULT_FIELD) -> ModulePoint:
    return ModulePoint.create(PRES[name], dims, mats or {}, field)


def valid_zero_sets(pres, dims):
    """Arrow subsets whose zeroing gives a linear family inside the variety."""
    names = [a.name for a in pres.quiver.arrows]
    out = []
    for k in range(len(names) + 1):
        for zs in itertools.combinations(names, k):
            if slice_valid(Slice(pres, dims, frozenset(zs)), samples=1):
                out.append(frozenset(zs))
    return out


def random_dims(pres, rng, hi=2, total_max=None):
    while True:
        d = tuple(int(x) for x in rng.integers(0, hi + 1, size=pres.quiver.n))
        if total_max is None or sum(d) <= total_max:
            return d


def random_module(pres, rng, hi=2, field=DEFAULT_FIELD, extend=True) -> ModulePoint:
    """A random valid point: a generic point of a linear slice, sometimes extended by another."""
    d = random_dims(pres, rng, hi)
    zs = valid_zero_sets(pres, d)
    # prefer the largest valid slices so the points are not trivial
    zs.sort(key=len)
    small = [z for z in zs if len(z) == len(zs[0])]
    z = small[int(rng.integers(len(small)))]
    fam = Slice(pres, d, z, field)
    if extend and rng.random() < 0.4:
        d2 = random_dims(pres, rng, 1)
        zs2 = valid_zero_sets(pres, d2)
        zs2.sort(key=len)
        fam = ExtFam(fam, Slice(pres, d2, zs2[0], field))
    return sample(fam, rng)


def random_sum(pres, rng, parts=(2, 3), hi=1) -> tuple:
    k = int(rng.integers(parts[0], parts[1] + 1))
    mods = [random_module(pres, rng, hi=hi) for _ in range(k)]
    mods = [m for m in mods if m.total_dim]
    while not mods:
        mods = [m for m in [random_module(pres, rng, hi=1, extend=False)] if m.total_dim]
    return mods, direct_sum(mods)


def rng(seed=0):
    return np.random.default_rng(seed)
