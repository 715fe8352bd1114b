"""Family expressions and their s-expression syntax.

::

    (sum (orbit "m1.mod") (extfam (repspace 1 1) (slice (0 1 1 1) zero: g)))

Forms: ``(orbit "path.mod")`` or ``(orbit (simple v))``, ``(repspace d1 ...)``,
``(slice (d1 ...) zero: a b ...)``, ``(sum f ...)``, ``(extfam quotient sub)``.
Any form accepts ``label: NAME``.  Module paths are relative to the family
file.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

from ..algebra import AlgebraPresentation
from ..exactlin import DEFAULT_FIELD, Field
from ..modpoint.io import load_module
from ..modpoint.point import ModulePoint, simple_module


class FamilyError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Orbit:
    point: ModulePoint
    label: str | None = None

    @property
    def presentation(self):
        return self.point.presentation

    @property
    def field(self):
        return self.point.field

    @property
    def dims(self):
        return self.point.dims


@dataclass(frozen=True, eq=False)
class RepSpace:
    presentation: AlgebraPresentation
    dims: tuple
    field: Field = DEFAULT_FIELD
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(x) for x in self.dims))
        if len(self.dims) != self.presentation.quiver.n or min(self.dims, default=0) < 0:
            raise FamilyError(f"bad dimension vector {self.dims}")
        if self.presentation.relations:
            raise FamilyError("repspace needs a presentation without relations; use a slice")


@dataclass(frozen=True, eq=False)
class Slice:
    """Points whose arrows in ``zeroed`` vanish and the rest are arbitrary."""

    presentation: AlgebraPresentation
    dims: tuple
    zeroed: frozenset = frozenset()
    field: Field = DEFAULT_FIELD
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(x) for x in self.dims))
        object.__setattr__(self, "zeroed", frozenset(self.zeroed))
        q = self.presentation.quiver
        if len(self.dims) != q.n or min(self.dims, default=0) < 0:
            raise FamilyError(f"bad dimension vector {self.dims}")
        names = {a.name for a in q.arrows}
        unknown = self.zeroed - names
        if unknown:
            raise FamilyError(f"unknown arrows {sorted(unknown)}")

    def free_arrows(self):
        return [a for a in self.presentation.quiver.arrows if a.name not in self.zeroed]


@dataclass(frozen=True, eq=False)
class Sum:
    parts: tuple
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise FamilyError("empty sum")
        _check_shared(self.parts)

    @property
    def presentation(self):
        return self.parts[0].presentation

    @property
    def field(self):
        return self.parts[0].field

    @property
    def dims(self):
        return tuple(map(sum, zip(*(p.dims for p in self.parts))))


@dataclass(frozen=True, eq=False)
class ExtFam:
    """Middle terms of extensions with quotient in ``quotient`` and submodule in ``sub``."""

    quotient: object
    sub: object
    label: str | None = None

    def __post_init__(self):
        _check_shared((self.quotient, self.sub))

    @property
    def presentation(self):
        return self.quotient.presentation

    @property
    def field(self):
        return self.quotient.field

    @property
    def dims(self):
        return tuple(a + b for a, b in zip(self.quotient.dims, self.sub.dims))


FamilyExpr = Orbit | RepSpace | Slice | Sum | ExtFam


def _check_shared(parts):
    p0 = parts[0]
    for p in parts[1:]:
        if p.presentation != p0.presentation or p.field != p0.field:
            raise FamilyError("family parts live over different presentations or fields")


def family_label(f, default: str) -> str:
    return f.label if f.label else default


def describe(f) -> str:
    """Canonical text form (module points are shown by their dimension vector)."""
    lab = f" label: {f.label}" if f.label else ""
    if isinstance(f, Orbit):
        return f"(orbit <{' '.join(map(str, f.dims))}>{lab})"
    if isinstance(f, RepSpace):
        return f"(repspace {' '.join(map(str, f.dims))}{lab})"
    if isinstance(f, Slice):
        z = f" zero: {' '.join(sorted(f.zeroed))}" if f.zeroed else ""
        return f"(slice ({' '.join(map(str, f.dims))}){z}{lab})"
    if isinstance(f, Sum):
        return f"(sum {' '.join(describe(p) for p in f.parts)}{lab})"
    if isinstance(f, ExtFam):
        return f"(extfam {describe(f.quotient)} {describe(f.sub)}{lab})"
    raise TypeError(f"not a family: {f!r}")


# -- parser ------------------------------------------------------------------

_TOKEN = re.compile(r'\s*(?:(?P<open>\()|(?P<close>\))|"(?P<str>[^"]*)"|(?P<kw>[^\s()":]+:)|(?P<atom>[^\s()"]+))')


def _tokenize(text: str):
    text = "\n".join(line.split(";", 1)[0] for line in text.splitlines())
    pos, out = 0, []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            return out
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FamilyError(f"unexpected character {text[pos]!r} at offset {pos}")
        kind = m.lastgroup
        out.append((kind, m.group(kind), pos))
        pos = m.end()


def _read(tokens, i):
    kind, val, pos = tokens[i]
    if kind == "open":
        items, i = [], i + 1
        while True:
            if i >= len(tokens):
                raise FamilyError(f"unclosed '(' at offset {pos}")
            if tokens[i][0] == "close":
                return items, i + 1
            item, i = _read(tokens, i)
            items.append(item)
    if kind == "close":
        raise FamilyError(f"unexpected ')' at offset {pos}")
    return (kind, val), i + 1


def _split_keywords(items):
    """Positional items and ``kw: values...`` groups."""
    pos, kws, cur = [], {}, None
    for it in items:
        if isinstance(it, tuple) and it[0] == "kw":
            cur = it[1][:-1]
            if cur in kws:
                raise FamilyError(f"duplicate keyword {cur}:")
            kws[cur] = []
        elif cur is not None:
            kws[cur].append(it)
        else:
            pos.append(it)
    return pos, kws


def _atom(it, what: str) -> str:
    if not isinstance(it, tuple) or it[0] not in ("atom", "str"):
        raise FamilyError(f"expected {what}")
    return it[1]


def _ints(items, what: str) -> tuple:
    try:
        return tuple(int(_atom(x, what)) for x in items)
    except ValueError:
        raise FamilyError(f"expected integers for {what}") from None


def _build(node, presentation, field, base_dir):
    if not isinstance(node, list) or not node:
        raise FamilyError("expected a family form '( ... )'")
    head = _atom(node[0], "a form name")
    pos, kws = _split_keywords(node[1:])
    label = None
    if "label" in kws:
        if len(kws["label"]) != 1:
            raise FamilyError("label: takes one value")
        label = _atom(kws["label"][0], "a label")
    extra = set(kws) - {"label", "zero"}
    if extra or ("zero" in kws and head != "slice"):
        raise FamilyError(f"unknown keyword for {head}: {sorted(extra) or ['zero']}")
    if head == "orbit":
        if len(pos) != 1:
            raise FamilyError("orbit takes one module")
        src = pos[0]
        if isinstance(src, list):
            if len(src) != 2 or _atom(src[0], "simple") != "simple":
                raise FamilyError("orbit source must be a path or (simple v)")
            point = simple_module(presentation, _atom(src[1], "a vertex"), field)
        else:
            path = _atom(src, "a module path")
            if base_dir and not os.path.isabs(path):
                path = os.path.join(base_dir, path)
            point = load_module(path, presentation, field)
        return Orbit(point, label)
    if head == "repspace":
        return RepSpace(presentation, _ints(pos, "repspace dimensions"), field, label)
    if head == "slice":
        if len(pos) != 1 or not isinstance(pos[0], list):
            raise FamilyError("slice takes a dimension vector '(d1 ...)'")
        zero = frozenset(_atom(x, "an arrow name") for x in kws.get("zero", []))
        return Slice(presentation, _ints(pos[0], "slice dimensions"), zero, field, label)
    if head == "sum":
        return Sum(tuple(_build(x, presentation, field, base_dir) for x in pos), label)
    if head == "extfam":
        if len(pos) != 2:
            raise FamilyError("extfam takes a quotient family and a sub family")
        return ExtFam(_build(pos[0], presentation, field, base_dir), _build(pos[1], presentation, field, base_dir), label)
    raise FamilyError(f"unknown family form {head!r}")


def parse_family(text: str, presentation: AlgebraPresentation, field: Field = DEFAULT_FIELD, base_dir=None):
    tokens = _tokenize(text)
    if not tokens:
        raise FamilyError("empty family expression")
    node, i = _read(tokens, 0)
    if i != len(tokens):
        raise FamilyError(f"trailing input at offset {tokens[i][2]}")
    return _build(node, presentation, field, base_dir)


def load_family(path, presentation, field: Field = DEFAULT_FIELD):
    with open(path, encoding="utf-8") as fh:
        return parse_family(fh.read(), presentation, field, os.path.dirname(os.path.abspath(path)))


