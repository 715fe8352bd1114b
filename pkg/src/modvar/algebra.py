"""Quivers with relations and their generator/relation form.

Paths compose left to right: the word ``("a", "b")`` is "``a`` then ``b``"
and requires ``target(a) == source(b)``.  Modules are right modules, so a
path acts on row vectors by the left-to-right product of arrow matrices.

The presentation DSL::

    algebra <label>
    vertices: 1 2 3
    arrows: a: 1 -> 2 ; b: 2 -> 3
    relations: a*b ; 2*a*b - 1/3*a*b

Section lines may repeat (their entries accumulate), ``#`` starts a comment.
"""

from __future__ import annotations

import re
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .exactlin import parse_scalar

PathWord = tuple[str, ...]
DimensionVector = tuple[int, ...]


class PresentationError(ValueError):
    """Invalid presentation; ``line``/``column`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise PresentationError("duplicate vertex name")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise PresentationError("duplicate arrow name")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise PresentationError(f"arrow {a.name} uses an undeclared vertex")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise PresentationError(f"unknown arrow {name!r}")

    def vertex_index(self, v: str) -> int:
        try:
            return self.vertices.index(v)
        except ValueError:
            raise PresentationError(f"unknown vertex {v!r}") from None

    def path_ends(self, path: PathWord) -> tuple[str, str]:
        """Source and target of a composable nonempty path."""
        if not path:
            raise PresentationError("empty path")
        arrows = [self.arrow(x) for x in path]
        for a, b in zip(arrows, arrows[1:]):
            if a.target != b.source:
                raise PresentationError(f"path {'*'.join(path)} is not composable at {a.name}*{b.name}")
        return arrows[0].source, arrows[-1].target

    def path_vertices(self, path: PathWord) -> list[str]:
        arrows = [self.arrow(x) for x in path]
        return [arrows[0].source] + [a.target for a in arrows]


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths; zero coefficients are dropped."""

    terms: tuple[tuple[Fraction, PathWord], ...]

    @classmethod
    def build(cls, terms) -> Relation:
        acc: dict[PathWord, Fraction] = {}
        for c, path in terms:
            path = tuple(path)
            acc[path] = acc.get(path, Fraction(0)) + Fraction(c)
        return cls(tuple((c, p) for p, c in acc.items() if c != 0))

    def ends(self, quiver: Quiver) -> tuple[str, str]:
        ends = {quiver.path_ends(p) for _, p in self.terms}
        if len(ends) != 1:
            raise PresentationError("relation terms are not parallel")
        return ends.pop()


@dataclass(frozen=True)
class AlgebraPresentation:
    quiver: Quiver
    relations: tuple[Relation, ...] = ()
    label: str = "A"

    def __post_init__(self):
        for rel in self.relations:
            if not rel.terms:
                raise PresentationError("relation is identically zero")
            rel.ends(self.quiver)

    @property
    def has_relations(self) -> bool:
        return bool(self.relations)


Poly = tuple[tuple[Fraction, tuple[int, ...]], ...]


@dataclass(frozen=True)
class GeneratorForm:
    """Generators (vertex idempotents, then arrows) and relation polynomials.

    A polynomial is a tuple of ``(coefficient, word)`` with ``word`` a tuple of
    generator indices; the empty word is the unit.
    """

    generators: tuple[str, ...]
    n_idempotents: int
    relations: tuple[Poly, ...]
    presentation: AlgebraPresentation = field(repr=False, compare=False)

    @property
    def n_generators(self) -> int:
        return len(self.generators)


def to_generator_form(p: AlgebraPresentation) -> GeneratorForm:
    q = p.quiver
    n = q.n
    gens = tuple(f"e_{v}" for v in q.vertices) + tuple(a.name for a in q.arrows)
    arrow_index = {a.name: n + i for i, a in enumerate(q.arrows)}
    one = Fraction(1)
    rels: list[Poly] = []
    for u in range(n):
        for v in range(n):
            if u == v:
                rels.append(((one, (u, u)), (-one, (u,))))
            else:
                rels.append(((one, (u, v)),))
    rels.append(tuple((one, (v,)) for v in range(n)) + ((-one, ()),))
    for a in q.arrows:
        i = arrow_index[a.name]
        s, t = q.vertex_index(a.source), q.vertex_index(a.target)
        rels.append(((one, (s, i)), (-one, (i,))))
        rels.append(((one, (i, t)), (-one, (i,))))
    for rel in p.relations:
        rels.append(tuple((c, tuple(arrow_index[x] for x in path)) for c, path in rel.terms))
    return GeneratorForm(gens, n, tuple(rels), p)


def ringel_form(q: Quiver, a: Sequence[int], b: Sequence[int]) -> int:
    """``<a,b> = sum_v a_v b_v - sum_{arrows u->v} a_u b_v``."""
    if len(a) != q.n or len(b) != q.n:
        raise ValueError("dimension vectors do not match the quiver's vertices")
    out = sum(x * y for x, y in zip(a, b))
    for arr in q.arrows:
        out -= a[q.vertex_index(arr.source)] * b[q.vertex_index(arr.target)]
    return out


def dimension_vector(q: Quiver, values: Sequence[int]) -> DimensionVector:
    d = tuple(int(x) for x in values)
    if len(d) != q.n:
        raise ValueError(f"dimension vector has {len(d)} entries, quiver has {q.n} vertices")
    if any(x < 0 for x in d):
        raise ValueError("dimension vector entries must be nonnegative")
    return d


# -- DSL ---------------------------------------------------------------------

_NAME = r"[^\W\d]\w*"
_TOKEN_RE = re.compile(rf"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<name>{_NAME})|(?P<op>[*+\-]))")


def _tokenize_relation(text: str, line: int, col0: int):
    pos = 0
    out = []
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise PresentationError(f"unexpected character {text[pos:].lstrip()[:1]!r}", line, col0 + pos + 1)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), col0 + start + 1))
        pos = m.end()
    return out


def _parse_relation(text: str, line: int, col0: int) -> list[tuple[Fraction, PathWord, int]]:
    toks = _tokenize_relation(text, line, col0)
    if not toks:
        raise PresentationError("empty relation", line, col0 + 1)
    terms = []
    i = 0
    sign = 1
    expect_term = True
    while i < len(toks):
        kind, val, col = toks[i]
        if expect_term:
            if kind == "op" and val in "+-":
                if val == "-":
                    sign = -sign
                i += 1
                continue
            coeff = Fraction(1)
            if kind == "num":
                coeff = parse_scalar(val.replace(" ", ""))
                i += 1
                if i >= len(toks) or toks[i][1] != "*":
                    raise PresentationError("coefficient must be followed by '*'", line, col)
                i += 1
            path = []
            while True:
                if i >= len(toks) or toks[i][0] != "name":
                    c = toks[i][2] if i < len(toks) else col
                    raise PresentationError("expected an arrow name", line, c)
                path.append(toks[i][1])
                i += 1
                if i < len(toks) and toks[i][1] == "*":
                    i += 1
                    continue
                break
            terms.append((sign * coeff, tuple(path), col))
            sign = 1
            expect_term = False
        else:
            if kind == "op" and val in "+-":
                sign = -1 if val == "-" else 1
                expect_term = True
                i += 1
            else:
                raise PresentationError(f"expected '+' or '-', got {val!r}", line, col)
    if expect_term:
        raise PresentationError("relation ends with an operator", line, toks[-1][2])
    return terms


def parse_presentation(text: str) -> AlgebraPresentation:
    label = None
    vertices: list[tuple[str, int, int]] = []
    arrows: list[tuple[str, str, str, int, int]] = []
    relations: list[tuple[str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        stripped = body.lstrip()
        indent = len(body) - len(stripped)
        if label is None:
            m = re.fullmatch(r"algebra\s+(\S+)\s*", stripped)
            if not m:
                raise PresentationError("expected 'algebra <label>'", lineno, indent + 1)
            label = m.group(1)
            continue
        m = re.match(r"(vertices|arrows|relations)\s*:", stripped)
        if not m:
            raise PresentationError("expected 'vertices:', 'arrows:' or 'relations:'", lineno, indent + 1)
        section = m.group(1)
        rest = stripped[m.end():]
        col0 = indent + m.end()
        if section == "vertices":
            for vm in re.finditer(r"\S+", rest):
                if not re.fullmatch(r"\w+", vm.group()):
                    raise PresentationError(f"bad vertex name {vm.group()!r}", lineno, col0 + vm.start() + 1)
                vertices.append((vm.group(), lineno, col0 + vm.start() + 1))
            continue
        offset = 0
        for chunk in rest.split(";"):
            ccol = col0 + offset
            offset += len(chunk) + 1
            if not chunk.strip():
                continue
            if section == "arrows":
                am = re.fullmatch(rf"\s*({_NAME})\s*:\s*(\w+)\s*->\s*(\w+)\s*", chunk)
                if not am:
                    lead = len(chunk) - len(chunk.lstrip())
                    raise PresentationError("expected 'name: source -> target'", lineno, ccol + lead + 1)
                arrows.append((am.group(1), am.group(2), am.group(3), lineno, ccol + am.start(1) + 1))
            else:
                relations.append((chunk, lineno, ccol))
    if label is None:
        raise PresentationError("missing 'algebra <label>' header", 1, 1)
    vnames = [v for v, _, _ in vertices]
    seen = set()
    for v, ln, col in vertices:
        if v in seen:
            raise PresentationError(f"duplicate vertex {v!r}", ln, col)
        seen.add(v)
    arrow_objs = []
    anames = set()
    for name, s, t, ln, col in arrows:
        if name in anames:
            raise PresentationError(f"duplicate arrow {name!r}", ln, col)
        for x in (s, t):
            if x not in seen:
                raise PresentationError(f"unknown vertex {x!r} in arrow {name}", ln, col)
        anames.add(name)
        arrow_objs.append(Arrow(name, s, t))
    quiver = Quiver(tuple(vnames), tuple(arrow_objs))
    rel_objs = []
    for chunk, ln, ccol in relations:
        terms = _parse_relation(chunk, ln, ccol)
        ends = set()
        for _, path, col in terms:
            for x in path:
                if x not in anames:
                    raise PresentationError(f"unknown arrow {x!r}", ln, col)
            try:
                ends.add(quiver.path_ends(path))
            except PresentationError as exc:
                raise PresentationError(str(exc), ln, col) from None
        if len(ends) > 1:
            raise PresentationError("relation terms are not parallel", ln, ccol + 1)
        rel = Relation.build((c, p) for c, p, _ in terms)
        if not rel.terms:
            raise PresentationError("relation is identically zero", ln, ccol + 1)
        rel_objs.append(rel)
    return AlgebraPresentation(quiver, tuple(rel_objs), label)


def _format_term(c: Fraction, path: PathWord, first: bool) -> str:
    word = "*".join(path)
    mag = abs(c)
    body = word if mag == 1 else f"{mag}*{word}"
    if first:
        return f"-{body}" if c < 0 else body
    return f"- {body}" if c < 0 else f"+ {body}"


def format_presentation(p: AlgebraPresentation) -> str:
    q = p.quiver
    lines = [f"algebra {p.label}", "vertices: " + " ".join(q.vertices)]
    lines.append("arrows: " + " ; ".join(f"{a.name}: {a.source} -> {a.target}" for a in q.arrows))
    rels = []
    for rel in p.relations:
        rels.append(" ".join(_format_term(c, path, i == 0) for i, (c, path) in enumerate(rel.terms)))
    lines.append("relations: " + " ; ".join(rels))
    return "\n".join(lines) + "\n"


def load_presentation(path) -> AlgebraPresentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())
