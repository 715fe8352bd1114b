"""Text format for module points.

::

    module dual over GF(2147483647)
    dim 1 = 2
    arrow x
    0 1
    0 0

Each ``arrow`` header is followed by ``d_source`` rows of ``d_target``
scalars (integers or ``p/q``).  Arrows with an empty matrix take no rows.
Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

from ..algebra import AlgebraPresentation, PresentationError
from ..exactlin import field_from_name, parse_scalar
from .point import ModulePoint, check_point


class ModuleFormatError(ValueError):
    pass


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_module(text: str, presentation: AlgebraPresentation, field=None, validate: bool = True) -> ModulePoint:
    """Read a module point; ``field`` overrides the header's field when given."""
    lines = list(_lines(text))
    if not lines:
        raise ModuleFormatError("empty module file")
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 4 or parts[0] != "module" or parts[2] != "over":
        raise ModuleFormatError(f"line {no}: expected 'module <label> over <field>'")
    if parts[1] != presentation.label:
        raise ModuleFormatError(f"line {no}: module is over {parts[1]!r}, not {presentation.label!r}")
    F = field if field is not None else field_from_name(parts[3])
    q = presentation.quiver
    dims = {}
    k = 1
    while k < len(lines) and lines[k][1].startswith("dim "):
        no, line = lines[k]
        body = line[4:]
        if "=" not in body:
            raise ModuleFormatError(f"line {no}: expected 'dim v = n'")
        v, n = (s.strip() for s in body.split("=", 1))
        if v not in q.vertices:
            raise ModuleFormatError(f"line {no}: unknown vertex {v!r}")
        if v in dims:
            raise ModuleFormatError(f"line {no}: duplicate dimension for {v!r}")
        try:
            dims[v] = int(n)
        except ValueError:
            raise ModuleFormatError(f"line {no}: bad dimension {n!r}") from None
        k += 1
    dvec = [dims.get(v, 0) for v in q.vertices]
    mats = {}
    while k < len(lines):
        no, line = lines[k]
        parts = line.split()
        if len(parts) != 2 or parts[0] != "arrow":
            raise ModuleFormatError(f"line {no}: expected 'arrow <name>'")
        name = parts[1]
        try:
            a = q.arrow(name)
        except PresentationError:
            raise ModuleFormatError(f"line {no}: unknown arrow {name!r}") from None
        if name in mats:
            raise ModuleFormatError(f"line {no}: duplicate arrow {name!r}")
        rows = dvec[q.vertex_index(a.source)]
        cols = dvec[q.vertex_index(a.target)]
        k += 1
        data = []
        for _ in range(rows if cols else 0):
            if k >= len(lines):
                raise ModuleFormatError(f"arrow {name}: expected {rows} rows")
            rno, rline = lines[k]
            try:
                row = [parse_scalar(tok) for tok in rline.split()]
            except ValueError as exc:
                raise ModuleFormatError(f"line {rno}: {exc}") from None
            if len(row) != cols:
                raise ModuleFormatError(f"line {rno}: expected {cols} entries, got {len(row)}")
            data.append(row)
            k += 1
        mats[name] = F.array(data, shape=(rows, cols)) if data else F.zeros(rows, cols)
    m = ModulePoint.create(presentation, dvec, mats, F)
    if validate:
        bad = check_point(m)
        if bad:
            raise ModuleFormatError(f"module violates {len(bad)} relation(s)")
    return m


def format_module(m: ModulePoint) -> str:
    F = m.field
    q = m.quiver
    lines = [f"module {m.presentation.label} over {F.name}"]
    lines += [f"dim {v} = {m.dim_at(v)}" for v in q.vertices]
    for a in q.arrows:
        lines.append(f"arrow {a.name}")
        x = m.mats[a.name]
        if x.shape[1]:
            lines += [" ".join(F.format(e) for e in row) for row in x]
    return "\n".join(lines) + "\n"


def load_module(path, presentation: AlgebraPresentation, field=None, validate: bool = True) -> ModulePoint:
    with open(path, encoding="utf-8") as fh:
        return parse_module(fh.read(), presentation, field, validate)


def save_module(path, m: ModulePoint) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_module(m))
