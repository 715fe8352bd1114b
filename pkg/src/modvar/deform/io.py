"""Text format for truncated points.

::

    tmodule dual over GF(2147483647) dim 2 trunc 4
    gen x
    0 0
    0,1 0

Every matrix entry is a comma-separated coefficient list ``c0,c1,...`` of
the series ``c0 + c1 T + ...`` (missing trailing coefficients are zero).
Generators are the vertex idempotents ``e_<v>`` and the arrows.  An
optional ``grading n1 n2 ...`` line places vertex blocks consecutively, and
idempotents left out then act as constant block identities; with a single
vertex the grading defaults to the whole space.  Omitted arrows are zero.
"""

from __future__ import annotations

from ..algebra import AlgebraPresentation
from ..exactlin import field_from_name, parse_scalar
from ..modpoint.point import ModulePoint, generator_form
from .lemma import TruncatedPoint
from .series import TruncMat


class TruncFormatError(ValueError):
    pass


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_truncated(text: str, presentation: AlgebraPresentation, field=None, order: int | None = None) -> TruncatedPoint:
    """Read a truncated point; ``order`` (if given) re-truncates or pads the series."""
    lines = list(_lines(text))
    if not lines:
        raise TruncFormatError("empty file")
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 8 or parts[0] != "tmodule" or parts[2] != "over" or parts[4] != "dim" or parts[6] != "trunc":
        raise TruncFormatError(f"line {no}: expected 'tmodule <label> over <field> dim <d> trunc <N>'")
    if parts[1] != presentation.label:
        raise TruncFormatError(f"line {no}: point is over {parts[1]!r}, not {presentation.label!r}")
    F = field if field is not None else field_from_name(parts[3])
    try:
        d, n_file = int(parts[5]), int(parts[7])
    except ValueError:
        raise TruncFormatError(f"line {no}: dim and trunc must be integers") from None
    if n_file < 1:
        raise TruncFormatError(f"line {no}: truncation order must be positive")
    N = order or n_file
    q = presentation.quiver
    gf = generator_form(presentation)
    names = list(gf.generators)
    k = 1
    grading = None
    if k < len(lines) and lines[k][1].startswith("grading"):
        no, line = lines[k]
        try:
            grading = tuple(int(x) for x in line.split()[1:])
        except ValueError:
            raise TruncFormatError(f"line {no}: bad grading") from None
        if len(grading) != q.n or sum(grading) != d:
            raise TruncFormatError(f"line {no}: grading must have {q.n} entries summing to {d}")
        k += 1
    if grading is None and q.n == 1:
        grading = (d,)
    given: dict = {}
    while k < len(lines):
        no, line = lines[k]
        parts = line.split()
        if len(parts) != 2 or parts[0] != "gen":
            raise TruncFormatError(f"line {no}: expected 'gen <name>'")
        name = parts[1]
        if name not in names:
            raise TruncFormatError(f"line {no}: unknown generator {name!r}")
        if name in given:
            raise TruncFormatError(f"line {no}: duplicate generator {name!r}")
        k += 1
        coeffs = [F.zeros(d, d) for _ in range(N)]
        for i in range(d):
            if k >= len(lines):
                raise TruncFormatError(f"gen {name}: expected {d} rows")
            rno, rline = lines[k]
            toks = rline.split()
            if len(toks) != d:
                raise TruncFormatError(f"line {rno}: expected {d} entries, got {len(toks)}")
            for j, tok in enumerate(toks):
                try:
                    cs = [parse_scalar(c) for c in tok.split(",")]
                except ValueError as exc:
                    raise TruncFormatError(f"line {rno}: {exc}") from None
                for r, c in enumerate(cs[:N]):
                    coeffs[r][i, j] = F.element(c)
            k += 1
        given[name] = TruncMat(F, coeffs)
    gens = []
    if grading is not None:
        base = ModulePoint.create(presentation, grading, {}, F).generator_matrices()
    for idx, name in enumerate(names):
        if name in given:
            gens.append(given[name])
        elif idx < gf.n_idempotents:
            if grading is None:
                raise TruncFormatError(f"idempotent {name} missing and no grading given")
            gens.append(TruncMat.constant(F, base[idx].copy(), N))
        else:
            gens.append(TruncMat.zeros(F, d, d, N))
    return TruncatedPoint(presentation, F, d, tuple(gens))


def format_truncated(tp: TruncatedPoint) -> str:
    F = tp.field
    lines = [f"tmodule {tp.presentation.label} over {F.name} dim {tp.dim} trunc {tp.order}"]
    for name, g in zip(tp.generator_names, tp.gens):
        lines.append(f"gen {name}")
        for i in range(tp.dim):
            row = []
            for j in range(tp.dim):
                cs = [F.format(c[i, j]) for c in g.coeffs]
                while len(cs) > 1 and cs[-1] == "0":
                    cs.pop()
                row.append(",".join(cs))
            lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def load_truncated(path, presentation, field=None, order=None) -> TruncatedPoint:
    with open(path, encoding="utf-8") as fh:
        return parse_truncated(fh.read(), presentation, field, order)
