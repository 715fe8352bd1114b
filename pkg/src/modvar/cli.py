"""Command-line front end.

Exit status: 0 on success, 1 for invalid input, 2 for an internal
consistency fault, 64 for a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import census as census_mod
from .algebra import PresentationError, load_presentation, ringel_form, to_generator_form
from .deform import ObstructionAt, load_truncated, split_data, triangularize
from .deform.io import TruncFormatError
from .exactlin import field_from_name
from .family import (
    FamilyError,
    RepSpace,
    UnstableDecompositionError,
    canonical_decomposition,
    component_graph,
    describe,
    family_dim,
    generic_ext,
    generic_hom,
    load_family,
    sum_dim,
    sum_is_component,
)
from .family import validate as validate_family
from .modpoint.decompose import DEFAULT_TRIALS as DECOMPOSE_TRIALS
from .modpoint import (
    ConsistencyError,
    ModuleFormatError,
    check_decomposition,
    decompose,
    der_dim,
    end_dim,
    ext1_dim,
    hom_dim,
    inner_der_dim,
    load_module,
)

EXIT_DOMAIN = 1
EXIT_INTERNAL = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dims(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension vector {text!r}") from None


def _common(p: argparse.ArgumentParser, *, m=False, n=False, family=False, seed=False, out="json"):
    p.add_argument("--alg", required=True, metavar="PATH", help="presentation file")
    p.add_argument("--field", default="p", help="p (default prime), GF(q), a prime, or rat")
    if m:
        p.add_argument("--m", required=True, metavar="PATH", help="module file")
    if n:
        p.add_argument("--n", required=True, metavar="PATH", help="second module file")
    if family:
        p.add_argument("--family", action="append", default=[], metavar="PATH", help="family file (repeatable)")
    if seed:
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=5, help="trials per generic value")
    p.add_argument("--out", choices=("json", "dot", "text"), default=out)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="modvar", description="Exact randomized computations on varieties of modules.")
    sub = parser.add_subparsers(dest="cmd", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("validate", help="check a presentation and optional modules or families")
    _common(p, family=True)
    p.add_argument("--m", action="append", default=[], metavar="PATH")

    for name, help_ in (("hom", "dim Hom(M, N)"), ("ext", "dim Ext^1(M, N)"), ("der", "dim Der(A, Hom_k(M, N))")):
        p = sub.add_parser(name, help=help_)
        _common(p, m=True, n=True)
        if name != "hom":
            p.add_argument("--method", choices=("graded", "full"), default="graded")

    p = sub.add_parser("decompose", help="direct-sum decomposition of a module")
    _common(p, m=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=DECOMPOSE_TRIALS, help="random endomorphisms per indecomposability test")

    p = sub.add_parser("sum-check", help="direct-sum component criterion")
    _common(p, family=True, seed=True)

    p = sub.add_parser("dim", help="family dimensions (and the sum formula for several families)")
    _common(p, family=True, seed=True)
    p.add_argument("--canonical", action="store_true", help="also report the canonical decomposition")

    p = sub.add_parser("graph", help="component graph as DOT or JSON")
    _common(p, family=True, seed=True, out="dot")

    p = sub.add_parser("deform", help="triangularize a truncated deformation")
    _common(p)
    p.add_argument("--point", required=True, metavar="PATH", help="truncated point file")
    p.add_argument("--split", required=True, type=_dims, help="block sizes d1,d2")
    p.add_argument("--trunc", type=int, default=None, help="truncation order (default: the file's)")

    p = sub.add_parser("census", help="brute-force enumeration over a small prime field")
    _common(p)
    p.add_argument("--dims", required=True, type=_dims)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--budget", type=int, default=census_mod.DEFAULT_BUDGET)
    p.add_argument("--orbits", action="store_true")
    p.add_argument("--pairs", action="store_true", help="brute dims for every pair of points")

    p = sub.add_parser("euler-check", help="generic hom - ext against the Ringel form")
    _common(p, seed=True)
    p.add_argument("--a", required=True, type=_dims)
    p.add_argument("--b", required=True, type=_dims)
    return parser


# -- rendering ---------------------------------------------------------------


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if fmt == "text":
        return "".join(f"{k}: {json.dumps(report[k], sort_keys=True)}\n" for k in sorted(report))
    raise UsageError("dot output is only available for graph")


# -- commands ----------------------------------------------------------------


def _load(args):
    pres = load_presentation(args.alg)
    field = field_from_name(args.field)
    return pres, field


def _families(args, pres, field):
    return [load_family(path, pres, field) for path in args.family]


def cmd_validate(args):
    pres, field = _load(args)
    gf = to_generator_form(pres)
    report = {
        "algebra": pres.label,
        "vertices": len(pres.quiver.vertices),
        "arrows": len(pres.quiver.arrows),
        "relations": len(pres.relations),
        "generators": gf.n_generators,
        "generator_relations": len(gf.relations),
        "modules": [],
        "families": [],
    }
    for path in args.m:
        mod = load_module(path, pres, field)
        report["modules"].append({"path": path, "dims": list(mod.dims), "valid": True})
    for f, path in zip(_families(args, pres, field), args.family):
        validate_family(f)
        report["families"].append({"path": path, "expr": describe(f), "valid": True})
    return report


def _pair(args):
    pres, field = _load(args)
    return load_module(args.m, pres, field), load_module(args.n, pres, field)


def cmd_hom(args):
    m, n = _pair(args)
    return {"hom": hom_dim(m, n)}


def cmd_ext(args):
    m, n = _pair(args)
    der = der_dim(m, n, args.method)
    return {"ext1": ext1_dim(m, n, args.method), "der": der, "hom": hom_dim(m, n), "inner_der": inner_der_dim(m, n), "method": args.method}


def cmd_der(args):
    m, n = _pair(args)
    return {"der": der_dim(m, n, args.method), "inner_der": inner_der_dim(m, n), "method": args.method}


def cmd_decompose(args):
    pres, field = _load(args)
    m = load_module(args.m, pres, field)
    rng = np.random.default_rng(args.seed)
    res = decompose(m, rng, trials=max(args.trials, 1))
    if not check_decomposition(m, res):
        raise ConsistencyError("decomposition witness does not conjugate the module to the sum of its pieces")
    return {
        "dims": list(m.dims),
        "end_dim": end_dim(m),
        "summands": [
            {"dims": list(s.dims), "multiplicity": s.multiplicity, "end_dim": s.end_dim, "certified": s.certified}
            for s in res.summands
        ],
        "seed": args.seed,
        "trials": args.trials,
    }


def _need_families(args, k=1):
    if len(args.family) < k:
        raise UsageError(f"need at least {k} --family argument(s)")


def cmd_sum_check(args):
    _need_families(args)
    pres, field = _load(args)
    fams = _families(args, pres, field)
    rep = sum_is_component(fams, args.samples, args.seed)
    return {**rep.as_dict(), "families": [describe(f) for f in fams]}


def cmd_dim(args):
    _need_families(args)
    pres, field = _load(args)
    fams = _families(args, pres, field)
    rng = np.random.default_rng(args.seed)
    out = {"families": [], "seed": args.seed, "trials": args.samples}
    for f in fams:
        entry = {"expr": describe(f), "dims": list(f.dims), **family_dim(f, rng)}
        if args.canonical:
            entry["canonical"] = [c.as_dict() for c in canonical_decomposition(f, rng)]
        out["families"].append(entry)
    if len(fams) > 1:
        out["sum_dim"] = sum_dim(fams, args.samples, rng)
    return out


def cmd_graph(args):
    _need_families(args)
    pres, field = _load(args)
    fams = _families(args, pres, field)
    g = component_graph(fams, args.samples, args.seed)
    if args.out == "dot":
        return g.to_dot(pres.label)
    return g.as_dict()


def cmd_deform(args):
    pres, field = _load(args)
    tp = load_truncated(args.point, pres, field, args.trunc)
    if len(args.split) != 2:
        raise UsageError("--split takes two block sizes d1,d2")
    split = split_data(tp, *args.split)
    res = triangularize(tp, split)
    report = {"split": list(args.split), "trunc": tp.order}
    if isinstance(res, ObstructionAt):
        report.update(
            {"result": f"ObstructionAt({res.order})", "order": res.order, "witness": [[[field.format(x) for x in row] for row in w] for w in res.witness]}
        )
    else:
        g, _ = res
        report.update({"result": "triangular", "g": [[[field.format(x) for x in row] for row in c] for c in g.coeffs]})
    return report


def cmd_census(args):
    pres = load_presentation(args.alg)
    pts = census_mod.enumerate_points(pres, args.dims, args.q, args.budget)
    pairs = [(i, j) for i in range(len(pts)) for j in range(len(pts))] if args.pairs else []
    rep = census_mod.census(pres, args.dims, args.q, args.budget, orbits=args.orbits, pairs=pairs)
    return rep.as_dict()


def cmd_euler(args):
    pres, field = _load(args)
    if pres.relations:
        raise UsageError("euler-check needs a presentation without relations")
    fa, fb = RepSpace(pres, args.a, field), RepSpace(pres, args.b, field)
    rng = np.random.default_rng(args.seed)
    h = generic_hom(fa, fb, args.samples, rng)
    e = generic_ext(fa, fb, args.samples, rng)
    form = ringel_form(pres.quiver, args.a, args.b)
    return {
        "a": list(args.a),
        "b": list(args.b),
        "hom": h.value,
        "ext1": e.value,
        "ringel": form,
        "holds": h.value - e.value == form,
        "seed": args.seed,
        "trials": args.samples,
    }


COMMANDS = {
    "validate": cmd_validate,
    "hom": cmd_hom,
    "ext": cmd_ext,
    "der": cmd_der,
    "decompose": cmd_decompose,
    "sum-check": cmd_sum_check,
    "dim": cmd_dim,
    "graph": cmd_graph,
    "deform": cmd_deform,
    "census": cmd_census,
    "euler-check": cmd_euler,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = COMMANDS[args.cmd](args)
        if args.cmd != "graph" and args.out == "dot":
            raise UsageError("dot output is only available for graph")
        stdout.write(report if isinstance(report, str) else _render(report, args.out))
        return 0
    except UsageError as exc:
        parser.print_usage(stderr)
        stderr.write(f"modvar: error: {exc}\n")
        return EXIT_USAGE
    except (ConsistencyError, census_mod.CensusFault, AssertionError) as exc:
        stderr.write(f"modvar: internal consistency fault: {exc}\n")
        return EXIT_INTERNAL
    except (
        PresentationError,
        ModuleFormatError,
        TruncFormatError,
        FamilyError,
        UnstableDecompositionError,
        census_mod.BudgetExceeded,
        OSError,
        ValueError,
    ) as exc:
        stderr.write(f"modvar: error: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
