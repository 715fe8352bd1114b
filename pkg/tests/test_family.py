import itertools
import os

import numpy as np
import pytest

from modvar.exactlin import DEFAULT_FIELD, Rationals
from modvar.family import (
    ExtFam,
    FamilyError,
    Orbit,
    RepSpace,
    Slice,
    Sum,
    UnstableDecompositionError,
    canonical_decomposition,
    component_graph,
    describe,
    family_dim,
    generic_ext,
    generic_hom,
    load_family,
    parse_family,
    sample,
    slice_valid,
    sum_dim,
    sum_is_component,
    validate,
)
from modvar.modpoint import (
    ConsistencyError,
    check_point,
    direct_sum,
    end_dim,
    is_isomorphic,
    orbit_dim,
    simple_module,
)

from helpers import PRES, module, random_module, rng

F = DEFAULT_FIELD
DATA = os.path.join(os.path.dirname(__file__), "data")


def orb(name, v):
    return Orbit(simple_module(PRES[name], v))


def test_family_invariants():
    with pytest.raises(FamilyError):
        RepSpace(PRES["dual"], (1,))
    with pytest.raises(FamilyError):
        RepSpace(PRES["a2"], (1,))
    with pytest.raises(FamilyError):
        Slice(PRES["a2"], (1, 1), {"zz"})
    with pytest.raises(FamilyError):
        Sum((orb("a2", "1"), Orbit(simple_module(PRES["a2"], "1", Rationals()))))
    with pytest.raises(FamilyError):
        ExtFam(orb("a2", "1"), orb("ss", "1"))
    with pytest.raises(FamilyError):
        Sum(())


def test_slice_valid_examples():
    p = PRES["chain4"]
    assert slice_valid(Slice(p, (0, 1, 1, 1), {"ga"}))
    assert not slice_valid(Slice(p, (1, 1, 1, 1), {"ga"}))
    assert slice_valid(Slice(p, (1, 1, 1, 1), {"al", "be", "ga"}))
    with pytest.raises(FamilyError):
        validate(Slice(p, (1, 1, 1, 1), {"ga"}))


def test_sample_examples():
    r = rng(0)
    j = module("loop", (2,), {"x": [[0, 1], [0, 0]]})
    assert is_isomorphic(sample(Orbit(j), r), j, r)[0]
    s1, s2 = orb("ss", "1"), orb("ss", "2")
    assert sample(Sum((s1, s2)), r) == direct_sum([s1.point, s2.point])
    e = sample(ExtFam(orb("a2", "1"), orb("a2", "2")), r)
    assert e.dims == (1, 1) and end_dim(e) == 1


def test_samples_are_valid_points():
    r = rng(1)
    fams = [
        Slice(PRES["twoloops"], (2, 1), {"ga"}),
        ExtFam(Slice(PRES["twoloops"], (1, 0)), orb("twoloops", "2")),
        Sum((orb("twocycle", "1"), ExtFam(orb("twocycle", "2"), orb("twocycle", "1")))),
        RepSpace(PRES["kronecker"], (2, 3)),
    ]
    for f in fams:
        for _ in range(3):
            pt = sample(f, r)
            assert pt.dims == f.dims and check_point(pt) == []


def test_generic_hom_examples():
    s = orb("a2", "1")
    assert generic_hom(s, s, rng=0).value == 1
    assert generic_hom(orb("a2", "1"), orb("a2", "2"), rng=0).value == 0
    r11 = RepSpace(PRES["a2"], (1, 1))
    assert generic_hom(r11, r11, rng=0).value == 1


def test_generic_ext_examples():
    p = PRES["ss"]
    for a, b in itertools.product([(1, 0), (0, 1), (1, 1), (2, 1)], repeat=2):
        assert generic_ext(RepSpace(p, a), RepSpace(p, b), rng=0).value == 0
    assert generic_ext(orb("twocycle", "1"), orb("twocycle", "2"), rng=0).value > 0
    assert generic_ext(orb("twocycle", "2"), orb("twocycle", "1"), rng=0).value > 0


def test_generic_stats_are_minimum_and_prefix_monotone():
    f1 = Slice(PRES["twoloops"], (1, 1), {"ga"})
    f2 = Slice(PRES["twoloops"], (1, 0))
    full = generic_hom(f1, f2, trials=6, rng=5)
    assert full.value == min(full.values) and full.trials == 6 and full.seed == 5
    assert full.as_dict()["bound"] == "upper"
    for k in range(1, 6):
        pre = generic_hom(f1, f2, trials=k, rng=5)
        assert pre.values == full.values[:k]
        assert pre.value >= full.value
    with pytest.raises(ValueError):
        generic_hom(f1, f2, trials=0)


def test_sum_is_component_examples():
    assert sum_is_component([orb("a2", "1")], rng=0).value
    rep = sum_is_component([orb("a2", "1"), orb("a2", "2")], rng=0)
    assert not rep and rep.ext == ((None, 1), (0, None))
    rep6 = sum_is_component([orb("twocycle", "1"), orb("twocycle", "2")], rng=0)
    assert not rep6 and rep6.ext[0][1] > 0 and rep6.ext[1][0] > 0
    assert sum_is_component([orb("ss", "1"), orb("ss", "2")], rng=0).value


def test_family_dim_examples():
    assert family_dim(orb("a2", "1"), rng=0) == {"graded": 0, "saturated": 0}
    p = PRES["twoloops"]
    s2 = orb("twoloops", "2")
    assert family_dim(ExtFam(Slice(p, (1, 0), {"al", "be"}), s2), rng=0) == {"graded": 1, "saturated": 3}
    assert family_dim(ExtFam(Slice(p, (1, 0)), s2), rng=0) == {"graded": 2, "saturated": 4}
    assert family_dim(Slice(p, (1, 1), {"ga"}), rng=0) == {"graded": 2, "saturated": 4}
    assert family_dim(RepSpace(PRES["kronecker"], (2, 3)), rng=0)["graded"] == 12


def test_orbit_dim_closed_form():
    # saturated orbit dimension is d^2 - dim End
    r = rng(2)
    for name in ("dual", "twoloops", "twocycle", "a2", "comm"):
        m = random_module(PRES[name], r)
        fd = family_dim(Orbit(m), rng=r)
        d = m.total_dim
        assert fd["saturated"] == d * d - end_dim(m)
        assert fd["graded"] == orbit_dim(m) == sum(x * x for x in m.dims) - end_dim(m)


def test_sum_dim_examples():
    s1, s2 = orb("ss", "1"), orb("ss", "2")
    assert sum_dim([s1, s2], rng=0) == 2
    assert sum_dim([s1], rng=0) == family_dim(s1, rng=0)["saturated"]


def test_sum_dim_matches_family_dim_of_sum():
    cases = [
        [Slice(PRES["twocycle"], (1, 0)), Slice(PRES["twocycle"], (0, 1))],
        [RepSpace(PRES["a2"], (1, 1)), RepSpace(PRES["a2"], (0, 1))],
        [Slice(PRES["twoloops"], (1, 0)), orb("twoloops", "2")],
        [RepSpace(PRES["kronecker"], (1, 1)), RepSpace(PRES["kronecker"], (1, 2))],
    ]
    for parts in cases:
        assert sum_dim(parts, rng=3) == family_dim(Sum(tuple(parts)), rng=4)["saturated"]


def test_family_dim_permutation_symmetric():
    parts = [RepSpace(PRES["kronecker"], (1, 1)), RepSpace(PRES["kronecker"], (1, 0)), RepSpace(PRES["kronecker"], (0, 1))]
    vals = {family_dim(Sum(tuple(perm)), rng=0)["saturated"] for perm in itertools.permutations(parts)}
    assert len(vals) == 1
    assert len({sum_dim(list(perm), rng=0) for perm in itertools.permutations(parts)}) == 1


def test_canonical_decomposition_examples():
    j = module("loop", (2,), {"x": [[0, 1], [0, 0]]})
    (c,) = canonical_decomposition(Orbit(j), rng=0)
    assert c.multiplicity == 1 and c.dims == (2,)
    cls = canonical_decomposition(RepSpace(PRES["a2"], (2, 1)), rng=0)
    assert [(c.dims, c.multiplicity) for c in cls] == [((1, 0), 1), ((1, 1), 1)]
    (one,) = canonical_decomposition(RepSpace(PRES["a2"], (1, 1)), rng=0)
    assert one.dims == (1, 1) and one.certified
    ss = canonical_decomposition(Sum((orb("ss", "1"), orb("ss", "1"))), rng=0)
    assert [(c.dims, c.multiplicity) for c in ss] == [((1, 0), 2)]


def test_unstable_decomposition_error():
    err = UnstableDecompositionError([((1,),), ((2,),)])
    assert err.observed and "unstable" in str(err)


def test_component_graph_examples():
    ss = component_graph([orb("ss", "1"), orb("ss", "2")], rng=0)
    assert ss.arrows == (("C1", "C2"), ("C2", "C1")) and ss.edges == (("C1", "C2"),)
    assert "[dir=both]" in ss.to_dot()
    g6 = component_graph([orb("twocycle", "1"), orb("twocycle", "2")], rng=0)
    assert g6.arrows == () and g6.edges == ()
    g2 = component_graph([orb("a2", "1"), orb("a2", "2")], rng=0)
    assert g2.arrows == (("C1", "C2"),)
    assert '"C1" -> "C2";' in g2.to_dot("a2")
    with pytest.raises(FamilyError):
        component_graph([Orbit(simple_module(PRES["a2"], "1"), "X"), Orbit(simple_module(PRES["a2"], "2"), "X")])


def test_seeded_reproducibility():
    f = [Slice(PRES["twoloops"], (1, 1), {"ga"}), ExtFam(Slice(PRES["twoloops"], (1, 0)), orb("twoloops", "2"))]
    assert component_graph(f, rng=11).as_dict() == component_graph(f, rng=11).as_dict()
    assert sample(f[1], 4) == sample(f[1], 4)


def test_parse_family_forms():
    p = PRES["chain4"]
    f = parse_family("(sum (orbit (simple 1)) (slice (0 1 1 1) zero: ga) label: X) ; comment", p)
    assert isinstance(f, Sum) and f.label == "X" and f.dims == (1, 1, 1, 1)
    assert describe(f) == "(sum (orbit <1 0 0 0>) (slice (0 1 1 1) zero: ga) label: X)"
    g = parse_family("(extfam (repspace 1 1) (orbit (simple 2)))", PRES["a2"])
    assert isinstance(g, ExtFam) and isinstance(g.quotient, RepSpace)


@pytest.mark.parametrize(
    "text",
    ["", "(orbit", "(bogus 1)", "(slice 1 1)", "(repspace 1 x)", "(orbit (simple 1)) extra", "(sum (orbit (simple 1)) zero: a)", "(orbit (simple 1) label: a label: b)"],
)
def test_parse_family_errors(text):
    with pytest.raises(FamilyError):
        parse_family(text, PRES["a2"])


def test_load_family_files():
    p = PRES["twoloops"]
    e4 = load_family(os.path.join(DATA, "twoloops_e4.fam"), p)
    e3 = load_family(os.path.join(DATA, "twoloops_e3.fam"), p)
    assert family_dim(e4, rng=0)["saturated"] == 4 and family_dim(e3, rng=0)["saturated"] == 3


def test_consistency_error_on_bad_orbit():
    bad = module("twocycle", (1, 1), {"al": [[1]], "be": [[1]]})
    with pytest.raises((FamilyError, ConsistencyError)):
        sample(Orbit(bad), rng(0))
