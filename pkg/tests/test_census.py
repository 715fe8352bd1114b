import json

import pytest

from modvar.census import (
    BudgetExceeded,
    CensusFault,
    brute_dims,
    census,
    count_derivations,
    count_intertwiners,
    enumerate_points,
)
from modvar.census import _exact_log
from modvar.exactlin import PrimeField
from modvar.modpoint import check_point, der_dim, hom_dim, simple_module

from helpers import PRES, module

F2, F3 = PrimeField(2), PrimeField(3)


def test_enumerate_examples():
    assert len(enumerate_points(PRES["a2"], (1, 1), 2)) == 2
    assert len(enumerate_points(PRES["twocycle"], (1, 1), 3)) == 5
    (only,) = enumerate_points(PRES["chain4"], (0, 0, 0, 0), 2)
    assert only.total_dim == 0


def test_enumerate_matches_check_point():
    pts = enumerate_points(PRES["dual"], (2,), 3)
    assert all(check_point(p) == [] for p in pts)
    # nilpotent 2x2 matrices over F_q number q^2
    assert len(pts) == 9
    assert len({p.vector().tobytes() for p in pts}) == len(pts)


def test_brute_examples():
    ss = PRES["ss"]
    assert brute_dims(simple_module(ss, "1", F2), simple_module(ss, "2", F2), 2) == {"hom": 0, "der": 1}
    k = simple_module(PRES["dual"], "1", F2)
    assert brute_dims(k, k, 2) == {"hom": 1, "der": 1}
    j = module("loop", (2,), {"x": [[0, 1], [0, 0]]}, F2)
    assert count_intertwiners(j, j) == 4


def test_brute_agrees_with_linear_algebra_over_f3():
    for name, d in (("twocycle", (1, 1)), ("a2", (1, 1)), ("twoloops", (1, 1))):
        pts = enumerate_points(PRES[name], d, 3)
        for m in pts[:4]:
            for n in pts[:4]:
                assert brute_dims(m, n, 3) == {"hom": hom_dim(m, n), "der": der_dim(m, n, "full")}


def test_census_orbits_and_report():
    rep = census(PRES["twocycle"], (1, 1), 3, orbits=True, pairs=[(0, 1)])
    assert rep.points == 5 and rep.orbits == 3
    d = json.loads(rep.to_json())
    assert d["pairs"][0]["m"] == 0 and set(d["pairs"][0]) == {"m", "n", "hom", "der"}
    assert rep.to_json() == census(PRES["twocycle"], (1, 1), 3, orbits=True, pairs=[(0, 1)]).to_json()


def test_budget_and_faults():
    with pytest.raises(BudgetExceeded):
        enumerate_points(PRES["kronecker"], (2, 2), 2, budget=100)
    k = simple_module(PRES["dual"], "1", F2)
    with pytest.raises(BudgetExceeded):
        count_derivations(k, k, budget=1)
    with pytest.raises(CensusFault):
        _exact_log(6, 2)
    assert _exact_log(1, 5) == 0 and _exact_log(27, 3) == 3


def test_brute_rejects_wrong_field():
    k = simple_module(PRES["dual"], "1", F3)
    with pytest.raises(ValueError):
        brute_dims(k, k, 2)
    big = simple_module(PRES["dual"], "1")
    with pytest.raises(BudgetExceeded):
        brute_dims(big, big)
