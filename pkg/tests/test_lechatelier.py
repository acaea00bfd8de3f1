import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import grids
from mcsadj import costs as cf
from mcsadj.errors import HypothesisError
from mcsadj.lattice import GridLattice, ParamPoset, leq, meet
from mcsadj.lechatelier import longrun_select, prop3_forall_check, theorem2_check
from mcsadj.models import build_factor_demand, build_pricing
from mcsadj.objective import Objective
from mcsadj.static_solver import StaticProblem, theorem1_select

INF = math.inf


def g_argmax(lat, F, theta, x_lo, cost):
    vals = {}
    for x in lat.points():
        c = cost(tuple(a - b for a, b in zip(x, x_lo)))
        if c < INF:
            vals[x] = F(x, theta) - c
    top = max(vals.values())
    return {x for x, v in vals.items() if v == top}


def free_argmax(lat, F, theta):
    vals = {x: F(x, theta) for x in lat.points()}
    top = max(vals.values())
    return {x for x, v in vals.items() if v == top}


def test_longrun_unique_peak_is_largest():
    lat = GridLattice([list(range(6))])
    obj = Objective.from_function(lat, ParamPoset.chain([0, 1]), lambda x, t: -((x[0] - 1 - 2 * t) ** 2))
    P = StaticProblem(obj, cf.uniform(cf.s_zero(), 1), 0, 1)
    xb, largest = longrun_select(P)
    assert lat.point(xb) == (3,) and largest


def test_longrun_flat_top():
    lat = GridLattice([list(range(6))])
    obj = Objective.from_function(lat, ParamPoset.chain([0, 1]), lambda x, t: -((x[0] - 1) ** 2) if t == 0 else -max(abs(x[0] - 2.5) - 0.5, 0))
    P = StaticProblem(obj, cf.uniform(cf.s_zero(), 1), 0, 1, x_lo=(1,))
    xb, largest = longrun_select(P)
    assert lat.point(xb) in {(2,), (3,)}
    assert lat.point(xb) == (3,) and largest


def test_factor_demand_long_run_is_above():
    model = build_factor_demand([0, 1, 2, 3], [0, 1, 2, 3], lambda k, l: 3 * math.sqrt((k + 1) * (l + 1)), 1.0, [2.0, 1.0])
    assert model.complements
    P = model.problem(2.0, 1.0, cf.uniform(cf.s_quadratic(1.0), 2))
    xb, _ = longrun_select(P)
    F = lambda x, t: 3 * math.sqrt((x[0] + 1) * (x[1] + 1)) - x[0] + t * x[1]  # noqa: E731
    x_lo = P.lattice.point(P.x_lo)
    assert P.lattice.point(xb) in free_argmax(P.lattice, F, -1.0)
    assert leq(x_lo, P.lattice.point(xb))


def test_pricing_sandwich():
    model = build_pricing([1, 1.5, 2, 2.5, 3, 3.5, 4], [0.5, 1.5], [0.75])
    P = model.problem((0.5, 0.75), (1.5, 0.75), cf.uniform(cf.s_quadratic(0.5), 1))
    res = theorem2_check(P)
    assert res.sandwich and res.report.holds
    assert leq(res.x_lo, res.x_hat) and leq(res.x_hat, res.x_bar)
    assert res.x_lo < res.x_bar  # a higher marginal cost raises the price


def test_zero_cost_sandwich_reaches_long_run():
    lat = GridLattice([[0, 1, 2], [0, 1, 2]])
    obj = Objective.from_function(lat, ParamPoset.chain([0, 1]), lambda x, t: x[0] * x[1] - sum(v * v for v in x) + 2 * t * sum(x))
    res = theorem2_check(StaticProblem(obj, cf.uniform(cf.s_zero(), 2), 0, 1))
    assert res.x_hat == res.x_bar and res.sandwich


def test_footnote_counterexample():
    lat = GridLattice([list(range(6))])
    obj = Objective.from_function(lat, ParamPoset.chain([0, 1]), lambda x, t: -((x[0] - 2 * t) ** 2))
    cost = cf.uniform(cf.s_table({v: INF if 0 < v < 3 else 0.0 for v in range(-5, 6)}), 1)
    P = StaticProblem(obj, cost, 0, 1)
    with pytest.raises(HypothesisError) as err:
        theorem2_check(P)
    assert err.value.report.name == "monotone"
    assert P.solve().points() == [(3,)]
    res = theorem2_check(P, verify=False)
    assert res.x_bar == (2,) and not res.report.holds
    assert res.report.witness["maximizer_above_x_bar"] == (3,)


def test_result_serialises():
    lat = GridLattice([[0, 1, 2]])
    obj = Objective.from_function(lat, ParamPoset.chain([0, 1]), lambda x, t: -((x[0] - 2 * t) ** 2))
    d = theorem2_check(StaticProblem(obj, cf.uniform(cf.s_fixed(0.5), 1), 0, 1)).to_dict()
    assert d["sandwich"] and d["report"]["theorem"] == "theorem2"


MONOTONE = {
    "quadratic": lambda n: cf.uniform(cf.s_quadratic(0.5), n),
    "fixed": lambda n: cf.uniform(cf.s_fixed(0.75), n),
    "euclidean": lambda n: cf.euclidean(0.5),
    "cobb_douglas": lambda n: cf.cobb_douglas([1.0] * n, 0.5),
}


def objective(lat, lo, hi, w):
    def F(x, t):
        return sum(w * x[i] * x[j] for i in range(len(x)) for j in range(i + 1, len(x))) - sum(v * v for v in x) + t * sum(x)

    return F, Objective.from_function(lat, ParamPoset.chain([lo, hi]), F)


@given(grids(max_dim=2, max_points=4), st.sampled_from(sorted(MONOTONE)), st.integers(0, 2), st.data())
def test_sandwich_against_brute_force(lat, cost_name, w, data):
    lo, hi = sorted(data.draw(st.lists(st.integers(-2, 6), min_size=2, max_size=2, unique=True)))
    F, obj = objective(lat, lo / 2, hi / 2, w / 2)
    cost = MONOTONE[cost_name](lat.n)
    P = StaticProblem(obj, cost, lo / 2, hi / 2)
    res = theorem2_check(P)
    best = g_argmax(lat, F, hi / 2, res.x_lo, cost)
    assert res.x_hat in best
    assert leq(res.x_lo, res.x_hat) and leq(res.x_hat, res.x_bar)
    assert res.x_bar in free_argmax(lat, F, hi / 2)
    # the short-run pick is the long-run choice met with the upward selection
    assert res.x_hat == meet(res.x_bar, theorem1_select(P))
    if res.largest:
        assert all(leq(y, res.x_bar) for y in best)


@given(grids(max_dim=2, max_points=4), st.integers(0, 2), st.data())
def test_prop3_against_brute_force(lat, w, data):
    lo, hi = sorted(data.draw(st.lists(st.integers(-2, 6), min_size=2, max_size=2, unique=True)))
    F, obj = objective(lat, lo / 2, hi / 2, w / 2)
    cost = MONOTONE["quadratic"](lat.n)
    P = StaticProblem(obj, cost, lo / 2, hi / 2)
    rep = prop3_forall_check(P)
    x_lo = lat.point(P.x_lo)
    best = g_argmax(lat, F, hi / 2, x_lo, cost)
    above = [x for x in free_argmax(lat, F, hi / 2) if leq(x_lo, x)]
    assert rep.holds
    assert all(leq(x_lo, y) and leq(y, xb) for y in best for xb in above)


def test_prop3_flat_objective_keeps_x_lo():
    lat = GridLattice([[0, 1, 2]])
    obj = Objective(lat, ParamPoset.chain([0, 1]), [[0.0, 0.0]] * 3)
    P = StaticProblem(obj, MONOTONE["quadratic"](1), 0, 1, x_lo=(1,))
    rep = prop3_forall_check(P, x_bar=(1,))
    assert rep.holds and rep.details["argmax"] == [(1,)]


def test_prop3_rejects_weakly_monotone_cost():
    lat = GridLattice([[0, 1, 2]])
    obj = Objective.from_function(lat, ParamPoset.chain([0, 1]), lambda x, t: t * x[0])
    with pytest.raises(HypothesisError, match="strictly_monotone"):
        prop3_forall_check(StaticProblem(obj, MONOTONE["fixed"](1), 0, 1))
