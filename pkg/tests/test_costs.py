import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import grids
from mcsadj import costs as cf
from mcsadj.errors import ConfigError
from mcsadj.lattice import GridLattice
from mcsadj.properties import CostTable

INF = math.inf


@pytest.mark.parametrize(
    "cost, value, expected",
    [
        (cf.s_fixed(2.0), 0.0, 0.0),
        (cf.s_fixed(2.0), -3.0, 2.0),
        (cf.s_quadratic(0.5), -2.0, 2.0),
        (cf.s_free_disposal(1.0), -2.0, 0.0),
        (cf.s_free_disposal(1.0), 2.0, 4.0),
        (cf.s_constrained(1.0, -1.0, 2.0), 2.0, 4.0),
        (cf.s_constrained(1.0, -1.0, 2.0), -2.0, INF),
        (cf.s_lumpy(1.0, 3.0), 2.0, INF),
        (cf.s_lumpy(1.0, 3.0), 3.0, 9.0),
        (cf.s_lumpy(1.0, 3.0), -1.0, 1.0),
        (cf.s_prohibitive(), 1.0, INF),
        (cf.s_asymmetric(1.0, 2.0, 0.5, 0.25), -1.0, 1.5),
        (cf.s_asymmetric(1.0, 2.0, 0.5, 0.25), 1.0, 2.25),
        (cf.s_band(-1.0, 1.0, 5.0), 1.0, 0.0),
        (cf.s_band(-1.0, 1.0, 5.0), 2.0, 5.0),
    ],
)
def test_scalar_families(cost, value, expected):
    assert cost(value) == expected


def test_vector_families():
    assert cf.separable([cf.s_fixed(1.0), cf.s_quadratic(1.0)])((1.0, -2.0)) == 5.0
    assert cf.euclidean(2.0)((3.0, 4.0)) == 10.0
    assert cf.cobb_douglas([1.0, 2.0], 0.5)((2.0, -3.0)) == 9.0
    assert cf.cobb_douglas([1.0, 2.0])((0.0, 5.0)) == 0.0
    pm = cf.point_mass((1, -1), 10.0)
    assert (pm((1, -1)), pm((0, 0)), pm((1, 0))) == (0.0, 10.0, INF)
    assert cf.flipped(cf.separable([cf.s_free_disposal(1.0), cf.s_zero()]), [0])((-2.0, 0.0)) == 4.0


def test_negative_costs_are_rejected():
    bad = cf.CostFunction(lambda e: -1.0)
    with pytest.raises(ValueError, match="must lie in"):
        bad((0.0,))


def test_infinite_cost_at_zero_is_rejected():
    with pytest.raises(ValueError, match="finite"):
        CostTable.of(cf.uniform(cf.ScalarCost(lambda v: INF), 1), GridLattice([[0, 1]]))


def test_constrained_interval_must_contain_zero():
    with pytest.raises(ConfigError):
        cf.s_constrained(1.0, 1.0, 2.0)


SPECS = [
    {"family": "quadratic", "a": 0.5},
    {"family": "fixed", "k": 1.5},
    {"family": "lumpy", "a": 0.25, "size": 2.0},
    {"family": "constrained", "a": 1.0, "lo": -1.0, "hi": "inf"},
    {"family": "separable", "components": [{"family": "free_disposal", "a": 1.0}, {"family": "band", "lo": -1, "hi": 0, "k": 3}]},
    {"family": "euclidean", "scale": 0.5},
    {"family": "cobb_douglas", "exponents": [1.0, 0.5], "scale": 2.0},
    {"family": "point_mass", "target": [1, 0], "at_zero": 4.0},
    {"family": "scaled", "factor": 2.0, "cost": {"family": "quadratic", "a": 1.0}},
    {"family": "flipped", "dims": [1], "cost": {"family": "free_disposal", "a": 1.0}},
    {"family": "separable", "components": [{"family": "table", "points": [[-1, "inf"], [0, 0], [1, 2]]}, {"family": "zero"}]},
]


@pytest.mark.parametrize("spec", SPECS, ids=[s["family"] + str(i) for i, s in enumerate(SPECS)])
def test_spec_round_trip(spec):
    lat = GridLattice([[0, 1], [-1, 0, 1]])
    c = cf.from_spec(spec, 2)
    again = cf.from_spec(c.spec, 2)
    assert np.array_equal(CostTable.of(c, lat).values, CostTable.of(again, lat).values)


def test_unknown_family_names_its_path():
    with pytest.raises(ConfigError, match=r"\$\.cost: unknown cost family"):
        cf.from_spec({"family": "nope"}, 1)
    with pytest.raises(ConfigError, match=r"components\[1\]"):
        cf.from_spec({"family": "separable", "components": [{"family": "zero"}, {"family": "bogus"}]}, 2)


def test_kl_divergence_matches_direct_formula():
    g0 = (1 / 3, 2 / 3)
    kl = cf.kl_divergence(g0)
    # beliefs enter as negated CDF values, so eps = g0 - G
    g = (0.25, 0.25)
    eps = tuple(a - b for a, b in zip(g0, g))
    direct = 0.25 * math.log(0.25 / (1 / 3)) + 0.75 * math.log(0.75 / (1 / 3))
    assert kl(eps) == pytest.approx(direct, abs=1e-12)
    assert kl((0.0, 0.0)) == 0.0
    # a CDF that decreases is not a belief
    assert kl((0.5, 0.0)) == INF


@given(grids(max_dim=2), st.floats(0.125, 4.0))
def test_separable_equals_sum_of_parts(lat, a):
    comps = [cf.s_quadratic(a), cf.s_free_disposal(a)][: lat.n]
    c = cf.separable(comps)
    for row in lat.diffs:
        assert c(tuple(row)) == sum(comp(v) for comp, v in zip(comps, row))
