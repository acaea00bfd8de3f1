import json
import math
from pathlib import Path

import numpy as np
import pytest

from mcsadj import config
from mcsadj.dynamic_solver import optimal_value
from mcsadj.errors import ConfigError
from mcsadj.harness import SUITES, suite_instance

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def raw(**extra):
    doc = {
        "lattice": {"axes": [[0, 1, 2]]},
        "parameters": {"chain": [0, 1]},
        "objective": {"family": "table", "values": [[0, 0], [1, 2], [0, 3]]},
    }
    doc.update(extra)
    return doc


@pytest.mark.parametrize(
    "doc, path",
    [
        (raw(objective={"family": "table", "values": [[0, 0], ["x", 1], [0, 0]]}), "$.objective.values[1][0]"),
        (raw(dynamic={"delta": 1.5, "theta_tail": 1}), "$.dynamic.delta"),
        ({"model": {"name": "nope"}}, "$.model.name"),
        ({**raw(), "model": {"name": "pricing"}}, "$"),
    ],
)
def test_schema_errors_carry_a_path(doc, path):
    with pytest.raises(ConfigError) as err:
        config.validate(doc)
    assert err.value.path == path


def test_load_reports_bad_json(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{"lattice": ')
    with pytest.raises(ConfigError, match="line 1"):
        config.load(f)
    with pytest.raises(ConfigError, match="cannot read"):
        config.load(tmp_path / "missing.json")


def test_infinity_round_trips_as_a_string():
    text = config.dumps({"b": [math.inf, -math.inf], "a": (1, 2)})
    assert text.endswith("\n") and text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [1, 2], "b": ["inf", "-inf"]}


def test_raw_static_block():
    doc = raw(cost={"family": "fixed", "k": 0.5}, static={"theta_lo": 0, "theta_hi": 1, "x_lo": [1]})
    sc = config.build(doc)
    P = sc.static
    assert P.lattice.point(P.x_lo) == (1.0,)
    # payoff at theta=1 from x_lo=1: stay 2, move to 0 or 2 costs 0.5
    assert P.payoff().tolist() == [-0.5, 2.0, 2.5]
    assert P.solve().points() == [(2.0,)]


def test_raw_blocks_need_their_partners():
    with pytest.raises(ConfigError, match="needs a cost"):
        config.build(raw(static={"theta_lo": 0, "theta_hi": 1}))
    with pytest.raises(ConfigError) as err:
        config.build(raw(cost={"family": "zero"}, static={"theta_lo": 0, "theta_hi": 1, "choice_set": [[7]]}))
    assert err.value.path == "$.static.choice_set"


def test_phi_plus_linear_shape_checks():
    doc = raw(objective={"family": "phi_plus_linear", "phi": [0, 0], "slopes": [[0], [1]]})
    with pytest.raises(ConfigError) as err:
        config.build(doc)
    assert err.value.path == "$.objective.phi"
    ok = config.build(raw(objective={"family": "phi_plus_linear", "phi": [0, -1, -4], "slopes": [[0], [2]]}))
    assert ok.objective.values.tolist() == [[0, 0], [-1, 1], [-4, 0]]


def test_dynamic_block_defaults_to_top_cost():
    sc = config.build(raw(cost={"family": "quadratic", "a": 1.0}, dynamic={"theta_tail": 1, "x0": [0], "horizon": 5}))
    S = sc.dynamic
    assert S.horizon == 5 and S.delta == 0.9 and S.cost_tail((1.0,)) == 1.0


def test_sample_configs_build():
    pricing = config.build(CONFIGS / "pricing.json")
    assert pricing.static is not None and pricing.dynamic is not None
    over = config.build(CONFIGS / "overshoot.json")
    assert over.static.solve().points() == [(3.0,)]


@pytest.mark.parametrize("name", ["pricing", "factor_demand", "investment", "labor", "wishful"])
def test_model_blocks_with_defaults(name):
    sc = config.build({"model": {"name": name}})
    assert sc.model is not None
    if name != "wishful":
        assert sc.static is not None


@pytest.mark.parametrize("theorem", ["thm1", "thm2", "thm1p", "thm3", "thm4", "thm3p"])
@pytest.mark.parametrize("index", range(3))
def test_instances_round_trip_through_json(theorem, index):
    inst = suite_instance(theorem, 3, index)
    doc = json.loads(config.dumps(inst.to_config()))
    sc = config.build(doc)
    if SUITES[theorem].dynamic:
        a, b = inst.scenario(), sc.dynamic
        assert np.array_equal(a.objective.values, b.objective.values)
        assert (a.x0, a.delta, a.horizon) == (b.x0, b.delta, b.horizon)
        assert [a.theta_at(t) for t in range(1, 8)] == [b.theta_at(t) for t in range(1, 8)]
        assert optimal_value(a) == optimal_value(b)
    else:
        assert np.array_equal(inst.static().payoff(), sc.static.payoff())
    # canonical text survives a parse and re-dump unchanged
    assert config.dumps(doc) == config.dumps(inst.to_config())
