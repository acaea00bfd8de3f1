"""Scenario documents: JSON in, solver objects out.

A document either spells out the raw blocks (``lattice``, ``parameters``,
``objective`` plus ``cost``/``lottery``, ``static``, ``dynamic``) or names an
application ``model``. Infinite costs are written as the string ``"inf"``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from . import costs as cost_families
from . import models
from .dynamic_solver import DynamicScenario
from .errors import ConfigError, McsError
from .lattice import GridLattice, ParamPoset
from .objective import Objective
from .static_solver import StaticProblem
from .stochastic import CostLottery, lottery_from_spec

SCHEMA = json.loads(resources.files("mcsadj").joinpath("schema/scenario.json").read_text())
_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def encode(v: Any) -> Any:
    """Make a value JSON-safe: tuples to lists, numpy scalars to Python, infinities to strings."""
    if isinstance(v, dict):
        return {str(k): encode(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [encode(x) for x in v]
    if isinstance(v, np.ndarray):
        return encode(v.tolist())
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return v
    return v


def dumps(doc: Any) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(encode(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _json_path(err: jsonschema.ValidationError) -> str:
    out = "$"
    for part in err.absolute_path:
        out += f"[{part}]" if isinstance(part, int) else f".{part}"
    return out


def validate(doc: Any) -> None:
    err = jsonschema.exceptions.best_match(_VALIDATOR.iter_errors(doc))
    if err is not None:
        if err.validator == "oneOf" and not err.absolute_path and isinstance(doc, dict):
            # report against the document kind the user evidently meant
            branch = 0 if "model" in doc else 1
            inner = [e for e in err.context if e.schema_path and e.schema_path[0] == branch]
            if inner:
                err = jsonschema.exceptions.best_match(inner)
        while err.context:
            err = jsonschema.exceptions.best_match(err.context)
        if err.validator == "not" and not err.absolute_path:
            raise ConfigError("a 'model' block excludes the raw 'lattice', 'parameters' and 'objective' blocks")
        raise ConfigError(err.message, _json_path(err))


def load(source: str | Path | dict) -> dict:
    if isinstance(source, dict):
        doc = source
    else:
        try:
            doc = json.loads(Path(source).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read {source}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    validate(doc)
    return doc


@dataclass
class Scenario:
    doc: dict
    objective: Objective | None = None
    cost: Any = None
    static: StaticProblem | None = None
    dynamic: DynamicScenario | None = None
    model: Any = None

    @property
    def lattice(self) -> GridLattice | None:
        return None if self.objective is None else self.objective.lattice


# --------------------------------------------------------------- raw blocks
def _lattice(block: dict) -> GridLattice:
    return GridLattice(block["axes"], members=block.get("members"))


def _poset(block: dict) -> ParamPoset:
    if "chain" in block:
        return ParamPoset.chain(block["chain"])
    if "product" in block:
        return ParamPoset.product(block["product"])
    return ParamPoset(block["elements"], block["leq"])


def _objective(block: dict, lat: GridLattice, poset: ParamPoset) -> Objective:
    if block["family"] == "table":
        return Objective(lat, poset, block["values"])
    phi = np.asarray(block["phi"], dtype=float)
    slopes = np.asarray(block["slopes"], dtype=float)
    if phi.shape != (len(lat),):
        raise ConfigError(f"phi needs {len(lat)} entries", "$.objective.phi")
    if slopes.shape != (len(poset), lat.n):
        raise ConfigError(f"slopes needs {len(poset)} rows of {lat.n}", "$.objective.slopes")
    return Objective(lat, poset, phi[:, None] + lat.coords @ slopes.T, name="phi_plus_linear")


def _cost_or_lottery(spec: dict, n: int, path: str):
    if "lottery" in spec:
        return lottery_from_spec(spec["lottery"], n, f"{path}.lottery")
    return cost_families.from_spec(spec, n, path)


def _ids(lat: GridLattice, pts, path: str):
    if pts is None:
        return None
    try:
        return [lat.id_of(p) for p in pts]
    except McsError as exc:
        raise ConfigError(str(exc), path) from None


def _raw(doc: dict) -> Scenario:
    lat = _lattice(doc["lattice"])
    poset = _poset(doc["parameters"])
    obj = _objective(doc["objective"], lat, poset)
    if "cost" in doc and "lottery" in doc:
        raise ConfigError("give either cost or lottery, not both")
    cost = None
    if "lottery" in doc:
        cost = lottery_from_spec(doc["lottery"], lat.n)
    elif "cost" in doc:
        cost = cost_families.from_spec(doc["cost"], lat.n)
    sc = Scenario(doc, obj, cost)
    if "static" in doc:
        if cost is None:
            raise ConfigError("the static block needs a cost or lottery", "$.static")
        st = doc["static"]
        sc.static = StaticProblem(
            obj,
            cost,
            st["theta_lo"],
            st["theta_hi"],
            x_lo=st.get("x_lo"),
            initial_ids=_ids(lat, st.get("initial_set"), "$.static.initial_set"),
            choice_ids=_ids(lat, st.get("choice_set"), "$.static.choice_set"),
        )
    if "dynamic" in doc:
        sc.dynamic = _dynamic(doc["dynamic"], obj, cost)
    return sc


def _dynamic(dy: dict, obj: Objective, cost) -> DynamicScenario:
    n = obj.lattice.n
    tail = dy.get("cost_tail")
    cost_tail = _cost_or_lottery(tail, n, "$.dynamic.cost_tail") if tail is not None else cost
    if cost_tail is None:
        raise ConfigError("the dynamic block needs cost_tail or a top-level cost", "$.dynamic")
    path_costs = [_cost_or_lottery(c, n, f"$.dynamic.costs[{k}]") for k, c in enumerate(dy.get("costs", []))]
    if "theta_tail" not in dy:
        raise ConfigError("theta_tail is required", "$.dynamic")
    return DynamicScenario(
        obj,
        dy.get("thetas", []),
        dy["theta_tail"],
        path_costs,
        cost_tail,
        delta=dy.get("delta", 0.9),
        x0=dy.get("x0"),
        theta_lo=dy.get("theta_lo"),
        theta_hi=dy.get("theta_hi"),
        horizon=dy.get("horizon", 40),
        finite_horizon=dy.get("finite_horizon"),
    )


# ------------------------------------------------------------- model blocks
def _scalar_fn(spec, path: str):
    if isinstance(spec, list):
        return models._table_or_call({p[0]: p[1] for p in spec}, path)
    fam = spec.get("family")
    if fam == "quadratic":
        a = float(spec["a"])
        return lambda v: a * v * v
    if fam == "linear":
        a = float(spec["a"])
        return lambda v: a * v
    if fam == "table":
        return models._table_or_call({p[0]: p[1] for p in spec["points"]}, path)
    raise ConfigError(f"unknown function family {fam!r}", path)


def _production2(spec, path: str):
    fam = spec.get("family")
    if fam == "quadratic":
        ak, al, bkk, bll, bkl = (float(v) for v in spec["coef"])
        return lambda k, l: ak * k + al * l - 0.5 * bkk * k * k - 0.5 * bll * l * l + bkl * k * l  # noqa: E741
    if fam == "cobb_douglas":
        a, b, s = float(spec["alpha"]), float(spec["beta"]), float(spec.get("scale", 1.0))
        return lambda k, l: s * k**a * l**b  # noqa: E741
    if fam == "table":
        tab = {(float(r[0]), float(r[1])): float(r[2]) for r in spec["values"]}

        def look(k, l):  # noqa: E741
            try:
                return tab[(float(k), float(l))]
            except KeyError:
                raise ConfigError(f"no production value for ({k}, {l})", path) from None

        return look
    raise ConfigError(f"unknown production family {fam!r}", path)


def _cost_spec(block: dict, default: dict, n: int):
    return cost_families.from_spec(block.get("cost", default), n, "$.model.cost")


def _dyn_kw(block: dict) -> dict:
    dy = block.get("dynamic", {})
    out = {k: dy[k] for k in ("delta", "horizon", "finite_horizon") if k in dy}
    return out


def _model(doc: dict) -> Scenario:
    b = doc["model"]
    name = b["name"]
    try:
        if name == "pricing":
            M = models.build_pricing(
                b.get("prices", [1.5 + 0.25 * k for k in range(7)]),
                b.get("marginal_costs", [b.get("before", [1.0, 1.0])[0], b.get("after", [1.5, 1.0])[0]]),
                b.get("elasticities", sorted({b.get("before", [1.0, 1.0])[1], b.get("after", [1.5, 1.0])[1]})),
                demand=b.get("demand", "exponential"),
                **b.get("demand_params", {}),
            )
            before, after = tuple(b.get("before", [1.0, 1.0])), tuple(b.get("after", [1.5, 1.0]))
            cost = _cost_spec(b, {"family": "quadratic", "a": 0.05}, 1)
            return Scenario(doc, M.objective, cost, M.problem(before, after, cost), M.scenario(before, after, cost, **_dyn_kw(b)), M)
        if name == "factor_demand":
            grid = [0.5 * k for k in range(9)]
            prod = _production2(b.get("production", {"family": "quadratic", "coef": [4, 4, 1, 1, -0.5]}), "$.model.production")
            wages = b.get("wages", [2.0, 1.0])
            M = models.build_factor_demand(
                b.get("capital", grid), b.get("labor", grid), prod, b.get("rental", 1.0), wages, b.get("complements")
            )
            cost = _cost_spec(b, {"family": "quadratic", "a": 0.25}, 2)
            P = M.problem(wages[0], wages[-1], cost, x_lo=b.get("x_lo"))
            return Scenario(doc, P.objective, P.cost, P, None, M)
        if name == "investment":
            prod = b.get("production", {"family": "power", "alpha": 0.5})
            if prod.get("family") == "power":
                alpha = float(prod["alpha"])
                f = lambda k, eta: eta * k**alpha  # noqa: E731
            elif prod.get("family") == "table":
                tab = {(float(r[0]), float(r[1])): float(r[2]) for r in prod["values"]}
                f = lambda k, eta: tab[(float(k), float(eta))]  # noqa: E731
            else:
                raise ConfigError(f"unknown production family {prod.get('family')!r}", "$.model.production")
            before, after = tuple(b.get("before", [1, 2, 1])), tuple(b.get("after", [1, 3, 1]))
            M = models.build_investment(b.get("capital", [0.5 * k for k in range(9)]), f, [before, after])
            cost = _cost_spec(b, {"family": "lumpy", "a": 0.25, "size": 1.0}, 1)
            return Scenario(doc, M.objective, cost, M.problem(before, after, cost), M.scenario(before, after, cost, **_dyn_kw(b)), M)
        if name == "labor":
            M = models.build_labor(
                b.get("hours", [0.5 * k for k in range(7)]),
                b.get("wage", 2.0),
                _scalar_fn(b.get("tax", {"family": "quadratic", "a": 0.25}), "$.model.tax"),
                _scalar_fn(b.get("tax_flat", {"family": "quadratic", "a": 0.125}), "$.model.tax_flat"),
                _scalar_fn(b.get("disutility", {"family": "quadratic", "a": 0.5}), "$.model.disutility"),
            )
            cost = _cost_spec(b, {"family": "quadratic", "a": 0.5}, 1)
            return Scenario(doc, M.objective, cost, M.problem(cost), M.scenario(cost, **_dyn_kw(b)), M)
        if name == "wishful":
            kw = {k: b.get(k, v) for k, v in models.WISHFUL_DEMO.items()}
            M = models.build_wishful(**kw, kl_scale=b.get("kl_scale", 0.2))
            return Scenario(doc, None, M.cost, None, None, M)
    except KeyError as exc:
        raise ConfigError(f"missing field {exc}", "$.model") from None
    raise ConfigError(f"unknown model {name!r}", "$.model.name")


def build(source: str | Path | dict) -> Scenario:
    doc = load(source)
    return _model(doc) if "model" in doc else _raw(doc)


def scenario_doc(objective: Objective, cost=None, static: dict | None = None, dynamic: dict | None = None, meta=None) -> dict:
    """Serialize raw blocks; ``static`` and ``dynamic`` are plain dicts of block fields."""
    doc: dict = {
        "lattice": objective.lattice.to_config(),
        "parameters": objective.poset.to_config(),
        "objective": objective.to_config(),
    }
    if cost is not None:
        if isinstance(cost, CostLottery):
            doc["lottery"] = cost.to_config()
        else:
            doc["cost"] = cost.spec
    if static is not None:
        doc["static"] = static
    if dynamic is not None:
        doc["dynamic"] = dynamic
    if meta is not None:
        doc["meta"] = meta
    return encode(doc)


def cost_block(cost) -> dict:
    if isinstance(cost, CostLottery):
        return {"lottery": cost.to_config()}
    if cost.spec is None:
        raise ConfigError(f"cost {cost.name} has no serializable description")
    return cost.spec
