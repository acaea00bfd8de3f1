"""Uncertain adjustment costs.

A :class:`CostLottery` draws the cost function from a finite list of states
and values outcomes through a strictly increasing utility ``u``. Static
problems maximize ``E[u(F - C_s)]``; dynamic problems use that expectation
as the period payoff, which is exact when states are independent across
periods. A lottery can be passed anywhere a cost is accepted.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .costs import CostFunction, _num, from_spec
from .dynamic_solver import DynamicScenario, theorem3_check
from .errors import ConfigError
from .lattice import GridLattice
from .lechatelier import theorem2_check
from .objective import Objective
from .properties import CostTable
from .static_solver import StaticProblem, theorem1_check


class Utility:
    """A strictly increasing utility, vectorized over numpy arrays."""

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], spec: dict):
        self._fn = fn
        self.spec = spec

    def __call__(self, v):
        return self._fn(np.asarray(v, dtype=float))

    def __repr__(self) -> str:
        return f"Utility({self.spec})"


def linear(scale: float = 1.0) -> Utility:
    if scale <= 0:
        raise ConfigError("linear utility needs a positive scale")
    return Utility(lambda v: scale * v, {"family": "linear", "scale": scale})


def cara(a: float = 1.0) -> Utility:
    """``(1 - exp(-a v)) / a``: constant absolute risk aversion ``a > 0``."""
    if a <= 0:
        raise ConfigError("CARA utility needs a > 0")
    return Utility(lambda v: -np.expm1(-a * v) / a, {"family": "cara", "a": a})


def piecewise(kink: float = 0.0, slope_below: float = 2.0, slope_above: float = 1.0) -> Utility:
    """Piecewise linear through ``(kink, 0)``; concave when ``slope_below >= slope_above``."""
    if slope_below <= 0 or slope_above <= 0:
        raise ConfigError("piecewise utility needs positive slopes")
    return Utility(
        lambda v: np.where(v < kink, slope_below * (v - kink), slope_above * (v - kink)),
        {"family": "piecewise", "kink": kink, "slope_below": slope_below, "slope_above": slope_above},
    )


def table(points: Sequence[Sequence[float]]) -> Utility:
    """Linear interpolation through ``(v, u)`` points; evaluating outside their range is an error."""
    pts = sorted((float(a), float(b)) for a, b in points)
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if xs.size < 2 or np.any(np.diff(xs) <= 0) or np.any(np.diff(ys) <= 0):
        raise ConfigError("utility table must be strictly increasing with at least two points")

    def fn(v):
        if np.any((v < xs[0]) | (v > xs[-1])):
            raise ValueError(f"utility table covers [{xs[0]}, {xs[-1]}] only")
        return np.interp(v, xs, ys)

    return Utility(fn, {"family": "table", "points": [list(p) for p in pts]})


UTILITIES = {"linear": linear, "cara": cara, "piecewise": piecewise, "table": table}


def utility_from_spec(spec, path: str = "$.lottery.utility") -> Utility:
    if isinstance(spec, str):
        spec = {"family": spec}
    fam = spec.get("family") if isinstance(spec, dict) else None
    if fam not in UTILITIES:
        raise ConfigError(f"unknown utility family {fam!r}", path)
    try:
        return UTILITIES[fam](**{k: v for k, v in spec.items() if k != "family"})
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {fam}: {exc}", path) from None


class CostLottery:
    """Cost states ``(probability, CostFunction)`` and a utility.

    Each live state's ``C_s(0)`` must be finite; this is enforced when the
    state is first tabulated.
    """

    def __init__(self, states: Sequence[tuple[float, CostFunction]], utility: Utility | None = None):
        self.states = [(float(p), c) for p, c in states]
        if not self.states:
            raise ConfigError("a lottery needs at least one state")
        probs = [p for p, _ in self.states]
        if any(p < 0 for p in probs) or abs(math.fsum(probs) - 1.0) > 1e-12:
            raise ConfigError(f"state probabilities must be nonnegative and sum to 1, got {probs}")
        self.utility = utility or linear()

    def _live(self):
        return [(p, c) for p, c in self.states if p > 0]

    def expected(self, f, diff_ids, lattice: GridLattice) -> np.ndarray:
        """``sum_s P(s) u(f - C_s)`` on an array of difference ids; ``-inf`` if any live state is infinite."""
        f = np.asarray(f, dtype=float)
        diff_ids = np.asarray(diff_ids)
        shape = np.broadcast_shapes(f.shape, diff_ids.shape)
        total = np.zeros(shape)
        blocked = np.zeros(shape, dtype=bool)
        for p, c in self._live():
            cv = CostTable.of(c, lattice).values[diff_ids]
            inf = np.isinf(cv)
            blocked |= inf
            net = np.broadcast_to(f - np.where(inf, 0.0, cv), shape)
            total = total + p * self.utility(net)
        return np.where(blocked, -np.inf, total)

    def direct(self, f: float, eps: Sequence[float]) -> float:
        """The same expectation at one point, by calling each cost directly."""
        total = 0.0
        for p, c in self._live():
            v = c(eps)
            if math.isinf(v):
                return -math.inf
            total += p * float(self.utility(f - v))
        return total

    def tie_tolerance(self, values) -> float:
        """Relative tolerance for ties between expected utilities."""
        v = np.asarray(values, dtype=float)
        fin = np.abs(v[np.isfinite(v)])
        return 1e-12 * max(1.0, float(fin.max()) if fin.size else 1.0)

    def mapped(self, fn: Callable[[CostFunction], CostFunction]) -> "CostLottery":
        return CostLottery([(p, fn(c)) for p, c in self.states], self.utility)

    def to_config(self) -> dict:
        return {
            "states": [{"prob": p, "cost": c.spec} for p, c in self.states],
            "utility": self.utility.spec,
        }

    def __repr__(self) -> str:
        return f"CostLottery({len(self.states)} states, {self.utility.spec['family']})"


def lottery_from_spec(spec: dict, n: int, path: str = "$.lottery") -> CostLottery:
    states = spec.get("states")
    if not isinstance(states, list) or not states:
        raise ConfigError("lottery needs a nonempty 'states' list", path)
    out = []
    for k, st in enumerate(states):
        out.append((float(_num(st["prob"], f"{path}.states[{k}].prob")), from_spec(st["cost"], n, f"{path}.states[{k}].cost")))
    return CostLottery(out, utility_from_spec(spec.get("utility", "linear"), f"{path}.utility"))


def expected_objective(x, theta, x_lo, lottery: CostLottery, F: Objective) -> float:
    """``E[u(F(x, theta) - C_s(x - x_lo))]`` at a single point."""
    eps = tuple(float(a) - float(b) for a, b in zip(x, x_lo))
    return lottery.direct(F(x, theta), eps)


def theorem_prime_check(problem, which: str, verify: bool = True):
    """Run the deterministic check with ``G`` replaced by its expected utility.

    ``which`` is ``"1"`` or ``"2"`` for a :class:`StaticProblem` and ``"3"``
    for a :class:`DynamicScenario`; the cost (or cost path) must contain a
    lottery.
    """
    if which == "1":
        return theorem1_check(_static(problem), verify)
    if which == "2":
        return theorem2_check(_static(problem), verify=verify).report
    if which == "3":
        if not isinstance(problem, DynamicScenario):
            raise TypeError("the dynamic check takes a DynamicScenario")
        return theorem3_check(problem, verify=verify)
    raise ValueError(f"unknown check {which!r}; expected '1', '2' or '3'")


def _static(P) -> StaticProblem:
    if not isinstance(P, StaticProblem):
        raise TypeError("static checks take a StaticProblem")
    return P
