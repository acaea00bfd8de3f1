"""Forward-looking adjustment over time.

The agent picks ``x_1, x_2, ...`` to maximize
``sum_t delta^(t-1) [F(x_t, theta_t) - C_t(x_t - x_(t-1))]``. Parameters and
costs follow a finite prefix and then stay constant, so the problem is an
exact finite-state dynamic program: value iteration (polished by policy
evaluation) on the stationary tail, backward induction over the prefix.

With ``finite_horizon=K`` the objective is the literal K-period sum and
everything is solved by backward induction. Path values are then computed
with the same nested arithmetic as the recursion, so they agree exactly with
exhaustive enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import kernels
from .errors import ConfigError, ConvergenceError, CycleError, InfeasibleError
from .lattice import GridLattice, Point
from .objective import Objective
from .properties import (
    CostTable,
    PropertyReport,
    _fail,
    _ok,
    check_cost_monotone,
    check_cost_separable,
    check_quasi_supermodular,
    check_single_crossing_diff,
    check_supermodular,
)
from .reports import TheoremReport, conclude, gate
from .static_solver import adjusted_payoff, argmax, cost_reports, is_lottery

REL_TOL = 1e-9


class DynamicScenario:
    """Parameters and costs over time, the discount factor and the start point.

    Args:
        objective: ``F`` on the lattice and parameter poset.
        thetas, costs: the transient prefix (period 1 onward). Either may be
            empty, in which case it repeats its tail for the other's length.
        theta_tail, cost_tail: values from the end of the prefix onward.
        delta: discount factor in (0, 1).
        x0: initial choice; defaults to the first maximizer of
            ``F(., theta_lo)``.
        theta_lo, theta_hi: the bounds used by the theorem checks
            (``theta_hi`` defaults to the tail parameter).
        horizon: number of periods reported.
        finite_horizon: solve the K-period problem instead.
    """

    def __init__(
        self,
        objective: Objective,
        thetas: Sequence[Any],
        theta_tail: Any,
        costs: Sequence[Any],
        cost_tail,
        delta: float = 0.9,
        x0: Sequence[float] | None = None,
        theta_lo: Any = None,
        theta_hi: Any = None,
        horizon: int = 40,
        finite_horizon: int | None = None,
        tol: float = 1e-10,
        max_iter: int = 10**6,
    ):
        if not 0 < delta < 1:
            raise ConfigError(f"discount factor must lie in (0, 1), got {delta}")
        thetas, costs = list(thetas), list(costs)
        if thetas and costs and len(thetas) != len(costs):
            raise ConfigError(f"parameter prefix has {len(thetas)} periods but cost prefix has {len(costs)}")
        if finite_horizon is not None and finite_horizon < 1:
            raise ConfigError("finite horizon must be at least 1")
        self.objective = objective
        self.lattice = objective.lattice
        self.poset = objective.poset
        self.prefix = max(len(thetas), len(costs))
        self.theta_ids = [self.poset.index(t) for t in thetas] or [self.poset.index(theta_tail)] * self.prefix
        self.theta_tail = self.poset.index(theta_tail)
        self.costs = costs or [cost_tail] * self.prefix
        self.cost_tail = cost_tail
        self.delta = float(delta)
        self.horizon = int(horizon)
        self.finite_horizon = finite_horizon
        self.tol = float(tol)
        self.max_iter = int(max_iter)
        self.t_lo = None if theta_lo is None else self.poset.index(theta_lo)
        self.t_hi = self.theta_tail if theta_hi is None else self.poset.index(theta_hi)
        if x0 is None:
            if self.t_lo is None:
                raise ConfigError("give either x0 or theta_lo")
            self.x0 = argmax(objective.column(self.t_lo), self.lattice).first
        else:
            self.x0 = self.lattice.id_of(x0)
        for c in [*self.costs, cost_tail]:
            if not is_lottery(c):
                CostTable.of(c, self.lattice)  # validates C(0) < inf
        self._rewards: dict = {}

    # -------------------------------------------------------------- periods
    @property
    def periods(self) -> int:
        """Number of explicitly solved periods (prefix, or K for finite horizon)."""
        return self.finite_horizon if self.finite_horizon is not None else self.prefix

    def theta_at(self, t: int) -> int:
        return self.theta_ids[t - 1] if t <= self.prefix else self.theta_tail

    def cost_at(self, t: int):
        return self.costs[t - 1] if t <= self.prefix else self.cost_tail

    def reward(self, t: int) -> np.ndarray:
        """``R[s, a]``: period-t payoff of moving from member s to member a."""
        return self._reward(self.theta_at(t), self.cost_at(t))

    def tail_reward(self) -> np.ndarray:
        return self._reward(self.theta_tail, self.cost_tail)

    def _reward(self, th: int, cost) -> np.ndarray:
        key = (th, id(cost))
        R = self._rewards.get(key)
        if R is None:
            lat = self.lattice
            R = adjusted_payoff(self.objective.column(th)[None, :], lat.diff_table.T, cost, lat)
            R = np.ascontiguousarray(R, dtype=float)
            R.setflags(write=False)
            self._rewards[key] = (R, cost)
        else:
            R = R[0]
        return R

    def all_costs(self) -> list:
        seen, out = set(), []
        for c in [*self.costs[: self.periods], self.cost_tail]:
            if id(c) not in seen:
                seen.add(id(c))
                out.append(c)
        return out

    def all_thetas(self) -> list[int]:
        ts = [self.theta_at(t) for t in range(1, self.periods + 1)]
        if self.finite_horizon is None:
            ts.append(self.theta_tail)
        return ts

    def scale(self) -> float:
        R = self.tail_reward()
        fin = np.abs(R[np.isfinite(R)])
        return max(1.0, float(fin.max()) / (1.0 - self.delta) if fin.size else 1.0)

    def tie(self) -> float:
        """Tie tolerance for greedy policy extraction in the infinite-horizon case."""
        if self.finite_horizon is not None:
            return 0.0
        return 1e-11 * self.scale()

    def with_(self, **kw) -> "DynamicScenario":
        """A copy with some constructor arguments replaced."""
        args = dict(
            objective=self.objective,
            thetas=[self.poset.element(t) for t in self.theta_ids],
            theta_tail=self.poset.element(self.theta_tail),
            costs=self.costs,
            cost_tail=self.cost_tail,
            delta=self.delta,
            x0=self.lattice.point(self.x0),
            theta_lo=None if self.t_lo is None else self.poset.element(self.t_lo),
            theta_hi=self.poset.element(self.t_hi),
            horizon=self.horizon,
            finite_horizon=self.finite_horizon,
            tol=self.tol,
            max_iter=self.max_iter,
        )
        args.update(kw)
        return DynamicScenario(**args)


@dataclass
class Path:
    """Choices ``x_1 .. x_N`` (member ids) and the point held forever after."""

    scenario: DynamicScenario = field(repr=False)
    ids: tuple[int, ...]
    continuation: int | None
    value: float

    @property
    def lattice(self) -> GridLattice:
        return self.scenario.lattice

    def points(self) -> list[Point]:
        return self.lattice.points(self.ids)

    def point(self, t: int) -> Point:
        """``x_t`` for any ``t >= 1`` (the continuation beyond the stored prefix)."""
        if t <= len(self.ids):
            return self.lattice.point(self.ids[t - 1])
        if self.continuation is None:
            raise IndexError(f"period {t} is past the horizon")
        return self.lattice.point(self.continuation)

    def padded(self, n: int) -> list[int]:
        ids = list(self.ids)
        if self.continuation is not None:
            ids += [self.continuation] * max(0, n - len(ids))
        return ids

    def rows(self) -> list[dict]:
        """One record per reported period: coordinates, payoff and adjustment cost."""
        S = self.scenario
        lat = self.lattice
        n = len(self.ids) if S.finite_horizon is not None else max(S.horizon, len(self.ids))
        ids = self.padded(n)
        out, prev = [], S.x0
        for t, i in enumerate(ids, start=1):
            payoff = float(S.objective.values[i, S.theta_at(t)])
            out.append({"t": t, "x": lat.point(i), "payoff": payoff, "cost": payoff - float(S.reward(t)[prev, i])})
            prev = i
        return out

    def to_dict(self) -> dict:
        return {
            "path": [list(p) for p in self.points()],
            "continuation": None if self.continuation is None else list(self.lattice.point(self.continuation)),
            "value": self.value,
        }


# ------------------------------------------------------------------ values
def path_value(S: DynamicScenario, ids: Sequence[int], continuation: int | None = None) -> float:
    """Discounted value of a path, evaluated by Horner nesting from the end.

    Infinite horizon: ``ids`` must cover the prefix and ``continuation`` must
    equal the last entry (held forever).
    """
    ids = [int(i) for i in ids]
    d = S.delta
    if S.finite_horizon is not None:
        if len(ids) != S.finite_horizon:
            raise ValueError(f"a finite-horizon path needs {S.finite_horizon} entries, got {len(ids)}")
        h = 0.0
    else:
        if continuation is None or not ids or continuation != ids[-1]:
            raise ValueError("an infinite-horizon path must end at its continuation point")
        if len(ids) < S.prefix:
            ids = ids + [continuation] * (S.prefix - len(ids))
        c = ids[-1]
        h = float(S.tail_reward()[c, c]) / (1.0 - d)
    prevs = [S.x0] + ids[:-1]
    for t in range(len(ids), 0, -1):
        h = float(S.reward(t)[prevs[t - 1], ids[t - 1]]) + d * h
    return h


def _restrict(R: np.ndarray, states: np.ndarray | None, allowed: np.ndarray | None) -> np.ndarray:
    if states is not None:
        R = R[np.ix_(states, states)]
    if allowed is not None:
        R = np.where(allowed, R, -np.inf)
    return np.ascontiguousarray(R)


def _greedy(Q: np.ndarray, tie: float) -> np.ndarray:
    best = Q.max(axis=-1, keepdims=True)
    return np.argmax(Q >= best - tie, axis=-1)


def stationary_values(R: np.ndarray, delta: float, tol: float = 1e-10, max_iter: int = 10**6, tie: float = 0.0) -> np.ndarray:
    """Optimal values of the stationary problem ``max_a R[s, a] + delta V[a]``.

    Value iteration to ``tol`` first, then exact policy evaluation and
    improvement until no action gains more than ``tie``.
    """
    m = R.shape[0]
    V, _, ok = kernels.value_iteration(R, delta, tol, max_iter, np.zeros(m))
    if not ok:
        raise ConvergenceError(f"value iteration did not reach {tol} within {max_iter} sweeps")
    rows = np.arange(m)
    eye = np.eye(m)
    for _ in range(m + 10):
        pol = _greedy(R + delta * V[None, :], tie)
        trans = np.zeros((m, m))
        trans[rows, pol] = 1.0
        Vp = np.linalg.solve(eye - delta * trans, R[rows, pol])
        gain = kernels.bellman_max(R, Vp, delta) - Vp
        V = Vp
        if gain.max() <= tie:
            break
    return V


def value_functions(
    S: DynamicScenario, states: np.ndarray | None = None, allowed: np.ndarray | None = None
) -> list[np.ndarray]:
    """``Vs[t - 1]`` is the value from period t onward, for t = 1 .. periods + 1.

    The last entry is the stationary tail (or zero at the end of a finite
    horizon). ``states`` restricts the problem to a sub-set of members and
    ``allowed[s, a]`` to a sub-set of moves.
    """
    m = len(S.lattice) if states is None else len(states)
    if S.finite_horizon is not None:
        nxt = np.zeros(m)
    else:
        R = _restrict(S.tail_reward(), states, allowed)
        nxt = stationary_values(R, S.delta, S.tol, S.max_iter, S.tie())
    Vs = [nxt]
    for t in range(S.periods, 0, -1):
        nxt = kernels.bellman_max(_restrict(S.reward(t), states, allowed), nxt, S.delta)
        Vs.append(nxt)
    return Vs[::-1]


def bellman_residual(S: DynamicScenario, V: np.ndarray | None = None) -> float:
    """Sup-norm violation of the stationary Bellman equation."""
    R = S.tail_reward()
    if V is None:
        V = value_functions(S.with_(thetas=[], costs=[]))[-1]
    return float(np.max(np.abs(kernels.bellman_max(R, V, S.delta) - V)))


def solve_dynamic(S: DynamicScenario) -> Path:
    """The optimal path from ``x0`` with lexicographically-first tie-breaking."""
    Vs = value_functions(S)
    d = S.delta
    tie = S.tie()
    if not np.isfinite(Vs[0][S.x0]):
        raise InfeasibleError("every path from the initial point is infeasible")
    ids: list[int] = []
    s = S.x0
    if S.finite_horizon is not None:
        for t in range(1, S.finite_horizon + 1):
            s = int(_greedy(S.reward(t)[s] + d * Vs[t], tie))
            ids.append(s)
        return Path(S, tuple(ids), None, path_value(S, ids))
    seen: set[int] = set()
    t = 1
    while True:
        nxt = Vs[t] if t <= S.prefix else Vs[-1]
        a = int(_greedy(S.reward(t)[s] + d * nxt, tie))
        ids.append(a)
        if t > S.prefix:
            if a == s:
                break
            if s in seen:
                raise CycleError(f"optimal policy cycles through {S.lattice.point(s)} without settling")
            seen.add(s)
        s = a
        t += 1
    ids = ids + [a] * max(0, S.horizon - len(ids))
    return Path(S, tuple(ids), a, path_value(S, ids, a))


def optimal_value(S: DynamicScenario) -> float:
    return float(value_functions(S)[0][S.x0])


# -------------------------------------------------------------- transforms
def _remap(p: Path, f) -> Path:
    S = p.scenario
    ids = tuple(f(i) for i in p.ids)
    cont = None if p.continuation is None else f(p.continuation)
    return Path(S, ids, cont, path_value(S, ids, cont))


def sandwich_transform(p: Path, x_lo: int, x_bar: int) -> Path:
    """``x_bar ^ (x_lo v x_t)`` in every period."""
    lat = p.lattice
    return _remap(p, lambda i: lat.meet_id(x_bar, lat.join_id(x_lo, i)))


def monotonize(p: Path) -> Path:
    """Replace each entry with the running join ``x_1 v ... v x_t``."""
    lat = p.lattice
    ids, acc = [], None
    for i in p.ids:
        acc = i if acc is None else lat.join_id(acc, i)
        ids.append(acc)
    cont = None
    if p.continuation is not None:
        cont = lat.join_id(acc, p.continuation)
    return Path(p.scenario, tuple(ids), cont, path_value(p.scenario, ids, cont))


# ------------------------------------------------------------- hypotheses
def _objective_reports(S: DynamicScenario, cardinal: bool = False) -> list[PropertyReport]:
    check = check_supermodular if cardinal else check_quasi_supermodular
    return [check(S.objective, S.lattice), check_single_crossing_diff(S.objective)]


def _cost_reports(S: DynamicScenario, check) -> list[PropertyReport]:
    out = []
    for c in S.all_costs():
        out.append(cost_reports(check, c, S.lattice))
    return out


def _require_lo(S: DynamicScenario) -> int:
    if S.t_lo is None:
        raise ConfigError("theorem checks need theta_lo")
    return S.t_lo


def _theta_range_report(S: DynamicScenario, increasing: bool = False) -> PropertyReport:
    lo, hi = _require_lo(S), S.t_hi
    P = S.poset
    ts = S.all_thetas()
    for t, th in enumerate(ts, start=1):
        if not (P.le(lo, th) and P.le(th, hi)):
            return _fail("parameters_between_bounds", {"period": t, "theta": P.element(th)})
    name = "parameters_between_bounds"
    if increasing:
        name = "parameters_increase_between_bounds"
        for t in range(1, len(ts)):
            if not P.le(ts[t - 1], ts[t]):
                return _fail(name, {"period": t + 1, "theta_before": P.element(ts[t - 1]), "theta": P.element(ts[t])})
    return _ok(name)


def _initial_report(S: DynamicScenario) -> PropertyReport:
    lo = _require_lo(S)
    best = argmax(S.objective.column(lo), S.lattice)
    if S.x0 in best:
        return _ok("initial_choice_optimal")
    return _fail("initial_choice_optimal", {"x0": S.lattice.point(S.x0), "best": best.value})


def longrun_point(S: DynamicScenario) -> tuple[int, bool]:
    """``x0 v x''`` for the largest (else first) frictionless ``theta_hi`` maximizer."""
    lat = S.lattice
    best = argmax(S.objective.column(S.t_hi), lat)
    top = lat.largest(best.ids)
    xb = lat.join_id(S.x0, top if top is not None else best.first)
    return xb, top is not None and xb == top


def _x_bar(S: DynamicScenario, x_bar) -> int:
    if x_bar is None:
        return longrun_point(S)[0]
    return x_bar if isinstance(x_bar, (int, np.integer)) else S.lattice.id_of(x_bar)


def _x_bar_report(S: DynamicScenario, xb: int) -> PropertyReport:
    lat = S.lattice
    best = argmax(S.objective.column(S.t_hi), lat)
    if xb in best and lat.le(S.x0, xb):
        return _ok("long_run_choice_valid")
    return _fail("long_run_choice_valid", {"x_bar": lat.point(xb), "optimal": xb in best})


def _suffix(S: DynamicScenario) -> str:
    return "_prime" if any(is_lottery(c) for c in S.all_costs()) else ""


def _atol(v: float) -> float:
    return REL_TOL * max(1.0, abs(v))


def box_value(S: DynamicScenario, lo: int, hi: int, monotone: bool = False) -> float:
    """Optimal value when every choice must stay in ``[lo, hi]`` (and never fall, if ``monotone``)."""
    lat = S.lattice
    states = lat.ids_in_box(lat.point(lo), lat.point(hi))
    allowed = lat.leq_matrix[np.ix_(states, states)] if monotone else None
    Vs = value_functions(S, states, allowed)
    return float(Vs[0][int(np.searchsorted(states, S.x0))])


def _inside(lat: GridLattice, p: Path, lo: int, hi: int) -> int | None:
    ids = list(p.ids) + ([] if p.continuation is None else [p.continuation])
    for t, i in enumerate(ids, start=1):
        if not (lat.le(lo, i) and lat.le(i, hi)):
            return t
    return None


def theorem3_check(S: DynamicScenario, x_bar=None, verify: bool = True) -> TheoremReport:
    """Some optimal path stays inside ``[x0, x_bar]`` in every period."""
    name = "theorem3" + _suffix(S)
    lat = S.lattice
    xb = _x_bar(S, x_bar)
    hyps = gate(
        name,
        [
            *_objective_reports(S),
            *_cost_reports(S, check_cost_monotone),
            _theta_range_report(S),
            _initial_report(S),
            _x_bar_report(S, xb),
        ],
        verify,
    )
    p = solve_dynamic(S)
    best = optimal_value(S)
    atol = _atol(best)
    q = sandwich_transform(p, S.x0, xb)
    boxed = box_value(S, S.x0, xb)
    out = _inside(lat, q, S.x0, xb)
    preserved = q.value >= best - atol
    oracle = boxed >= best - atol
    holds = preserved and oracle and out is None
    witness = None
    if not holds:
        witness = {"value": best, "transformed_value": q.value, "box_value": boxed, "period_outside": out}
    return conclude(
        TheoremReport(
            name,
            holds,
            hyps,
            witness,
            points={"x0": lat.point(S.x0), "x_bar": lat.point(xb)},
            details={
                "optimal_value": best,
                "path_value": p.value,
                "transformed_value": q.value,
                "box_value": boxed,
                "path": p.points(),
                "transformed": q.points(),
                "continuation": None if q.continuation is None else lat.point(q.continuation),
            },
        )
    )


def _stationary_reports(S: DynamicScenario) -> list[PropertyReport]:
    lat = S.lattice
    out = []
    tail = S.cost_tail
    for t in range(1, S.periods + 1):
        c = S.cost_at(t)
        if c is not tail and not np.array_equal(CostTable.of(c, lat).values, CostTable.of(tail, lat).values):
            out.append(_fail("stationary_cost", {"period": t}))
            break
    else:
        out.append(_ok("stationary_cost"))
    bad = [t for t in range(1, S.periods + 1) if S.theta_at(t) != S.t_hi]
    if S.theta_tail != S.t_hi:
        bad.append(S.periods + 1)
    out.append(_fail("stationary_parameter", {"period": bad[0]}) if bad else _ok("stationary_parameter"))
    return out


def theorem4_check(S: DynamicScenario, x_bar=None, verify: bool = True) -> TheoremReport:
    """Some optimal path rises monotonically from ``x0`` toward ``x_bar``."""
    name = "theorem4"
    lat = S.lattice
    xb = _x_bar(S, x_bar)
    if any(is_lottery(c) for c in S.all_costs()):
        raise ConfigError("the monotone-path check takes deterministic costs only")
    hyps = gate(
        name,
        [
            *_objective_reports(S, cardinal=True),
            *_stationary_reports(S),
            *_cost_reports(S, check_cost_monotone),
            *_cost_reports(S, check_cost_separable),
            _theta_range_report(S),
            _initial_report(S),
            _x_bar_report(S, xb),
        ],
        verify,
    )
    p = solve_dynamic(S)
    best = optimal_value(S)
    atol = _atol(best)
    q = sandwich_transform(p, S.x0, xb)
    X = monotonize(q)
    seq = [S.x0, *X.ids] + ([] if X.continuation is None else [X.continuation])
    rising = next((t for t in range(1, len(seq)) if not lat.le(seq[t - 1], seq[t])), None)
    capped = _inside(lat, X, S.x0, xb)
    # each period's move shrinks toward zero under monotonization
    cost_up = None
    for t in range(2, len(X.ids) + 1):
        c = S.cost_at(t)
        ct = CostTable.of(c, lat)
        D = lat.diff_table
        before = ct.values[D[q.ids[t - 1], q.ids[t - 2]]]
        after = ct.values[D[X.ids[t - 1], X.ids[t - 2]]]
        if after > before:
            cost_up = t
            break
    boxed = box_value(S, S.x0, xb, monotone=True)
    preserved = X.value >= best - atol
    oracle = boxed >= best - atol
    holds = preserved and oracle and rising is None and capped is None and cost_up is None
    witness = None
    if not holds:
        witness = {
            "value": best,
            "monotone_value": X.value,
            "monotone_box_value": boxed,
            "period_falling": rising,
            "period_outside": capped,
            "period_cost_rises": cost_up,
        }
    return conclude(
        TheoremReport(
            name,
            holds,
            hyps,
            witness,
            points={"x0": lat.point(S.x0), "x_bar": lat.point(xb)},
            details={
                "optimal_value": best,
                "monotone_value": X.value,
                "monotone_box_value": boxed,
                "path": p.points(),
                "monotone_path": X.points(),
                "continuation": None if X.continuation is None else lat.point(X.continuation),
            },
        )
    )


# ------------------------------------------------------------ brute force
def brute_force(S: DynamicScenario, length: int | None = None, monotone: bool = False) -> tuple[float, tuple[int, ...]]:
    """Best path by enumerating every sequence of members.

    Finite horizon: all ``m**K`` sequences, valued with the solver's own
    nesting. Infinite horizon: sequences of ``length`` periods held forever
    afterwards, which bounds the optimum from below. ``monotone`` keeps only
    nondecreasing sequences.
    """
    lat = S.lattice
    K = S.finite_horizon if S.finite_horizon is not None else (length or max(S.prefix, 1))
    best, arg = -np.inf, None
    for seq in itertools.product(range(len(lat)), repeat=K):
        if monotone and any(not lat.le(a, b) for a, b in zip((S.x0,) + seq, seq)):
            continue
        v = path_value(S, seq) if S.finite_horizon is not None else path_value(S, seq, seq[-1])
        if v > best:
            best, arg = v, seq
    if arg is None:
        raise InfeasibleError("no feasible path")
    return best, arg


__all__ = [
    "DynamicScenario",
    "Path",
    "bellman_residual",
    "box_value",
    "brute_force",
    "longrun_point",
    "monotonize",
    "optimal_value",
    "path_value",
    "sandwich_transform",
    "solve_dynamic",
    "stationary_values",
    "theorem3_check",
    "theorem4_check",
    "value_functions",
]
