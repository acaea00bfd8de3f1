"""One-shot adjustment: maximize ``G(x) = F(x, theta_hi) - C(x - x_lo)``.

The selections here are the constructive ones: join the old choice with a
lexicographically-first maximizer and check the result. Hypotheses are
verified exhaustively before anything is selected; ``verify=False`` skips
the gate so that counterexamples can be run to completion.

The cost may also be a lottery over cost states (see ``stochastic``), in
which case ``G`` is the expected utility of the adjusted payoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import InfeasibleError, LatticeError
from .lattice import GridLattice, Point
from .objective import Objective
from .properties import (
    CostTable,
    PropertyReport,
    _fail,
    _ok,
    check_cost_minimally_monotone,
    check_cost_strictly_minimally_monotone,
    check_quasi_supermodular,
    check_single_crossing_diff,
)
from .reports import TheoremReport, conclude, gate


@dataclass(frozen=True)
class ArgmaxSet:
    """All maximizers (ids ascending, so lexicographic) and the attained value."""

    lattice: GridLattice
    ids: tuple[int, ...]
    value: float

    def __contains__(self, i: int) -> bool:
        return int(i) in self.ids

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def first(self) -> int:
        return self.ids[0]

    def points(self) -> list[Point]:
        return self.lattice.points(self.ids)


def argmax(values: np.ndarray, lattice: GridLattice, ids: Iterable[int] | None = None, tol: float = 0.0) -> ArgmaxSet:
    """Exact argmax of a table over ``ids`` (default: all members).

    ``-inf`` entries are infeasible and never selected. With ``tol > 0`` every
    value within ``tol`` of the maximum counts as a maximizer.
    """
    values = np.asarray(values, dtype=float)
    ids = np.arange(len(lattice)) if ids is None else np.asarray(sorted(int(i) for i in ids), dtype=np.int64)
    if ids.size == 0:
        raise InfeasibleError("argmax over an empty set")
    sub = values[ids]
    feasible = np.isfinite(sub)
    if not feasible.any():
        raise InfeasibleError("every candidate is infeasible")
    best = float(sub[feasible].max())
    hit = feasible & (sub >= best - tol)
    return ArgmaxSet(lattice, tuple(int(i) for i in ids[hit]), best)


def argmax_of(f, lattice: GridLattice) -> ArgmaxSet:
    """Argmax of a callable on lattice points."""
    return argmax(np.array([f(lattice.point(i)) for i in range(len(lattice))], dtype=float), lattice)


def is_lottery(cost) -> bool:
    return hasattr(cost, "states") and hasattr(cost, "expected")


def adjusted_payoff(f: np.ndarray, diff_ids: np.ndarray, cost, lattice: GridLattice) -> np.ndarray:
    """``F - C`` (or its expected utility for a lottery) on an array of difference ids."""
    if is_lottery(cost):
        return cost.expected(f, diff_ids, lattice)
    c = CostTable.of(cost, lattice).values
    return f - c[diff_ids]


def cost_reports(check, cost, lattice: GridLattice) -> PropertyReport:
    """Run a cost check on a cost, or on every positive-probability state of a lottery."""
    if not is_lottery(cost):
        return check(cost, lattice)
    for s, (p, c) in enumerate(cost.states):
        if p <= 0:
            continue
        r = check(c, lattice)
        if not r:
            return _fail(r.name, {**r.witness, "state": s}, r.note)
        name = r.name
    return _ok(name, "every positive-probability cost state")


class StaticProblem:
    """A static adjustment problem.

    Args:
        objective: ``F`` tabulated on the lattice and parameter poset.
        cost: a ``CostFunction``, a precomputed ``CostTable``, or a lottery.
        theta_lo, theta_hi: old and new parameter values.
        x_lo: old choice; defaults to the first maximizer of ``F(., theta_lo)``
            over the initial set.
        initial_ids, choice_ids: member ids of the old and new constraint
            sets (default: the whole lattice).
        tol: tie tolerance used by argmax; defaults to 0 for a deterministic
            cost and to a relative tolerance for a lottery.
    """

    def __init__(
        self,
        objective: Objective,
        cost,
        theta_lo: Any,
        theta_hi: Any,
        x_lo: Sequence[float] | None = None,
        initial_ids: Iterable[int] | None = None,
        choice_ids: Iterable[int] | None = None,
        tol: float | None = None,
    ):
        self.objective = objective
        self.lattice = objective.lattice
        self.poset = objective.poset
        self.cost = cost
        self.t_lo = self.poset.index(theta_lo)
        self.t_hi = self.poset.index(theta_hi)
        m = len(self.lattice)
        self.initial_ids = np.arange(m) if initial_ids is None else np.array(sorted(set(int(i) for i in initial_ids)), dtype=np.int64)
        self.choice_ids = np.arange(m) if choice_ids is None else np.array(sorted(set(int(i) for i in choice_ids)), dtype=np.int64)
        self.tol = None if tol is None else float(tol)
        if x_lo is None:
            self.x_lo = argmax(objective.column(self.t_lo), self.lattice, self.initial_ids).first
        else:
            self.x_lo = self.lattice.id_of(x_lo)
            if self.x_lo not in set(self.initial_ids.tolist()):
                raise LatticeError(f"initial choice {tuple(x_lo)} is outside the initial set")

    @property
    def theta_lo(self):
        return self.poset.element(self.t_lo)

    @property
    def theta_hi(self):
        return self.poset.element(self.t_hi)

    def payoff(self) -> np.ndarray:
        """``G`` over every lattice member (``-inf`` where infeasible)."""
        lat = self.lattice
        return adjusted_payoff(self.objective.column(self.t_hi), lat.diff_table[:, self.x_lo], self.cost, lat)

    def tie(self, G: np.ndarray) -> float:
        if self.tol is not None:
            return self.tol
        return self.cost.tie_tolerance(G) if is_lottery(self.cost) else 0.0

    def solve(self) -> ArgmaxSet:
        G = self.payoff()
        return argmax(G, self.lattice, self.choice_ids, self.tie(G))

    def frictionless(self, t: int | None = None, ids=None) -> ArgmaxSet:
        t = self.t_hi if t is None else t
        return argmax(self.objective.column(t), self.lattice, self.choice_ids if ids is None else ids)

    # ----------------------------------------------------------- hypotheses
    def order_report(self, strict: bool = False) -> PropertyReport:
        ok = self.poset.lt(self.t_lo, self.t_hi) if strict else self.poset.le(self.t_lo, self.t_hi)
        name = "parameter_strictly_increases" if strict else "parameter_increases"
        if ok:
            return _ok(name)
        return _fail(name, {"theta_lo": self.theta_lo, "theta_hi": self.theta_hi})

    def initial_report(self) -> PropertyReport:
        best = argmax(self.objective.column(self.t_lo), self.lattice, self.initial_ids)
        if self.x_lo in best:
            return _ok("initial_choice_optimal")
        return _fail(
            "initial_choice_optimal",
            {"x_lo": self.lattice.point(self.x_lo), "value": self.objective.values[self.x_lo, self.t_lo], "best": best.value},
        )

    def objective_reports(self, strict_scd: bool = False) -> list[PropertyReport]:
        return [
            check_quasi_supermodular(self.objective, self.lattice),
            check_single_crossing_diff(self.objective, strict=strict_scd),
        ]

    def cost_report(self, check) -> PropertyReport:
        return cost_reports(check, self.cost, self.lattice)

    def describe(self) -> dict:
        lat = self.lattice
        return {"theta_lo": self.theta_lo, "theta_hi": self.theta_hi, "x_lo": lat.point(self.x_lo)}


def _suffix(P: StaticProblem) -> str:
    return "_prime" if is_lottery(P.cost) else ""


def _selection(P: StaticProblem, G: np.ndarray, best: ArgmaxSet) -> tuple[int, int]:
    x_prime = best.first
    return x_prime, P.lattice.join_id(P.x_lo, x_prime)


def theorem1_check(P: StaticProblem, verify: bool = True) -> TheoremReport:
    """Upward response: ``x_lo v x'`` maximizes ``G`` and lies above ``x_lo``."""
    name = "theorem1" + _suffix(P)
    hyps = gate(
        name,
        [*P.objective_reports(), P.cost_report(check_cost_minimally_monotone), P.order_report(), P.initial_report()],
        verify,
    )
    lat = P.lattice
    G = P.payoff()
    best = argmax(G, lat, P.choice_ids, P.tie(G))
    x_prime, x_hat = _selection(P, G, best)
    optimal = x_hat in best
    above = lat.le(P.x_lo, x_hat)
    witness = None
    if not (optimal and above):
        witness = {"x_hat": lat.point(x_hat), "x_prime": lat.point(x_prime), "optimal": optimal, "above_x_lo": above}
    report = TheoremReport(
        name,
        optimal and above,
        hyps,
        witness,
        points={"x_lo": lat.point(P.x_lo), "x_prime": lat.point(x_prime), "x_hat": lat.point(x_hat)},
        details={"argmax": best.points(), "value": best.value},
    )
    return conclude(report)


def theorem1_select(P: StaticProblem, verify: bool = True) -> Point:
    return theorem1_check(P, verify).points["x_hat"]


def theorem1_star_check(P: StaticProblem, verify: bool = True) -> TheoremReport:
    """Shifted constraint sets: the choice set must be higher than the initial set.

    Also checks the companion pair: for every ``x'`` maximizing ``G`` over the
    new set, ``x_lo ^ x'`` maximizes ``F(., theta_lo)`` over the old set and
    ``x_lo v x'`` maximizes ``G`` over the new set.
    """
    name = "theorem1_star" + _suffix(P)
    lat = P.lattice
    sets = []
    for label, ids in (("initial_set", P.initial_ids), ("choice_set", P.choice_ids)):
        ok, pair = lat.is_sublattice(ids)
        sets.append(_ok(f"{label}_sublattice") if ok else _fail(f"{label}_sublattice", {"x": lat.point(pair[0]), "y": lat.point(pair[1])}))
    if lat.strong_set_geq_ids(P.choice_ids, P.initial_ids):
        sets.append(_ok("choice_set_higher"))
    else:
        bad = next(
            (int(x), int(y))
            for x in P.choice_ids
            for y in P.initial_ids
            if lat.join_id(x, y) not in set(P.choice_ids.tolist()) or lat.meet_id(x, y) not in set(P.initial_ids.tolist())
        )
        sets.append(_fail("choice_set_higher", {"x": lat.point(bad[0]), "y": lat.point(bad[1])}))
    hyps = gate(
        name,
        [*P.objective_reports(), P.cost_report(check_cost_minimally_monotone), P.order_report(), *sets, P.initial_report()],
        verify,
    )
    G = P.payoff()
    best = argmax(G, lat, P.choice_ids, P.tie(G))
    old = argmax(P.objective.column(P.t_lo), lat, P.initial_ids)
    x_prime, x_hat = _selection(P, G, best)
    optimal = x_hat in best
    above = lat.le(P.x_lo, x_hat)
    companion = None
    for xp in best.ids:
        lo, hi = lat.meet_id(P.x_lo, xp), lat.join_id(P.x_lo, xp)
        if lo not in old or hi not in best:
            companion = {"x_prime": lat.point(xp), "meet_optimal": lo in old, "join_optimal": hi in best}
            break
    holds = optimal and above and companion is None
    witness = None
    if not holds:
        witness = {"x_hat": lat.point(x_hat), "optimal": optimal, "above_x_lo": above, "companion": companion}
    report = TheoremReport(
        name,
        holds,
        hyps,
        witness,
        points={"x_lo": lat.point(P.x_lo), "x_prime": lat.point(x_prime), "x_hat": lat.point(x_hat)},
        details={"argmax": best.points(), "value": best.value, "companion_holds": companion is None},
    )
    return conclude(report)


def theorem1_star_select(P: StaticProblem, verify: bool = True) -> Point:
    return theorem1_star_check(P, verify).points["x_hat"]


def prop1_forall_check(P: StaticProblem, mode: str = "a", verify: bool = True) -> TheoremReport:
    """Every maximizer of ``G`` lies above ``x_lo``.

    Mode ``"a"`` asks for strict single-crossing differences and a minimally
    monotone cost; mode ``"b"`` for plain single crossing and a strictly
    minimally monotone cost. Both need a strict parameter increase.
    """
    if mode not in ("a", "b"):
        raise ValueError(f"mode must be 'a' or 'b', got {mode!r}")
    name = f"prop1{mode}"
    cost_check = check_cost_minimally_monotone if mode == "a" else check_cost_strictly_minimally_monotone
    hyps = gate(
        name,
        [*P.objective_reports(strict_scd=mode == "a"), P.cost_report(cost_check), P.order_report(strict=True), P.initial_report()],
        verify,
    )
    lat = P.lattice
    best = P.solve()
    below = [i for i in best.ids if not lat.le(P.x_lo, i)]
    witness = {"maximizer": lat.point(below[0]), "x_lo": lat.point(P.x_lo)} if below else None
    report = TheoremReport(
        name,
        not below,
        hyps,
        witness,
        points={"x_lo": lat.point(P.x_lo)},
        details={"argmax": best.points(), "value": best.value},
    )
    return conclude(report)


def dual(P: StaticProblem) -> StaticProblem:
    """The same problem with every coordinate negated and the parameter order reversed.

    A parameter decrease in ``P`` is an increase in the dual, so the increase
    theorems applied to the dual give the decrease counterparts.
    """
    from .costs import flipped as flip_cost

    lat = P.lattice
    new, rows = lat.flipped(range(lat.n))
    where = np.empty_like(rows)
    where[rows] = np.arange(rows.size)
    poset = P.poset.reversed()
    obj = P.objective.reindexed(new, rows, poset)
    if is_lottery(P.cost):
        cost = P.cost.mapped(lambda c: flip_cost(c, range(lat.n)))
    else:
        cost = flip_cost(P.cost, range(lat.n))
    return StaticProblem(
        obj,
        cost,
        P.theta_lo,
        P.theta_hi,
        x_lo=new.point(int(where[P.x_lo])),
        initial_ids=where[P.initial_ids],
        choice_ids=where[P.choice_ids],
        tol=P.tol,
    )


def unflip(P: StaticProblem, x: Sequence[float]) -> Point:
    """Map a point of ``dual(P)`` back to the original coordinates."""
    return tuple(-float(v) + 0.0 for v in x)
