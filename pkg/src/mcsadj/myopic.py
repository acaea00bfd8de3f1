"""Short-lived agents: each period's choice maximizes that period's payoff
``G_t(x, x_prev) = F(x, theta_t) - C_t(x - x_prev)`` given the predecessor.

Sequences are built with the joins and meets from the existence arguments
rather than arbitrary maximizers, so they land in the cage
``[x_lo, x_bar]`` (or rise monotonically) by construction; every period is
then re-certified by direct enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import costs as cost_families
from .dynamic_solver import (
    REL_TOL,
    DynamicScenario,
    _cost_reports,
    _initial_report,
    _objective_reports,
    _theta_range_report,
    _x_bar,
    _x_bar_report,
    optimal_value,
    path_value,
    sandwich_transform,
    solve_dynamic,
)
from .errors import EngineError
from .lattice import GridLattice, Point
from .objective import Objective
from .properties import (
    _ok,
    check_cost_convex_separable,
    check_cost_monotone,
    check_cost_separable,
)
from .reports import TheoremReport, conclude, gate
from .static_solver import is_lottery

MODES = ("caged", "monotone")


@dataclass
class EquilibriumSequence:
    scenario: DynamicScenario = field(repr=False)
    mode: str
    ids: tuple[int, ...]
    continuation: int | None
    certified: tuple[bool, ...]

    @property
    def lattice(self) -> GridLattice:
        return self.scenario.lattice

    def points(self) -> list[Point]:
        return self.lattice.points(self.ids)

    def padded(self, n: int) -> list[int]:
        ids = list(self.ids)
        if self.continuation is not None:
            ids += [self.continuation] * max(0, n - len(ids))
        return ids

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "sequence": [list(p) for p in self.points()],
            "continuation": None if self.continuation is None else list(self.lattice.point(self.continuation)),
            "certified": all(self.certified),
        }


def _period_tol(S: DynamicScenario, t: int, g: np.ndarray) -> float:
    c = S.cost_at(t)
    return c.tie_tolerance(g) if is_lottery(c) else 0.0


def direct_payoff(S: DynamicScenario, t: int, prev: int) -> np.ndarray:
    """``G_t(., prev)`` by calling the cost on coordinate differences, without tables."""
    lat = S.lattice
    f = S.objective.values[:, S.theta_at(t)]
    cost = S.cost_at(t)
    base = lat.coords[prev]
    out = np.empty(len(lat))
    for i in range(len(lat)):
        eps = tuple(float(v) for v in lat.coords[i] - base)
        out[i] = cost.direct(f[i], eps) if is_lottery(cost) else f[i] - cost(eps)
    return out


def _certify(S: DynamicScenario, t: int, prev: int, x: int) -> bool:
    g = direct_payoff(S, t, prev)
    return bool(np.isfinite(g[x]) and g[x] >= np.max(g) - _period_tol(S, t, g))


def equilibrium_sequence(
    S: DynamicScenario, mode: str = "caged", x_bar=None, selection: str = "constructed"
) -> EquilibriumSequence:
    """Build a short-lived equilibrium sequence from ``x0``.

    ``selection="constructed"`` uses ``x_bar ^ (x0 v x'')`` with ``x''`` the
    first period maximizer, joined with all earlier choices in ``monotone``
    mode. ``selection="first"`` takes the first maximizer unmodified (for
    exploring arbitrary equilibria). Hypotheses are not checked here; see
    :func:`theorem5_check`.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if selection not in ("constructed", "first"):
        raise ValueError(f"unknown selection {selection!r}")
    lat = S.lattice
    xb = _x_bar(S, x_bar)
    lo = S.x0
    finite = S.finite_horizon is not None
    cap = S.finite_horizon if finite else max(S.horizon, S.prefix + len(lat) + 1)
    ids: list[int] = []
    certs: list[bool] = []
    prev = lo
    acc = None
    cont = None
    for t in range(1, cap + 1):
        R = S.reward(t)[prev]
        tol = _period_tol(S, t, R)
        fin = np.isfinite(R)
        best = np.max(R[fin])
        x2 = int(np.flatnonzero(fin & (R >= best - tol))[0])
        if selection == "first":
            x = x2
        else:
            x = lat.meet_id(xb, lat.join_id(lo, x2))
            if mode == "monotone" and acc is not None:
                x = lat.join_id(acc, x)
        acc = x if acc is None else lat.join_id(acc, x)
        ids.append(x)
        certs.append(_certify(S, t, prev, x))
        if not finite and t > S.prefix and x == prev:
            cont = x
            break
        prev = x
    if cont is not None:
        ids += [cont] * max(0, S.horizon - len(ids))
        certs += [True] * (len(ids) - len(certs))
    return EquilibriumSequence(S, mode, tuple(ids), cont, tuple(certs))


def theorem5_check(S: DynamicScenario, mode: str = "caged", x_bar=None, verify: bool = True) -> TheoremReport:
    """Caged: some equilibrium stays in ``[x0, x_bar]``. Monotone: some equilibrium rises toward ``x_bar``."""
    name = f"theorem5_{mode}"
    lat = S.lattice
    xb = _x_bar(S, x_bar)
    hyps = gate(
        name,
        [
            *_objective_reports(S),
            *_cost_reports(S, check_cost_monotone),
            _theta_range_report(S, increasing=mode == "monotone"),
            _initial_report(S),
            _x_bar_report(S, xb),
        ],
        verify,
    )
    seq = equilibrium_sequence(S, mode, xb)
    chain = [S.x0, *seq.ids]
    bad_cert = next((t for t, ok in enumerate(seq.certified, start=1) if not ok), None)
    bad_order = None
    for t in range(1, len(chain)):
        low = chain[t - 1] if mode == "monotone" else S.x0
        if not (lat.le(low, chain[t]) and lat.le(chain[t], xb)):
            bad_order = t
            break
    holds = bad_cert is None and bad_order is None
    witness = None if holds else {"period_not_optimal": bad_cert, "period_out_of_order": bad_order}
    return conclude(
        TheoremReport(
            name,
            holds,
            hyps,
            witness,
            points={"x0": lat.point(S.x0), "x_bar": lat.point(xb)},
            details={
                "sequence": seq.points(),
                "continuation": None if seq.continuation is None else lat.point(seq.continuation),
            },
        )
    )


def _join_family(seq: EquilibriumSequence, p_ids: list[int], p_cont: int | None):
    """The partially joined paths: entry t is ``x~_t v x_t`` for ``t <= T`` and ``x~_T v x_t`` after."""
    lat = seq.lattice
    n = max(len(seq.ids), len(p_ids))
    tilde = seq.padded(n)
    p = p_ids + [p_cont] * (n - len(p_ids)) if p_cont is not None else p_ids
    x0 = seq.scenario.x0
    for T in range(0, n + 1):
        anchor = x0 if T == 0 else tilde[T - 1]
        ids = [lat.join_id(tilde[t], p[t]) if t < T else lat.join_id(anchor, p[t]) for t in range(n)]
        cont = None
        if p_cont is not None and seq.continuation is not None:
            cont = lat.join_id(anchor, p_cont)
        yield T, ids, cont


def theorem6_check(S: DynamicScenario, x_bar=None, verify: bool = True) -> TheoremReport:
    """The forward-looking agent adjusts faster: ``x~_t v x_t`` is also optimal."""
    name = "theorem6"
    lat = S.lattice
    xb = _x_bar(S, x_bar)
    hyps = gate(
        name,
        [
            *_objective_reports(S, cardinal=True),
            *_cost_reports(S, check_cost_monotone),
            *_cost_reports(S, check_cost_separable),
            *_cost_reports(S, check_cost_convex_separable),
            _theta_range_report(S, increasing=True),
            _initial_report(S),
            _x_bar_report(S, xb),
        ],
        verify,
    )
    seq = equilibrium_sequence(S, "monotone", xb)
    finite = S.finite_horizon is not None
    if not finite and seq.continuation is None:
        raise EngineError("a monotone equilibrium sequence on a finite lattice must settle")
    p = sandwich_transform(solve_dynamic(S), S.x0, xb)
    best = optimal_value(S)
    atol = REL_TOL * max(1.0, abs(best))
    failed = None
    values = []
    for T, ids, cont in _join_family(seq, list(p.ids), p.continuation):
        v = path_value(S, ids, cont)
        values.append(v)
        if v < best - atol:
            failed = {"T": T, "value": v, "optimal_value": best}
            break
    full = [lat.join_id(a, b) for a, b in zip(seq.padded(len(p.ids)), p.padded(len(seq.ids)))]
    out = next(
        (t for t, (a, j) in enumerate(zip(seq.padded(len(full)), full), start=1) if not (lat.le(a, j) and lat.le(j, xb))),
        None,
    )
    holds = failed is None and out is None
    witness = None
    if not holds:
        witness = failed or {"period_outside": out}
    return conclude(
        TheoremReport(
            name,
            holds,
            hyps,
            witness,
            points={"x0": lat.point(S.x0), "x_bar": lat.point(xb)},
            details={
                "optimal_value": best,
                "joined_value": values[-1] if values else None,
                "myopic": seq.points(),
                "forward_looking": p.points(),
                "joined": lat.points(full),
            },
        )
    )


def prop2_select(
    objective: Objective,
    cost1,
    cost2,
    theta_lo,
    theta_hi,
    x_lo=None,
    verify: bool = True,
) -> TheoremReport:
    """Two-stage long run: adjust once under ``cost1``, then once more under ``cost2``.

    Built as a two-period monotone equilibrium sequence with adjustment
    prohibited afterwards; reports ``x_lo <= x_1 <= x_2 <= x_bar``.
    """
    n = objective.lattice.n
    S = DynamicScenario(
        objective,
        [theta_hi, theta_hi],
        theta_hi,
        [cost1, cost2],
        cost_families.prohibitive(n),
        x0=x_lo,
        theta_lo=theta_lo,
    )
    lat = S.lattice
    xb = _x_bar(S, None)
    hyps = gate(
        "prop2",
        [
            *_objective_reports(S),
            cost_reports_pair(S, cost1, cost2),
            _theta_range_report(S, increasing=True),
            _initial_report(S),
            _x_bar_report(S, xb),
        ],
        verify,
    )
    seq = equilibrium_sequence(S, "monotone", xb)
    x1, x2 = seq.ids[0], seq.ids[1]
    ordered = lat.le(S.x0, x1) and lat.le(x1, x2) and lat.le(x2, xb)
    certified = seq.certified[0] and seq.certified[1]
    holds = ordered and certified
    return conclude(
        TheoremReport(
            "prop2",
            holds,
            hyps,
            None if holds else {"x1": lat.point(x1), "x2": lat.point(x2), "certified": certified},
            points={"x_lo": lat.point(S.x0), "x1": lat.point(x1), "x2": lat.point(x2), "x_bar": lat.point(xb)},
        )
    )


def cost_reports_pair(S: DynamicScenario, cost1, cost2):
    for c in (cost1, cost2):
        r = check_cost_monotone(c, S.lattice)
        if not r:
            return r
    return _ok("monotone", "both stage costs")


__all__ = [
    "EquilibriumSequence",
    "direct_payoff",
    "equilibrium_sequence",
    "prop2_select",
    "theorem5_check",
    "theorem6_check",
]
