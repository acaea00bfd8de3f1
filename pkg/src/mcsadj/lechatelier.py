"""Short-run against long-run responses to a parameter increase.

The long-run choice ``x_bar`` maximizes ``F(., theta_hi)`` with no
adjustment cost. With a monotone cost, the short-run choice ``x_bar ^ x'``
lies between the old choice and ``x_bar``. The two-stage comparison lives in
``myopic.prop2_select`` because it is a two-period equilibrium sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import LatticeError
from .lattice import Point
from .properties import (
    PropertyReport,
    _fail,
    _ok,
    check_cost_monotone,
    check_cost_strictly_monotone,
)
from .reports import TheoremReport, conclude, gate
from .static_solver import ArgmaxSet, StaticProblem, _suffix


@dataclass
class LeChatelierResult:
    x_lo: Point
    x_hat: Point
    x_bar: Point
    x_prime: Point
    sandwich: bool
    largest: bool
    universal_bound: bool | None
    report: TheoremReport = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "x_lo": list(self.x_lo),
            "x_hat": list(self.x_hat),
            "x_bar": list(self.x_bar),
            "x_prime": list(self.x_prime),
            "sandwich": self.sandwich,
            "largest": self.largest,
            "universal_bound": self.universal_bound,
            "report": self.report.to_dict(),
        }


def longrun_select(P: StaticProblem) -> tuple[int, bool]:
    """A frictionless ``theta_hi`` maximizer above ``x_lo`` and whether it is the largest one.

    Built as ``x_lo v x''``; ``x''`` is the largest frictionless maximizer when
    there is one, otherwise the first.
    """
    lat = P.lattice
    best = P.frictionless()
    top = lat.largest(best.ids)
    x2 = top if top is not None else best.first
    x_bar = lat.join_id(P.x_lo, x2)
    return x_bar, top is not None and x_bar == top


def longrun_candidates(P: StaticProblem) -> list[int]:
    """Every frictionless ``theta_hi`` maximizer that lies above ``x_lo``."""
    lat = P.lattice
    return [i for i in P.frictionless().ids if lat.le(P.x_lo, i)]


def _x_bar_report(P: StaticProblem, x_bar: int, best: ArgmaxSet) -> PropertyReport:
    lat = P.lattice
    if x_bar in best and lat.le(P.x_lo, x_bar):
        return _ok("long_run_choice_valid")
    return _fail(
        "long_run_choice_valid",
        {"x_bar": lat.point(x_bar), "optimal": x_bar in best, "above_x_lo": lat.le(P.x_lo, x_bar)},
    )


def _resolve_x_bar(P: StaticProblem, x_bar) -> tuple[int, bool]:
    lat = P.lattice
    if x_bar is None:
        return longrun_select(P)
    i = x_bar if isinstance(x_bar, int) else lat.id_of(x_bar)
    return i, i == lat.largest(P.frictionless().ids)


def theorem2_check(P: StaticProblem, x_bar=None, verify: bool = True) -> LeChatelierResult:
    """Sandwich ``x_lo <= x_bar ^ x' <= x_bar`` and, for the largest ``x_bar``, the bound on every maximizer."""
    name = "theorem2" + _suffix(P)
    lat = P.lattice
    xb, largest = _resolve_x_bar(P, x_bar)
    free = P.frictionless()
    hyps = gate(
        name,
        [
            *P.objective_reports(),
            P.cost_report(check_cost_monotone),
            P.order_report(),
            P.initial_report(),
            _x_bar_report(P, xb, free),
        ],
        verify,
    )
    best = P.solve()
    x_prime = lat.join_id(P.x_lo, best.first)
    x_hat = lat.meet_id(xb, x_prime)
    optimal = x_hat in best
    sandwich = optimal and lat.le(P.x_lo, x_hat) and lat.le(x_hat, xb)
    universal = None
    above = []
    if largest:
        above = [i for i in best.ids if not lat.le(i, xb)]
        universal = not above
    holds = sandwich and universal is not False
    witness = None
    if not holds:
        witness = {"x_hat": lat.point(x_hat), "x_bar": lat.point(xb), "optimal": optimal}
        if above:
            witness["maximizer_above_x_bar"] = lat.point(above[0])
    report = conclude(
        TheoremReport(
            name,
            holds,
            hyps,
            witness,
            points={"x_lo": lat.point(P.x_lo), "x_prime": lat.point(x_prime), "x_hat": lat.point(x_hat), "x_bar": lat.point(xb)},
            details={"argmax": best.points(), "value": best.value, "x_bar_largest": largest, "long_run_argmax": free.points()},
        )
    )
    return LeChatelierResult(
        lat.point(P.x_lo), lat.point(x_hat), lat.point(xb), lat.point(x_prime), sandwich, largest, universal, report
    )


def theorem2_select(P: StaticProblem, x_bar=None, verify: bool = True) -> LeChatelierResult:
    return theorem2_check(P, x_bar, verify)


def prop3_forall_check(P: StaticProblem, x_bar=None, verify: bool = True) -> TheoremReport:
    """With a strictly monotone cost every maximizer of ``G`` lies in ``[x_lo, x_bar]``.

    Without an explicit ``x_bar`` the check runs against every frictionless
    maximizer above ``x_lo``.
    """
    lat = P.lattice
    free = P.frictionless()
    targets = longrun_candidates(P) if x_bar is None else [x_bar if isinstance(x_bar, int) else lat.id_of(x_bar)]
    if not targets:
        raise LatticeError("no frictionless maximizer lies above the initial choice")
    hyps = gate(
        "prop3",
        [
            *P.objective_reports(),
            P.cost_report(check_cost_strictly_monotone),
            P.order_report(),
            P.initial_report(),
            *[_x_bar_report(P, xb, free) for xb in targets],
        ],
        verify,
    )
    best = P.solve()
    witness = None
    for xb in targets:
        out = [i for i in best.ids if not (lat.le(P.x_lo, i) and lat.le(i, xb))]
        if out:
            witness = {"maximizer": lat.point(out[0]), "x_lo": lat.point(P.x_lo), "x_bar": lat.point(xb)}
            break
    return conclude(
        TheoremReport(
            "prop3",
            witness is None,
            hyps,
            witness,
            points={"x_lo": lat.point(P.x_lo)},
            details={"argmax": best.points(), "x_bars": lat.points(targets)},
        )
    )
