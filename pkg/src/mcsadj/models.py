"""Application models built on the generic solvers.

Each ``build_*`` tabulates its primitives on the grid, runs the property
profile the model needs and raises :class:`HypothesisError` with the failing
report if any check fails. A built model hands out :class:`StaticProblem` and
:class:`DynamicScenario` instances through ``problem`` and ``scenario``.

The ``demo_*`` functions run the small worked instances exposed by the CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import costs as cost_families
from .costs import CostFunction
from .dynamic_solver import DynamicScenario, solve_dynamic, theorem4_check
from .errors import ConfigError, HypothesisError
from .lattice import GridLattice, ParamPoset, Point
from .lechatelier import theorem2_check
from .objective import Objective
from .properties import (
    PropertyReport,
    _fail,
    _ok,
    check_cost_minimally_monotone,
    check_cost_monotone,
    check_increasing_diff,
    check_log_increasing_diff,
    check_single_crossing_diff,
    check_submodular,
    check_supermodular,
)
from .reports import TheoremReport, conclude, gate
from .static_solver import StaticProblem, is_lottery, theorem1_check, theorem1_star_check


def _require(model: str, reports: Sequence[PropertyReport]) -> list[PropertyReport]:
    for r in reports:
        if not r:
            raise HypothesisError(model, r)
    return list(reports)


def _flip_cost(cost, dims):
    if is_lottery(cost):
        return cost.mapped(lambda c: cost_families.flipped(c, dims))
    return cost_families.flipped(cost, dims)


def flip_dimensions(P, dims: Sequence[int]):
    """Negate the listed coordinates of the choice variable.

    Works on a :class:`StaticProblem` or a :class:`DynamicScenario`; the
    objective is re-enumerated and every cost is composed with the flip, so
    all payoffs are unchanged point for point. Flipping twice is the identity.
    """
    dims = sorted(set(int(d) for d in dims))
    lat = P.lattice
    new, rows = lat.flipped(dims)
    where = np.empty_like(rows)
    where[rows] = np.arange(rows.size)
    obj = P.objective.reindexed(new, rows)
    if isinstance(P, StaticProblem):
        return StaticProblem(
            obj,
            _flip_cost(P.cost, dims),
            P.theta_lo,
            P.theta_hi,
            x_lo=new.point(int(where[P.x_lo])),
            initial_ids=where[P.initial_ids],
            choice_ids=where[P.choice_ids],
            tol=P.tol,
        )
    if isinstance(P, DynamicScenario):
        flipped = {}
        for c in [*P.costs, P.cost_tail]:
            if id(c) not in flipped:
                flipped[id(c)] = _flip_cost(c, dims)
        return P.with_(
            objective=obj,
            costs=[flipped[id(c)] for c in P.costs],
            cost_tail=flipped[id(P.cost_tail)],
            x0=new.point(int(where[P.x0])),
        )
    raise TypeError(f"cannot flip a {type(P).__name__}")


def _table_or_call(spec, name: str) -> Callable[[float], float]:
    if callable(spec):
        return spec
    if isinstance(spec, Mapping):
        table = {float(k): float(v) for k, v in spec.items()}

        def look(v):
            try:
                return table[float(v)]
            except KeyError:
                raise ConfigError(f"{name} has no entry for {v}") from None

        return look
    raise ConfigError(f"{name} must be a callable or a table")


# --------------------------------------------------------------- pricing
DEMANDS: dict[str, Callable[..., float]] = {
    "linear": lambda p, eta, a=10.0: a - eta * p,
    "exponential": lambda p, eta, a=1.0: a * math.exp(-eta * p),
    "ces": lambda p, eta, a=1.0: a * p ** (-eta),
}


@dataclass
class PricingModel:
    """A monopolist's profit ``(p - c) D(p, eta)`` over a price grid.

    Parameters are pairs ``(c, -eta)`` in the product order, so a higher
    marginal cost or a less elastic demand is a parameter increase.
    """

    objective: Objective
    demand: Objective = field(repr=False)
    certificates: list[PropertyReport] = field(repr=False)

    @property
    def lattice(self) -> GridLattice:
        return self.objective.lattice

    @staticmethod
    def theta(c: float, eta: float) -> tuple[float, float]:
        return (float(c), -float(eta))

    def problem(self, before: tuple[float, float], after: tuple[float, float], cost, **kw) -> StaticProblem:
        """``before`` and ``after`` are ``(c, eta)`` pairs."""
        return StaticProblem(self.objective, cost, self.theta(*before), self.theta(*after), **kw)

    def scenario(self, before, after, cost, **kw) -> DynamicScenario:
        return DynamicScenario(self.objective, [], self.theta(*after), [], cost, theta_lo=self.theta(*before), **kw)


def build_pricing(
    prices: Sequence[float],
    marginal_costs: Sequence[float],
    elasticities: Sequence[float],
    demand: str | Callable[[float, float], float] = "exponential",
    **demand_params: float,
) -> PricingModel:
    """Tabulate profit and certify single-crossing in ``(p, (c, -eta))``.

    ``demand`` is a family name from :data:`DEMANDS` (extra keyword arguments
    go to it) or a callable ``D(p, eta)``.
    """
    if isinstance(demand, str):
        if demand not in DEMANDS:
            raise ConfigError(f"unknown demand family {demand!r}; choose from {sorted(DEMANDS)}")
        fam = DEMANDS[demand]
        D = lambda p, eta: fam(p, eta, **demand_params)  # noqa: E731
    else:
        D = demand
    if any(c < 0 for c in marginal_costs):
        raise ConfigError("marginal costs must be nonnegative")
    lat = GridLattice([sorted(float(p) for p in prices)])
    neg_eta = sorted({-float(e) for e in elasticities})
    table = np.array([[D(lat.point(i)[0], -ne) for ne in neg_eta] for i in range(len(lat))], dtype=float)
    if not np.all(np.isfinite(table)) or np.any(table <= 0):
        i, j = np.argwhere(~(table > 0) | ~np.isfinite(table))[0]
        raise HypothesisError(
            "pricing", _fail("demand_positive", {"p": lat.point(int(i))[0], "eta": -neg_eta[j], "demand": table[i, j]})
        )
    demand_obj = Objective(lat, ParamPoset.chain(neg_eta), table, name="demand")
    thetas = [(float(c), ne) for c in sorted(set(float(c) for c in marginal_costs)) for ne in neg_eta]
    poset = ParamPoset.product(thetas)
    profit = Objective.from_function(lat, poset, lambda x, th: (x[0] - th[0]) * D(x[0], -th[1]), name="profit")
    certs = _require("pricing", [check_log_increasing_diff(demand_obj), check_single_crossing_diff(profit)])
    return PricingModel(profit, demand_obj, certs)


# --------------------------------------------------------- factor demand
@dataclass
class FactorDemandModel:
    """Profit ``f(k, l) - r k - w l``; parameters are ``-w`` so a wage drop is an increase.

    For substitutes (submodular ``f``) the solvers run on ``(-k, l)``; use
    :meth:`problem` and :meth:`to_natural` to move between coordinates.
    """

    objective: Objective
    complements: bool
    certificates: list[PropertyReport] = field(repr=False)

    @property
    def flip(self) -> list[int]:
        return [] if self.complements else [0]

    def problem(self, wage_before: float, wage_after: float, cost, x_lo=None) -> StaticProblem:
        """The wage-change problem in solver coordinates (capital negated for substitutes).

        ``x_lo`` and the cost are given in natural ``(k, l)`` coordinates.
        """
        P = StaticProblem(self.objective, cost, -float(wage_before), -float(wage_after), x_lo=x_lo)
        return flip_dimensions(P, self.flip) if self.flip else P

    def to_natural(self, x: Sequence[float]) -> Point:
        return tuple((-float(v) + 0.0) if d in self.flip else float(v) for d, v in enumerate(x))


def build_factor_demand(
    capital: Sequence[float],
    labor: Sequence[float],
    production: Callable[[float, float], float],
    rental: float,
    wages: Sequence[float],
    complements: bool | None = None,
) -> FactorDemandModel:
    """Tabulate profit and certify the matching complementarity.

    With ``complements=None`` the kind is detected: supermodular ``f`` means
    complements, otherwise ``f`` must be submodular.
    """
    lat = GridLattice([sorted(map(float, capital)), sorted(map(float, labor))])
    f = np.array([production(*lat.point(i)) for i in range(len(lat))], dtype=float)
    sup, sub = check_supermodular(f, lat), check_submodular(f, lat)
    if complements is None:
        complements = bool(sup)
        if not sup and not sub:
            raise HypothesisError("factor_demand", sub)
    _require("factor_demand", [sup if complements else sub])
    poset = ParamPoset.chain(sorted({-float(w) for w in wages}))
    obj = Objective(
        lat,
        poset,
        [[f[i] - rental * lat.point(i)[0] + nw * lat.point(i)[1] for nw in poset.elements] for i in range(len(lat))],
        name="factor_profit",
    )
    solver_obj = obj
    if not complements:
        flat, rows = lat.flipped([0])
        solver_obj = obj.reindexed(flat, rows)
    certs = _require(
        "factor_demand",
        [sup if complements else sub, check_supermodular(solver_obj, solver_obj.lattice), check_single_crossing_diff(solver_obj)],
    )
    return FactorDemandModel(obj, complements, certs)


# ------------------------------------------------------------ labor supply
@dataclass
class LaborSupplyModel:
    """Net earnings less disutility ``w x - T(w x) - kappa(x)`` under tax schedules ordered flatter-is-higher."""

    objective: Objective
    wage: float
    certificates: list[PropertyReport] = field(repr=False)

    def scenario(self, cost, before: str = "T", after: str = "T_flat", **kw) -> DynamicScenario:
        return DynamicScenario(self.objective, [], after, [], cost, theta_lo=before, **kw)

    def problem(self, cost, before: str = "T", after: str = "T_flat", **kw) -> StaticProblem:
        return StaticProblem(self.objective, cost, before, after, **kw)


def check_flatter(hours: Sequence[float], wage: float, tax, tax_flat) -> PropertyReport:
    """``tax_flat(y') - tax_flat(y) <= tax(y') - tax(y)`` for every pair of earnings ``y <= y'``."""
    ys = [wage * h for h in sorted(hours)]
    for a, y in enumerate(ys):
        for y2 in ys[a + 1:]:
            if tax_flat(y2) - tax_flat(y) > tax(y2) - tax(y):
                return _fail("flatter", {"y": y, "y_prime": y2})
    return _ok("flatter")


def check_tax_crossing(hours: Sequence[float], wage: float, schedules, disutility) -> PropertyReport:
    """Working more is preferred exactly when the extra tax is at most the extra net gain.

    Compares ``F(x') >= F(x)`` with ``T(w x') - T(w x) <= w (x' - x) - (kappa(x') - kappa(x))``
    on every pair and schedule.
    """
    hs = sorted(float(h) for h in hours)
    for name, T in schedules.items():
        F = {h: wage * h - T(wage * h) - disutility(h) for h in hs}
        for a, x in enumerate(hs):
            for x2 in hs[a + 1:]:
                lhs = F[x2] - F[x] >= 0
                rhs = T(wage * x2) - T(wage * x) <= wage * (x2 - x) - (disutility(x2) - disutility(x))
                if lhs != rhs:
                    return _fail("tax_crossing_equivalence", {"schedule": name, "x": x, "x_prime": x2})
    return _ok("tax_crossing_equivalence")


def build_labor(hours: Sequence[float], wage: float, tax, tax_flat, disutility) -> LaborSupplyModel:
    """``tax``, ``tax_flat`` map earnings to tax and ``disutility`` maps hours to cost; each a callable or a table."""
    if wage <= 0:
        raise ConfigError("wage must be positive")
    T = _table_or_call(tax, "tax")
    Tf = _table_or_call(tax_flat, "tax_flat")
    kappa = _table_or_call(disutility, "disutility")
    lat = GridLattice([sorted(map(float, hours))])
    poset = ParamPoset.chain(["T", "T_flat"])
    sched = {"T": T, "T_flat": Tf}
    obj = Objective.from_function(lat, poset, lambda x, s: wage * x[0] - sched[s](wage * x[0]) - kappa(x[0]), name="labor")
    certs = _require(
        "labor",
        [check_flatter(hours, wage, T, Tf), check_tax_crossing(hours, wage, sched, kappa), check_single_crossing_diff(obj)],
    )
    return LaborSupplyModel(obj, float(wage), certs)


# -------------------------------------------------------------- investment
@dataclass
class InvestmentModel:
    """Profit ``p f(k, eta) - r k`` with parameters ``(p, eta, -r)`` in the product order."""

    objective: Objective
    certificates: list[PropertyReport] = field(repr=False)

    @staticmethod
    def theta(p: float, eta: float, r: float) -> tuple[float, float, float]:
        return (float(p), float(eta), -float(r))

    def problem(self, before, after, cost, **kw) -> StaticProblem:
        """``before``, ``after`` are ``(p, eta, r)`` triples."""
        return StaticProblem(self.objective, cost, self.theta(*before), self.theta(*after), **kw)

    def scenario(self, before, after, cost, **kw) -> DynamicScenario:
        return DynamicScenario(self.objective, [], self.theta(*after), [], cost, theta_lo=self.theta(*before), **kw)


def build_investment(
    capital: Sequence[float],
    production: Callable[[float, float], float],
    params: Sequence[Sequence[float]],
) -> InvestmentModel:
    """``params`` lists the ``(p, eta, r)`` triples of interest; ``f`` needs increasing differences in ``(k, eta)``."""
    lat = GridLattice([sorted(map(float, capital))])
    thetas = sorted({InvestmentModel.theta(*t) for t in params})
    etas = sorted({t[1] for t in thetas})
    f = Objective.from_function(lat, ParamPoset.chain(etas), lambda x, e: production(x[0], e), name="production")
    poset = ParamPoset.product(thetas)
    obj = Objective.from_function(lat, poset, lambda x, th: th[0] * production(x[0], th[1]) + th[2] * x[0], name="investment")
    certs = _require("investment", [check_increasing_diff(f), check_single_crossing_diff(obj)])
    return InvestmentModel(obj, certs)


# -------------------------------------------------------- wishful thinking
# expected utility is linear in the CDF, so the belief axes are modular up to rounding
ROUNDING = 1e-12


def _cdf_key(g: Sequence[float]) -> tuple[float, ...]:
    return tuple(float(v) for v in g)


def close_beliefs(beliefs: Sequence[Sequence[float]]) -> list[tuple[float, ...]]:
    """Add pointwise maxima and minima of CDFs until the set is closed."""
    out = {_cdf_key(g) for g in beliefs}
    while True:
        extra = set()
        items = sorted(out)
        for a, g in enumerate(items):
            for h in items[a + 1:]:
                for op in (max, min):
                    m = tuple(op(x, y) for x, y in zip(g, h))
                    if m not in out:
                        extra.add(m)
        if not extra:
            return sorted(out)
        out |= extra


def _validate_cdf(g: Sequence[float]) -> None:
    if abs(g[-1] - 1.0) > 0 or any(b < a for a, b in zip(g, g[1:])) or g[0] < 0:
        raise ConfigError(f"{list(g)} is not a CDF ending at 1")


@dataclass
class WishfulModel:
    """Two-period saving with a chosen belief about second-period income.

    Beliefs are CDFs on the income support; a belief is represented on the
    lattice by the negated CDF values at every support point but the last,
    so higher means more optimistic.
    """

    wealth: float
    rate: float
    consumption: tuple[float, ...]
    incomes: tuple[float, ...]
    beliefs: list[tuple[float, ...]]
    reference: tuple[float, ...]
    u1: Callable[[float], float] = field(repr=False)
    u2: Callable[[float], float] = field(repr=False)
    cost: CostFunction = field(repr=False)
    belief_lattice: GridLattice = field(repr=False)
    joint_lattice: GridLattice = field(repr=False)
    utility: np.ndarray = field(repr=False)
    certificates: list[PropertyReport] = field(repr=False)

    def coords(self, g: Sequence[float]) -> Point:
        return tuple(-float(v) + 0.0 for v in g[:-1])

    def cdf(self, z: Sequence[float]) -> tuple[float, ...]:
        return tuple(-float(v) + 0.0 for v in z) + (1.0,)

    def joint_id(self, c: float, g: Sequence[float]) -> int:
        return self.joint_lattice.id_of((float(c), *self.coords(g)))

    def value(self, c: float, g: Sequence[float]) -> float:
        """``u1(c) + E_g u2((1 + r)(w - c) + y)``."""
        masses = [g[0]] + [b - a for a, b in zip(g, g[1:])]
        saving = (1 + self.rate) * (self.wealth - c)
        return self.u1(c) + sum(m * self.u2(saving + y) for m, y in zip(masses, self.incomes))


def _u2_concave(model_u2, wealth, rate, consumption, incomes) -> PropertyReport:
    vals = sorted({(1 + rate) * (wealth - c) + y for c in consumption for y in incomes})
    slopes = [(model_u2(b) - model_u2(a)) / (b - a) for a, b in zip(vals, vals[1:])]
    for k in range(1, len(slopes)):
        if slopes[k] > slopes[k - 1] + 1e-12 * max(1.0, abs(slopes[k - 1])):
            return _fail("second_period_utility_concave", {"v": vals[k]})
    return _ok("second_period_utility_concave")


def build_wishful(
    wealth: float,
    rate: float,
    consumption: Sequence[float],
    incomes: Sequence[float],
    beliefs: Sequence[Sequence[float]],
    reference: Sequence[float],
    kl_scale: float = 1.0,
    cost: CostFunction | None = None,
    u1: Callable[[float], float] = math.log1p,
    u2: Callable[[float], float] = math.log1p,
) -> WishfulModel:
    """Close the belief set, tabulate ``U(c, G)`` and certify its complementarity.

    The default belief cost is ``kl_scale`` times the KL divergence from
    ``reference``; pass ``cost`` (a function of belief-coordinate differences)
    to override it.
    """
    incomes = tuple(sorted(map(float, incomes)))
    cons = tuple(sorted(map(float, consumption)))
    if cons[0] < 0 or cons[-1] > wealth:
        raise ConfigError("consumption grid must lie in [0, wealth]")
    ref = _cdf_key(reference)
    all_beliefs = [ref, *map(_cdf_key, beliefs)]
    for g in all_beliefs:
        if len(g) != len(incomes):
            raise ConfigError(f"belief {list(g)} needs {len(incomes)} entries")
        _validate_cdf(g)
    closed = close_beliefs(all_beliefs)
    pts = [tuple(-v + 0.0 for v in g[:-1]) for g in closed]
    axes = [sorted({p[d] for p in pts}) for d in range(len(incomes) - 1)]
    blat = GridLattice(axes, members=pts)
    joint = GridLattice([list(cons), *axes], members=[(c, *p) for c in cons for p in pts])
    if cost is None:
        cost = cost_families.kl_divergence(ref[:-1], kl_scale)
    model = WishfulModel(
        float(wealth), float(rate), cons, incomes, closed, ref, u1, u2, cost, blat, joint, np.empty(0), []
    )
    U = np.array([model.value(x[0], model.cdf(x[1:])) for x in map(joint.point, range(len(joint)))])
    model.utility = U
    model.certificates = _require(
        "wishful",
        [_u2_concave(u2, wealth, rate, cons, incomes), check_supermodular(U, joint, tol=ROUNDING * max(1.0, float(np.abs(U).max())))],
    )
    return model


def wishful_check(M: WishfulModel, verify: bool = True) -> TheoremReport:
    """Realist, wishful thinker and optimist: ``c0 <= c_hat <= c_bar`` and ``G0 <= G_hat <= G_bar`` in dominance order.

    The belief is chosen to maximize ``max_c U(c, G) - C(G - G0)``; the
    wishful consumption is ``c_bar ^ (c0 v c')`` for the first ``c'``
    maximizing ``U(., G_hat)``. Everything is re-checked against a full
    enumeration of the ``(c, G)`` lattice.
    """
    blat, joint = M.belief_lattice, M.joint_lattice
    nb = len(blat)
    U = M.utility
    cons = M.consumption
    # rows of U indexed by (consumption index, belief id) via the joint lattice
    table = np.empty((len(cons), nb))
    for i in range(len(joint)):
        x = joint.point(i)
        table[cons.index(x[0]), blat.id_of(x[1:])] = U[i]
    best_c = table.max(axis=0)
    poset = ParamPoset.chain([0])
    F = Objective(blat, poset, best_c[:, None], name="belief_value")
    z0 = blat.id_of(M.coords(M.reference))
    below = [i for i in range(nb) if blat.le(i, z0)]
    hyps = gate("wishful", [*M.certificates, check_cost_minimally_monotone(M.cost, blat)], verify)
    P = StaticProblem(F, M.cost, 0, 0, x_lo=blat.point(z0), initial_ids=below)
    report = theorem1_star_check(P, verify)
    g_hat = blat.id_of(report.points["x_hat"])
    g_bar = blat.join_all(range(nb))

    def first_best(b):
        col = table[:, b]
        return int(np.flatnonzero(col == col.max())[0])

    def last_best(b):
        col = table[:, b]
        return int(np.flatnonzero(col == col.max())[-1])

    c0 = first_best(z0)
    c_bar = last_best(g_bar)
    c_hat = min(c_bar, max(c0, first_best(g_hat)))
    hat_optimal = table[c_hat, g_hat] == table[:, g_hat].max()
    # joint enumeration of U - C over every (c, G)
    G = P.payoff()
    joint_vals = table + np.where(np.isfinite(G), G - best_c, -np.inf)[None, :]
    joint_best = joint_vals.max()
    jointly_optimal = bool(joint_vals[c_hat, g_hat] >= joint_best)
    chain_c = cons[c0] <= cons[c_hat] <= cons[c_bar]
    chain_g = blat.le(z0, g_hat) and blat.le(g_hat, g_bar)
    holds = bool(report.holds and hat_optimal and jointly_optimal and chain_c and chain_g)
    witness = None
    if not holds:
        witness = {
            "belief_choice_holds": report.holds,
            "consumption_optimal": bool(hat_optimal),
            "jointly_optimal": jointly_optimal,
            "consumption_ordered": chain_c,
            "beliefs_ordered": chain_g,
        }
    return conclude(
        TheoremReport(
            "wishful",
            holds,
            [*hyps, *report.hypotheses],
            witness,
            points={
                "c0": cons[c0],
                "c_hat": cons[c_hat],
                "c_bar": cons[c_bar],
                "G0": M.cdf(blat.point(z0)),
                "G_hat": M.cdf(blat.point(g_hat)),
                "G_bar": M.cdf(blat.point(g_bar)),
            },
            details={"beliefs": [list(g) for g in M.beliefs], "joint_value": float(joint_best)},
        )
    )


def kl_footnote() -> dict:
    """The three-outcome beliefs on which KL cost is not monotone but is minimally monotone."""
    g0, g, h = (1 / 3, 2 / 3, 1.0), (0.25, 0.25, 1.0), (0.125, 0.25, 1.0)
    pts = [tuple(-v + 0.0 for v in b[:-1]) for b in (g0, g, h)]
    lat = GridLattice([sorted({p[0] for p in pts}), sorted({p[1] for p in pts})], members=pts)
    cost = cost_families.kl_divergence(g0[:-1])
    eps = [tuple(a - b for a, b in zip(p, pts[0])) for p in pts]
    return {
        "value": cost(eps[1]) - cost(eps[2]),
        "monotone": check_cost_monotone(cost, lat),
        "minimally_monotone": check_cost_minimally_monotone(cost, lat),
    }


# ------------------------------------------------------------------ demos
def demo_pricing(c_before: float = 1.0, c_after: float = 1.5, adjust: float = 0.05, delta: float = 0.9) -> dict:
    """Marginal cost rises; quadratic price-adjustment cost; the price path climbs to the new optimum."""
    prices = [1.5 + 0.25 * k for k in range(7)]
    M = build_pricing(prices, [c_before, c_after], [1.0], demand="exponential")
    S = M.scenario((c_before, 1.0), (c_after, 1.0), cost_families.uniform(cost_families.s_quadratic(adjust), 1), delta=delta)
    rep = theorem4_check(S)
    path = solve_dynamic(S)
    seq = [S.x0, *path.ids]
    lat = S.lattice
    xb = lat.id_of(rep.points["x_bar"])
    rising = all(lat.le(a, b) for a, b in zip(seq, seq[1:])) and all(lat.le(i, xb) for i in seq)
    return {
        "model": "pricing",
        "holds": bool(rep.holds and rising),
        "x_lo": lat.point(S.x0)[0],
        "x_bar": lat.point(xb)[0],
        "prices": [p[0] for p in path.points()],
        "report": rep.to_dict(),
    }


def demo_factor_demand(wage_before: float = 2.0, wage_after: float = 1.0, adjust: float = 0.25) -> dict:
    """Substitute inputs; a wage drop lowers capital and raises labor in the short and long run."""
    grid = [0.5 * k for k in range(9)]
    f = lambda k, l: 4 * k - 0.5 * k * k + 4 * l - 0.5 * l * l - 0.5 * k * l  # noqa: E731, E741
    M = build_factor_demand(grid, grid, f, 1.0, [wage_before, wage_after])
    cost = cost_families.uniform(cost_families.s_quadratic(adjust), 2)
    P = M.problem(wage_before, wage_after, cost)
    res = theorem2_check(P)
    lo, hat, bar = (M.to_natural(x) for x in (res.x_lo, res.x_hat, res.x_bar))
    short = hat[0] <= lo[0] and hat[1] >= lo[1]
    long = bar[0] <= lo[0] and bar[1] >= lo[1]
    return {
        "model": "factor_demand",
        "holds": bool(res.report.holds and short and long),
        "complements": M.complements,
        "x_lo": lo,
        "x_hat": hat,
        "x_bar": bar,
        "report": res.report.to_dict(),
    }


def demo_investment(size: float = 1.0, adjust: float = 0.25) -> dict:
    """Lumpy investment: the one-shot upward response holds but the short/long-run bound is not available."""
    capital = [0.5 * k for k in range(9)]
    M = build_investment(capital, lambda k, eta: eta * math.sqrt(k), [(1, 2, 1), (1, 3, 1)])
    cost = cost_families.uniform(cost_families.s_lumpy(adjust, size), 1)
    P = M.problem((1, 2, 1), (1, 3, 1), cost)
    rep1 = theorem1_check(P)
    try:
        theorem2_check(P)
        rejected, witness = False, None
    except HypothesisError as exc:
        rejected, witness = True, exc.report
    inside = None
    if witness is not None and witness.witness:
        toward = witness.witness.get("eps_toward_zero")
        if toward is not None:
            inside = 0 < abs(float(toward[0])) < size
    return {
        "model": "investment",
        "holds": bool(rep1.holds and rejected and inside),
        "theorem1": rep1.to_dict(),
        "theorem2_rejected": rejected,
        "rejection": None if witness is None else witness.to_dict(),
        "witness_inside_minimum_size": inside,
    }


WISHFUL_DEMO = dict(
    wealth=3.0,
    rate=0.0,
    consumption=[0.1875 * k for k in range(17)],
    incomes=[0.0, 1.0, 2.0],
    beliefs=[(0.25, 0.75, 1.0), (0.5, 0.5, 1.0)],
    reference=(0.5, 0.75, 1.0),
)


def demo_wishful(kl_scale: float = 0.2) -> dict:
    """Three income outcomes, four beliefs: the wishful thinker consumes between realist and optimist."""
    M = build_wishful(**WISHFUL_DEMO, kl_scale=kl_scale)
    rep = wishful_check(M)
    return {"model": "wishful", "holds": rep.holds, "report": rep.to_dict()}


def demo_labor(adjust: float = 0.5) -> dict:
    """A flatter tax schedule raises hours along the whole adjustment path."""
    hours = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]
    tax = lambda y: 0.25 * y * y  # noqa: E731
    tax_flat = lambda y: 0.125 * y * y  # noqa: E731
    M = build_labor(hours, 2.0, tax, tax_flat, lambda h: 0.5 * h * h)
    S = M.scenario(cost_families.uniform(cost_families.s_quadratic(adjust), 1))
    rep = theorem4_check(S)
    return {"model": "labor", "holds": rep.holds, "report": rep.to_dict()}


DEMOS: dict[str, Callable[..., dict]] = {
    "pricing": demo_pricing,
    "factor-demand": demo_factor_demand,
    "investment": demo_investment,
    "wishful": demo_wishful,
    "labor": demo_labor,
}

__all__ = [
    "DEMANDS",
    "DEMOS",
    "FactorDemandModel",
    "InvestmentModel",
    "LaborSupplyModel",
    "PricingModel",
    "WishfulModel",
    "build_factor_demand",
    "build_investment",
    "build_labor",
    "build_pricing",
    "build_wishful",
    "check_flatter",
    "check_tax_crossing",
    "close_beliefs",
    "flip_dimensions",
    "kl_footnote",
    "wishful_check",
]
