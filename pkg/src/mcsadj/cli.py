"""Command-line front end.

Every subcommand prints one JSON document on stdout. ``--out DIR`` (default:
``$MCSADJ_OUT`` when set) also writes CSV files with fixed headers:

* ``properties.csv``: ``target,property,holds``, one row per check.
* ``maximizers.csv``: ``id,x1..xn,payoff``, one row per maximizer.
* ``path.csv``: ``t,x1..xn,payoff,cost``, one row per period.
* ``sequence.csv``: ``t,x1..xn``, one row per period of a short-lived sequence.
* ``horizons.csv``: ``t,long_x1..long_xn,short_x1..short_xn``, one row per period.
* ``suite.csv``: ``index,seed,profile,outcome``, one row per failed instance.

Exit status: 0 verdict holds, 1 input error, 2 hypothesis rejected,
3 verdict violated.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path
from typing import Sequence

from . import config, harness, models
from .dynamic_solver import bellman_residual, solve_dynamic, theorem3_check, theorem4_check
from .errors import ConfigError, EngineError, HypothesisError, InfeasibleError, LatticeError
from .lechatelier import prop3_forall_check, theorem2_check
from .myopic import MODES, equilibrium_sequence, theorem5_check, theorem6_check
from .properties import (
    check_cost_convex_separable,
    check_cost_minimally_monotone,
    check_cost_monotone,
    check_cost_separable,
    check_cost_strictly_minimally_monotone,
    check_cost_strictly_monotone,
    check_increasing_diff,
    check_quasi_supermodular,
    check_single_crossing_diff,
    check_supermodular,
)
from .static_solver import prop1_forall_check, theorem1_check, theorem1_star_check
from .stochastic import UTILITIES, CostLottery, utility_from_spec

OK, INPUT, REJECTED, VIOLATED = 0, 1, 2, 3
OUT_ENV = "MCSADJ_OUT"


class InputError(Exception):
    pass


def _emit(doc) -> None:
    sys.stdout.write(config.dumps(doc))


def _csv(out: Path | None, name: str, header: list[str], rows: list[list]) -> None:
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    with open(out / name, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(config.encode(r))


def _xheader(n: int) -> list[str]:
    return [f"x{d + 1}" for d in range(n)]


def _with_risk(cost, risk: str | None):
    if risk is None:
        return cost
    u = utility_from_spec(risk, "--risk")
    if isinstance(cost, CostLottery):
        return CostLottery(cost.states, u)
    return CostLottery([(1.0, cost)], u)


def _scenario(args) -> config.Scenario:
    sc = config.build(args.config)
    if getattr(args, "risk", None) and sc.objective is not None:
        risky = _with_risk(sc.cost, args.risk)
        sc.cost = risky
        if sc.static is not None:
            P = sc.static
            sc.static = type(P)(P.objective, risky, P.theta_lo, P.theta_hi, x_lo=P.lattice.point(P.x_lo), initial_ids=P.initial_ids, choice_ids=P.choice_ids)
        if sc.dynamic is not None:
            S = sc.dynamic
            sc.dynamic = S.with_(cost_tail=_with_risk(S.cost_tail, args.risk), costs=[_with_risk(c, args.risk) for c in S.costs])
    return sc


def _static(sc: config.Scenario):
    if sc.static is None:
        raise InputError("this config has no static problem (add a 'static' block)")
    return sc.static


def _dynamic(sc: config.Scenario):
    if sc.dynamic is None:
        raise InputError("this config has no dynamic scenario (add a 'dynamic' block)")
    return sc.dynamic


def _verdict(report_dict: dict, holds: bool) -> int:
    _emit(report_dict)
    return OK if holds else VIOLATED


# ------------------------------------------------------------ subcommands
def cmd_check_properties(args) -> int:
    sc = _scenario(args)
    rows = []
    if sc.model is not None and isinstance(sc.model, models.WishfulModel):
        M = sc.model
        objective_reports = list(M.certificates)
        lat, cost = M.belief_lattice, M.cost
    else:
        F = sc.objective
        lat = F.lattice
        objective_reports = [
            check_quasi_supermodular(F, lat),
            check_supermodular(F, lat),
            check_single_crossing_diff(F),
            check_single_crossing_diff(F, strict=True),
            check_increasing_diff(F),
        ]
        cost = sc.cost
    states = [c for p, c in cost.states if p > 0] if isinstance(cost, CostLottery) else [cost]
    cost_reports = []
    for k, c in enumerate(states):
        for check in (
            check_cost_monotone,
            check_cost_strictly_monotone,
            check_cost_minimally_monotone,
            check_cost_strictly_minimally_monotone,
            check_cost_separable,
            check_cost_convex_separable,
        ):
            r = check(c, lat).to_dict()
            if len(states) > 1:
                r["state"] = k
            cost_reports.append(r)
    for r in objective_reports:
        d = r.to_dict() if hasattr(r, "to_dict") else r
        rows.append(["objective", d["name"], d["holds"]])
    for d in cost_reports:
        rows.append(["cost" if "state" not in d else f"cost[{d['state']}]", d["name"], d["holds"]])
    _csv(args.out, "properties.csv", ["target", "property", "holds"], rows)
    _emit(
        {
            "lattice_size": len(lat),
            "dimensions": lat.n,
            "objective": [r.to_dict() if hasattr(r, "to_dict") else r for r in objective_reports],
            "cost": cost_reports,
        }
    )
    return OK


STATIC_CHECKS = {
    "thm1": lambda P, v: theorem1_check(P, v),
    "thm1star": lambda P, v: theorem1_star_check(P, v),
    "prop1a": lambda P, v: prop1_forall_check(P, "a", v),
    "prop1b": lambda P, v: prop1_forall_check(P, "b", v),
}


def _maximizer_rows(P, best) -> list[list]:
    G = P.payoff()
    return [[i, *P.lattice.point(i), float(G[i])] for i in best.ids]


def cmd_solve_static(args) -> int:
    sc = _scenario(args)
    if isinstance(sc.model, models.WishfulModel):
        rep = models.wishful_check(sc.model, verify=not args.unsafe)
        return _verdict(rep.to_dict(), rep.holds)
    P = _static(sc)
    best = P.solve()
    rep = STATIC_CHECKS[args.theorem](P, not args.unsafe)
    _csv(args.out, "maximizers.csv", ["id", *_xheader(P.lattice.n), "payoff"], _maximizer_rows(P, best))
    return _verdict({"x_lo": P.lattice.point(P.x_lo), "argmax": best.points(), "report": rep.to_dict()}, rep.holds)


def cmd_lechatelier(args) -> int:
    sc = _scenario(args)
    P = _static(sc)
    x_bar = tuple(args.x_bar) if args.x_bar else None
    if args.all_x_bar:
        rep = prop3_forall_check(P, x_bar, verify=not args.unsafe)
        return _verdict(rep.to_dict(), rep.holds)
    res = theorem2_check(P, x_bar, verify=not args.unsafe)
    best = P.solve()
    _csv(args.out, "maximizers.csv", ["id", *_xheader(P.lattice.n), "payoff"], _maximizer_rows(P, best))
    doc = res.to_dict()
    doc["argmax"] = best.points()
    return _verdict(doc, res.report.holds)


def _path_rows(path) -> list[list]:
    return [[r["t"], *r["x"], r["payoff"], r["cost"]] for r in path.rows()]


def cmd_solve_dynamic(args) -> int:
    sc = _scenario(args)
    S = _dynamic(sc)
    if args.horizon is not None:
        S = S.with_(horizon=args.horizon)
    path = solve_dynamic(S)
    check = theorem4_check if args.theorem == "thm4" else theorem3_check
    rep = check(S, verify=not args.unsafe)
    _csv(args.out, "path.csv", ["t", *_xheader(S.lattice.n), "payoff", "cost"], _path_rows(path))
    doc = {"path": path.to_dict(), "report": rep.to_dict()}
    if S.finite_horizon is None:
        doc["bellman_residual"] = bellman_residual(S)
    return _verdict(doc, rep.holds)


def _sequence_rows(seq, n: int) -> list[list]:
    return [[t, *seq.lattice.point(i)] for t, i in enumerate(seq.padded(n), start=1)]


def cmd_solve_myopic(args) -> int:
    sc = _scenario(args)
    S = _dynamic(sc)
    seq = equilibrium_sequence(S, args.mode)
    rep = theorem5_check(S, args.mode, verify=not args.unsafe)
    _csv(args.out, "sequence.csv", ["t", *_xheader(S.lattice.n)], _sequence_rows(seq, S.horizon))
    return _verdict({"sequence": seq.to_dict(), "report": rep.to_dict()}, rep.holds)


def cmd_compare_horizons(args) -> int:
    sc = _scenario(args)
    S = _dynamic(sc)
    path = solve_dynamic(S)
    seq = equilibrium_sequence(S, "monotone")
    rep = theorem6_check(S, verify=not args.unsafe)
    n = max(S.horizon, len(path.ids), len(seq.ids))
    rows = []
    long_ids, short_ids = path.padded(n), seq.padded(n)
    for t in range(1, n + 1):
        rows.append([t, *S.lattice.point(long_ids[t - 1]), *S.lattice.point(short_ids[t - 1])])
    hdr = ["t", *(f"long_{h}" for h in _xheader(S.lattice.n)), *(f"short_{h}" for h in _xheader(S.lattice.n))]
    _csv(args.out, "horizons.csv", hdr, rows)
    return _verdict({"long_lived": path.to_dict(), "short_lived": seq.to_dict(), "report": rep.to_dict()}, rep.holds)


def cmd_verify(args) -> int:
    if args.theorem == "fixtures":
        results = [harness.run_fixture(f.name) for f in harness.fixtures()]
        return _verdict({"fixtures": results}, all(r["ok"] for r in results))
    if args.theorem not in harness.SUITES:
        raise InputError(f"unknown theorem {args.theorem!r}; choose from {', '.join(harness.THEOREM_IDS)} or 'fixtures'")
    rep = harness.run_suite(args.theorem, args.count, args.seed, variant=args.variant, jobs=args.jobs)
    if args.out is not None:
        _csv(args.out, "suite.csv", ["index", "seed", "profile", "outcome"], [[f["index"], f["seed"], f["profile"], f["outcome"]] for f in rep["failures"]])
    return _verdict(rep, rep["ok"])


def cmd_demo(args) -> int:
    doc = models.DEMOS[args.model]()
    return _verdict(doc, bool(doc.get("holds", True)))


# ------------------------------------------------------------------ parser
def _common(p: argparse.ArgumentParser, risk: bool = True) -> None:
    p.add_argument("config", help="scenario JSON file")
    p.add_argument("--unsafe", action="store_true", help="skip the hypothesis gate and report the verdict anyway")
    if risk:
        p.add_argument("--risk", choices=sorted(UTILITIES), help="evaluate the cost as a lottery under this utility family")


def _out(p: argparse.ArgumentParser) -> None:
    env = os.environ.get(OUT_ENV)
    p.add_argument("--out", type=Path, default=Path(env) if env else None, help=f"directory for CSV output (default: ${OUT_ENV})")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mcsadj", description="Monotone comparative statics under adjustment costs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-properties", help="objective and cost property table")
    _common(p)
    _out(p)
    p.set_defaults(fn=cmd_check_properties)

    p = sub.add_parser("solve-static", help="maximize F(x, theta_hi) - C(x - x_lo) and check the upward-response result")
    _common(p)
    _out(p)
    p.add_argument("--theorem", choices=sorted(STATIC_CHECKS), default="thm1")
    p.set_defaults(fn=cmd_solve_static)

    p = sub.add_parser("lechatelier", help="short-run versus long-run response")
    _common(p)
    _out(p)
    p.add_argument("--x-bar", type=float, nargs="+", help="long-run point to compare against")
    p.add_argument("--all-x-bar", action="store_true", help="check every valid long-run point (strictly monotone costs)")
    p.set_defaults(fn=cmd_lechatelier)

    p = sub.add_parser("solve-dynamic", help="long-lived agent's optimal path")
    _common(p)
    _out(p)
    p.add_argument("--theorem", choices=["thm3", "thm4"], default="thm3", help="sandwich path or monotone path check")
    p.add_argument("--horizon", type=int, help="periods to report")
    p.set_defaults(fn=cmd_solve_dynamic)

    p = sub.add_parser("solve-myopic", help="short-lived agents' equilibrium sequence")
    _common(p)
    _out(p)
    p.add_argument("--mode", choices=list(MODES), default="caged")
    p.set_defaults(fn=cmd_solve_myopic)

    p = sub.add_parser("compare-horizons", help="long-lived path against the short-lived sequence")
    _common(p)
    _out(p)
    p.set_defaults(fn=cmd_compare_horizons)

    p = sub.add_parser("verify", help="run a generated theorem suite, or 'fixtures'")
    p.add_argument("theorem", help=f"one of {', '.join(harness.THEOREM_IDS)}, fixtures")
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--variant", choices=sorted({v for _, v in harness.VARIANTS}), help="weakened hypotheses, run without the gate")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    _out(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("demo", help="run a built-in application")
    p.add_argument("model", choices=sorted(models.DEMOS))
    p.set_defaults(fn=cmd_demo)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except HypothesisError as exc:
        _emit({"error": "hypothesis", "theorem": exc.theorem, "failed": exc.report.to_dict()})
        print(f"hypothesis rejected: {exc}", file=sys.stderr)
        return REJECTED
    except EngineError as exc:
        _emit({"error": "violation", "detail": str(exc)})
        print(f"violation: {exc}", file=sys.stderr)
        return VIOLATED
    except ConfigError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return INPUT
    except (InputError, LatticeError, InfeasibleError, OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return INPUT


if __name__ == "__main__":
    sys.exit(main())
