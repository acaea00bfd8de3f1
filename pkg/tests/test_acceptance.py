"""Acceptance criteria, one test and one summary line each.

Run ``pytest tests/test_acceptance.py -v`` and read the "acceptance criteria"
section at the end of the output.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from mcsadj import properties as pr
from mcsadj.dynamic_solver import bellman_residual, optimal_value
from mcsadj.harness import SUITES, run_fixture, run_suite, suite_json
from mcsadj.lattice import GridLattice
from mcsadj.models import DEMOS
from oracles import enumerate_paths, random_finite, random_stationary, rng_for

INF = math.inf


@pytest.mark.slow
def test_theorem_suites(acceptance):
    t0 = time.perf_counter()
    bad = {}
    for name in SUITES:
        rep = run_suite(name, count=500, seed=0)
        if rep["violations"] or not rep["ok"]:
            bad[name] = (rep["violations"], rep["passed"])
    took = time.perf_counter() - t0
    ok = not bad
    acceptance(
        "1 theorem-oracle suites",
        ok,
        f"{len(SUITES)} suites x 500 instances, violations/non-pass {bad or 0} in {took:.0f}s",
    )
    assert ok, bad


def test_counterexample_fixtures(acceptance):
    out = {name: run_fixture(name) for name in ("thm2_footnote", "thm1_footnote", "kl_footnote")}
    thm2 = out["thm2_footnote"]["observed"]
    kl = out["kl_footnote"]["observed"]
    ok = all(r["ok"] for r in out.values())
    ok = ok and thm2["argmax"] == [[3.0]] and thm2["x_bar"] == [2.0]
    ok = ok and abs(kl["value"] - 0.25 * math.log(2)) <= 1e-9
    acceptance(
        "2 counterexample fixtures",
        ok,
        f"argmax {thm2['argmax']} x_bar {thm2['x_bar']}; "
        f"unique choice {out['thm1_footnote']['observed']['argmax']} not above {out['thm1_footnote']['observed']['x_lo']}; "
        f"KL gap {kl['value']:.12f} (tol 1e-9), monotone {kl['monotone']}, minimal {kl['minimally_monotone']}",
    )
    assert ok, out


def test_dynamic_solver_correctness(acceptance):
    mismatches = 0
    for i in range(100):
        K = 1 + i % 6
        S, raw = random_finite(rng_for(2024, i), K)
        if optimal_value(S) != enumerate_paths(raw):
            mismatches += 1
    worst = max(bellman_residual(random_stationary(rng_for(77, i))) for i in range(100))
    ok = mismatches == 0 and worst <= 1e-9
    acceptance(
        "3 dynamic solver",
        ok,
        f"100 finite instances (|L|<=6, H<=6): {mismatches} inexact; 100 stationary: max Bellman residual {worst:.2e} (tol 1e-9)",
    )
    assert ok


def _demo_verdicts():
    pricing = DEMOS["pricing"]()
    seq = [pricing["x_lo"], *pricing["prices"]]
    rising = all(a <= b <= pricing["x_bar"] for a, b in zip(seq, seq[1:]))

    factor = DEMOS["factor-demand"]()
    (k0, l0), (k1, l1), (k2, l2) = factor["x_lo"], factor["x_hat"], factor["x_bar"]
    substitutes = not factor["complements"] and factor["holds"] and k1 <= k0 and k2 <= k0 and l1 >= l0 and l2 >= l0 and (k2 < k0 or l1 > l0)

    inv = DEMOS["investment"]()
    lumpy = inv["theorem1"]["holds"] and inv["theorem2_rejected"] and inv["witness_inside_minimum_size"]

    wish = DEMOS["wishful"]()["report"]["points"]
    chain = wish["c0"] <= wish["c_hat"] <= wish["c_bar"]
    fosd = all(a >= b >= c for a, b, c in zip(wish["G0"], wish["G_hat"], wish["G_bar"]))
    return {"pricing": rising, "factor-demand": substitutes, "investment": lumpy, "wishful": chain and fosd}


def test_application_behaviour(acceptance):
    verdicts = _demo_verdicts()
    ok = all(verdicts.values())
    acceptance("4 applications", ok, ", ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in verdicts.items()))
    assert ok, verdicts


def _random_table(rng):
    """A cost table on a random lattice: arbitrary, or built single-dipped, or a perturbation of one."""
    n = int(rng.integers(1, 4))
    axes = [sorted(set(rng.integers(-3, 4, size=int(rng.integers(1, 5))).tolist())) for _ in range(n)]
    lat = GridLattice(axes)
    kind = int(rng.integers(0, 4))
    if kind == 0:
        vals = rng.choice([0.0, 0.5, 1.0, 2.0, INF], size=len(lat.diffs))
    else:
        # per-axis scalar costs, nondecreasing away from zero on both sides
        parts = []
        for d in range(n):
            vs = sorted(set(float(v) for v in lat.diffs[:, d]))
            c = {0.0: 0.0}
            for side in (sorted(v for v in vs if v > 0), sorted((v for v in vs if v < 0), reverse=True)):
                acc = 0.0
                for v in side:
                    acc += float(rng.choice([0.0, 0.25, 1.0, INF], p=[0.3, 0.3, 0.3, 0.1]))
                    c[v] = acc
            parts.append(c)
        fixed = float(rng.choice([0.0, 0.5]))
        combine = max if kind == 2 else sum
        vals = np.array([combine(p[float(v)] for p, v in zip(parts, row)) + (fixed if row.any() else 0.0) for row in lat.diffs])
        if kind == 3:
            vals[int(rng.integers(0, len(vals)))] = float(rng.choice([0.0, 0.25, 3.0]))
    vals = np.asarray(vals, dtype=float)
    vals[lat.zero_diff] = float(rng.choice([0.0, 0.0, 0.5]))
    return lat, vals


def _implication_violations(lat, vals):
    ct = pr.CostTable(vals, lat)
    strict = bool(pr.check_cost_strictly_monotone(ct, lat))
    mono = bool(pr.check_cost_monotone(ct, lat))
    smin = bool(pr.check_cost_strictly_minimally_monotone(ct, lat))
    mini = bool(pr.check_cost_minimally_monotone(ct, lat))
    out = []
    if strict and not (mono and smin):
        out.append("strictly monotone but not monotone and strictly minimal")
    if mono and not mini:
        out.append("monotone but not minimal")
    if smin and not mini:
        out.append("strictly minimal but not minimal")
    if mono and not pr.check_lemma_c1(ct, lat):
        out.append("monotone but lemma fails")
    if pr.check_cost_convex_separable(ct, lat) and not pr.check_cost_separable(ct, lat):
        out.append("convex separable but not separable")
    if lat.n == 1:
        dipped = bool(pr.check_single_dipped_at_zero([(row[0], c) for row, c in zip(lat.diffs, vals)]))
        if dipped != mono:
            out.append("one dimension: monotone differs from single-dipped")
    return out


def test_property_implications(acceptance):
    rng = np.random.default_rng(12345)
    violations, one_dim, monotone_seen = [], 0, 0
    for i in range(1000):
        lat, vals = _random_table(rng)
        one_dim += lat.n == 1
        monotone_seen += bool(pr.check_cost_monotone(pr.CostTable(vals, lat), lat))
        violations += [(i, v) for v in _implication_violations(lat, vals)]
    ok = not violations
    acceptance(
        "5 property implications",
        ok,
        f"1000 cost tables ({one_dim} one-dimensional, {monotone_seen} monotone): {len(violations)} violations",
    )
    assert ok, violations[:5]


def test_verify_determinism(acceptance):
    runs = [["verify", "thm1", "--count", "25", "--seed", "7"], ["verify", "thm3", "--count", "10", "--seed", "1"], ["verify", "fixtures"]]
    same = []
    for argv in runs:
        outs = [subprocess.run([sys.executable, "-m", "mcsadj.cli", *argv], capture_output=True, check=False).stdout for _ in range(2)]
        same.append(outs[0] == outs[1] and len(outs[0]) > 0)
    jobs = suite_json(run_suite("thm2", count=20, seed=3, jobs=1)) == suite_json(run_suite("thm2", count=20, seed=3, jobs=2))
    ok = all(same) and jobs
    acceptance("6 determinism", ok, f"{sum(same)}/{len(runs)} repeated verify runs byte-identical; jobs=1 vs jobs=2 identical: {jobs}")
    assert ok
