"""Random dynamic instances and an exhaustive path oracle that never touches the solver."""

import itertools
import math

import numpy as np

from mcsadj import costs as cf
from mcsadj.dynamic_solver import DynamicScenario
from mcsadj.lattice import GridLattice, ParamPoset
from mcsadj.objective import Objective

INF = math.inf

SHAPES = [[6], [5], [4], [3], [2, 3], [3, 2], [2, 2]]


def _table_cost(rng, lat):
    """An arbitrary cost on the difference set: dyadic values, some infinite, zero at zero."""
    vals = {}
    for row in lat.diffs:
        e = tuple(float(v) for v in row)
        vals[e] = 0.0 if not any(e) else (INF if rng.random() < 0.2 else float(rng.integers(0, 9)) / 4)
    return cf.CostFunction(lambda e: vals[tuple(float(v) for v in e)])


def _menu(rng, lat):
    n = lat.n
    pick = int(rng.integers(0, 5))
    if pick == 0:
        return cf.uniform(cf.s_quadratic(float(rng.integers(1, 5)) / 4), n)
    if pick == 1:
        return cf.uniform(cf.s_fixed(float(rng.integers(1, 9)) / 4), n)
    if pick == 2:
        return cf.uniform(cf.s_lumpy(0.25, 2.0), n)
    if pick == 3:
        return cf.uniform(cf.s_zero(), n)
    return _table_cost(rng, lat)


def random_finite(rng, K):
    """``(scenario, raw)``: a K-period problem on at most six members with time-varying parameters and costs."""
    shape = SHAPES[int(rng.integers(0, len(SHAPES)))]
    lat = GridLattice([list(range(k)) for k in shape])
    F = rng.integers(-16, 17, size=(len(lat), 3)).astype(float) / 4
    obj = Objective(lat, ParamPoset.chain([0, 1, 2]), F)
    thetas = [int(t) for t in rng.integers(0, 3, size=K)]
    costs = [_menu(rng, lat) for _ in range(K)]
    delta = float(rng.choice([0.5, 0.75, 0.9]))
    x0 = lat.point(int(rng.integers(0, len(lat))))
    S = DynamicScenario(obj, thetas, thetas[-1], costs, costs[-1], delta=delta, x0=x0, finite_horizon=K)
    raw = {"points": lat.points(), "F": F, "thetas": thetas, "costs": costs, "delta": delta, "x0": x0}
    return S, raw


def enumerate_paths(raw):
    """Best value over every sequence of points, valued from the last period backward."""
    pts, F, thetas, costs, d = raw["points"], raw["F"], raw["thetas"], raw["costs"], raw["delta"]
    K = len(thetas)
    best = -INF
    for seq in itertools.product(range(len(pts)), repeat=K):
        h = 0.0
        for t in range(K - 1, -1, -1):
            prev = raw["x0"] if t == 0 else pts[seq[t - 1]]
            x = pts[seq[t]]
            c = costs[t](tuple(float(a) - float(b) for a, b in zip(x, prev)))
            h = (float(F[seq[t], thetas[t]]) - c) + d * h
        best = max(best, h)
    return best


def random_stationary(rng):
    """An infinite-horizon problem with constant parameter and cost."""
    shape = [[4, 4], [3, 3, 2], [6], [5, 3]][int(rng.integers(0, 4))]
    lat = GridLattice([list(range(k)) for k in shape])
    F = rng.integers(-16, 17, size=(len(lat), 2)).astype(float) / 4
    obj = Objective(lat, ParamPoset.chain([0, 1]), F)
    cost = _menu(rng, lat)
    delta = float(rng.choice([0.5, 0.9, 0.95]))
    return DynamicScenario(obj, [], 1, [], cost, delta=delta, x0=lat.point(int(rng.integers(0, len(lat)))))


def stationary_path_value(S, seq):
    """Value of ``seq`` held at its last entry forever, from the objective and cost directly."""
    pts = S.lattice.points()
    F = S.objective.values
    cost, d, th = S.cost_tail, S.delta, S.theta_tail
    last = seq[-1]
    h = (float(F[last, th]) - cost(tuple(0.0 for _ in pts[0]))) / (1 - d)
    for t in range(len(seq) - 1, -1, -1):
        prev = pts[S.x0] if t == 0 else pts[seq[t - 1]]
        h = (float(F[seq[t], th]) - cost(tuple(float(a) - float(b) for a, b in zip(pts[seq[t]], prev)))) + d * h
    return h


def best_held_path(S, length, monotone=False):
    lat = S.lattice
    best = -INF
    for seq in itertools.product(range(len(lat)), repeat=length):
        if monotone and any(not lat.le(a, b) for a, b in zip((S.x0,) + seq, seq)):
            continue
        best = max(best, stationary_path_value(S, seq))
    return best


def rng_for(seed, i):
    return np.random.default_rng(np.random.SeedSequence([seed, i]))
