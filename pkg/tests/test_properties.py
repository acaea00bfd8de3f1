import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import grids, sublattices, tables
from mcsadj import _kernels_py as pure
from mcsadj import costs as cf
from mcsadj import properties as pr
from mcsadj.lattice import GridLattice, ParamPoset
from mcsadj.models import build_pricing
from mcsadj.objective import Objective

INF = math.inf

try:
    from mcsadj import _kernels as compiled
except ImportError:
    compiled = None


# ---------------------------------------------------------------- oracles
# Written from the definitions, pair by pair, without the kernel tables.


def brute_supermodular(lat, f):
    pts = lat.points()
    val = dict(zip(pts, f))
    for x, y in itertools.product(pts, repeat=2):
        j = tuple(max(a, b) for a, b in zip(x, y))
        m = tuple(min(a, b) for a, b in zip(x, y))
        if val[j] + val[m] < val[x] + val[y]:
            return False
    return True


def brute_quasi_supermodular(lat, f):
    pts = lat.points()
    val = dict(zip(pts, f))
    for x, y in itertools.product(pts, repeat=2):
        j = tuple(max(a, b) for a, b in zip(x, y))
        m = tuple(min(a, b) for a, b in zip(x, y))
        if val[x] >= val[m] and not val[j] >= val[y]:
            return False
        if val[x] > val[m] and not val[j] > val[y]:
            return False
    return True


def _ordered_pairs(pts):
    for x, y in itertools.product(pts, repeat=2):
        if x != y and all(a <= b for a, b in zip(x, y)):
            yield x, y


def brute_scd(lat, thetas, F, strict=False):
    """``F[x][t]``; ``thetas`` is a chain, so earlier columns are lower."""
    pts = lat.points()
    for x, y in _ordered_pairs(pts):
        for lo, hi in itertools.combinations(range(len(thetas)), 2):
            d_lo = F[pts.index(y)][lo] - F[pts.index(x)][lo]
            d_hi = F[pts.index(y)][hi] - F[pts.index(x)][hi]
            if strict:
                if d_lo >= 0 and not d_hi > 0:
                    return False
            elif (d_lo >= 0 and d_hi < 0) or (d_lo > 0 and d_hi <= 0):
                return False
    return True


def brute_increasing_diff(lat, thetas, F):
    pts = lat.points()
    for x, y in _ordered_pairs(pts):
        for lo, hi in itertools.combinations(range(len(thetas)), 2):
            i, j = pts.index(x), pts.index(y)
            if F[j][hi] - F[i][hi] < F[j][lo] - F[i][lo]:
                return False
    return True


def _toward_zero_pairs(diffs):
    """``(e, e')`` where ``e'`` moves one coordinate of ``e`` toward zero, staying in the set."""
    rows = [tuple(r) for r in diffs]
    present = set(rows)
    for e in rows:
        for d, v in enumerate(e):
            for e2 in present:
                if e2 == e or any(e2[k] != e[k] for k in range(len(e)) if k != d):
                    continue
                w = e2[d]
                if (0 <= w < v) or (v < w <= 0):
                    yield e, e2


def brute_monotone(lat, C):
    c = dict(zip(map(tuple, lat.diffs), C))
    for e, e2 in _toward_zero_pairs(lat.diffs):
        if c[e2] > c[e]:
            return False
    return True


def brute_strictly_monotone(lat, C):
    # any e' strictly between 0 and e (coordinatewise), not just one axis at a time
    c = dict(zip(map(tuple, lat.diffs), C))
    for e, e2 in itertools.product(c, repeat=2):
        if e2 != e and all(min(0, a) <= b <= max(0, a) for a, b in zip(e, e2)):
            if not c[e2] < c[e]:
                return False
    return True


def brute_minimally_monotone(lat, C, strict=False):
    c = dict(zip(map(tuple, lat.diffs), C))
    for e in c:
        for e2 in (tuple(min(v, 0) for v in e), tuple(max(v, 0) for v in e)):
            assert e2 in c  # x^y - y and x v y - y are differences too
            if e2 == e:
                continue
            if c[e2] > c[e] or (strict and not c[e2] < c[e]):
                return False
    return True


# ---------------------------------------------------------------- examples


def test_product_is_supermodular(grid3):
    assert pr.check_supermodular(lambda x: x[0] * x[1], grid3)
    assert pr.check_quasi_supermodular(lambda x: x[0] * x[1], grid3)


def test_negative_product_fails_with_incomparable_witness(square):
    rep = pr.check_supermodular(lambda x: -x[0] * x[1], square)
    assert not rep.holds
    assert {tuple(rep.witness["x"]), tuple(rep.witness["y"])} == {(1, 0), (0, 1)}
    assert pr.check_submodular(lambda x: -x[0] * x[1], square)


def test_every_function_on_a_chain_is_supermodular():
    chain = GridLattice([[0, 1, 2, 5]])
    assert pr.check_supermodular([3.0, -1.0, 7.0, 0.5], chain)


def test_linear_in_theta_has_increasing_differences():
    lat = GridLattice([[0, 1, 2, 3]])
    poset = ParamPoset.chain([0.0, 0.5, 1.0])
    F = Objective.from_function(lat, poset, lambda x, t: -((x[0] - 1.5) ** 2) + t * x[0])
    assert pr.check_increasing_diff(F)
    assert pr.check_increasing_diff(F, strict=True)
    assert pr.check_single_crossing_diff(F, strict=True)


def test_constant_in_theta_is_single_crossing_but_not_strictly():
    lat = GridLattice([[0, 1, 2]])
    F = Objective.from_function(lat, ParamPoset.chain([0, 1]), lambda x, t: float(min(x[0], 1)))
    assert pr.check_single_crossing_diff(F)
    rep = pr.check_single_crossing_diff(F, strict=True)
    # the tie between 1 and 2 never turns strict
    assert not rep.holds and (rep.witness["x"], rep.witness["y"]) == ([1], [2])


def test_monopoly_profit_single_crossing_without_increasing_differences():
    model = build_pricing([1, 2, 3, 4], [0.0, 1.0], [0.5, 1.0])
    assert pr.check_single_crossing_diff(model.objective)
    assert pr.check_log_increasing_diff(model.demand)
    assert not pr.check_increasing_diff(model.objective)


def test_lumpy_cost_is_minimally_monotone_only():
    lat = GridLattice([[0, 1, 2, 3]])
    c = cf.uniform(cf.s_lumpy(1.0, 2.0), 1)
    assert pr.check_cost_minimally_monotone(c, lat)
    rep = pr.check_cost_monotone(c, lat)
    assert not rep.holds
    assert abs(rep.witness["eps_toward_zero"][0]) == 1


def test_cobb_douglas_cost_is_monotone():
    lat = GridLattice([[0, 1, 2], [0, 1, 2]])
    c = cf.cobb_douglas([1.0, 0.5])
    assert pr.check_cost_monotone(c, lat)
    assert not pr.check_cost_separable(c, lat)


def test_fixed_cost_is_monotone_not_strictly():
    lat = GridLattice([[0, 1, 2]])
    c = cf.uniform(cf.s_fixed(1.0), 1)
    assert pr.check_cost_monotone(c, lat)
    assert not pr.check_cost_strictly_monotone(c, lat)
    assert pr.check_cost_strictly_minimally_monotone(c, lat)


def test_quadratic_separable_is_convex_separable():
    lat = GridLattice([[0, 1, 2], [-1, 0, 1]])
    c = cf.uniform(cf.s_quadratic(0.5), 2)
    assert pr.check_cost_separable(c, lat)
    assert pr.check_cost_convex_separable(c, lat)
    assert pr.check_cost_strictly_monotone(c, lat)


def test_single_dipped_examples():
    assert pr.check_single_dipped_at_zero([(-1, 2), (0, 0), (1, 1), (2, 3)])
    assert not pr.check_single_dipped_at_zero([(-1, 2), (0, 0), (1, 4), (2, 3)])
    assert not pr.check_single_dipped_at_zero([(-1, -0.5), (0, 0), (1, 1)])
    with pytest.raises(ValueError):
        pr.check_single_dipped_at_zero([(1, 0)])


def test_log_increasing_needs_positive_values():
    lat = GridLattice([[0, 1]])
    F = Objective(lat, ParamPoset.chain([0, 1]), [[1.0, 0.0], [1.0, 1.0]])
    with pytest.raises(ValueError, match="positive"):
        pr.check_log_increasing_diff(F)


def test_monotone_cost_lemma():
    lat = GridLattice([[-2, -1, 0, 1, 2], [0, 1, 2]])
    rep = pr.check_lemma_c1(cf.uniform(cf.s_quadratic(1.0), 2), lat)
    assert rep.holds and "is monotone" in rep.note
    bad = pr.check_lemma_c1(cf.uniform(cf.s_lumpy(1.0, 2.0), 2), lat)
    assert not bad.holds and "not guaranteed" in bad.note


def test_report_serialises_infinities():
    lat = GridLattice([[0, 1, 2]])
    rep = pr.check_cost_monotone(cf.uniform(cf.s_lumpy(1.0, 2.0), 1), lat)
    d = rep.to_dict()
    assert d["holds"] is False and d["name"] == "monotone"


# ---------------------------------------------------------- oracle agreement


@given(sublattices(), st.data())
def test_pair_checks_match_brute_force(lat, data):
    f = data.draw(tables(lat))[:, 0]
    assert bool(pr.check_supermodular(f, lat)) == brute_supermodular(lat, f)
    assert bool(pr.check_quasi_supermodular(f, lat)) == brute_quasi_supermodular(lat, f)


@given(grids(max_dim=2, max_points=3), st.data())
def test_supermodular_functions_pass(lat, data):
    # sums of pairwise products of increasing maps are supermodular
    w = data.draw(st.lists(st.integers(0, 3), min_size=lat.n, max_size=lat.n))
    f = [sum(w[i] * x[i] * x[j] for i in range(lat.n) for j in range(i + 1, lat.n)) - sum(v * v for v in x) for x in lat.points()]
    assert pr.check_supermodular(f, lat) and pr.check_quasi_supermodular(f, lat)


@given(sublattices(max_dim=2, max_points=3), st.data())
def test_differences_checks_match_brute_force(lat, data):
    k = data.draw(st.integers(2, 3))
    vals = data.draw(tables(lat, k))
    F = Objective(lat, ParamPoset.chain(list(range(k))), vals)
    thetas = list(range(k))
    assert bool(pr.check_single_crossing_diff(F)) == brute_scd(lat, thetas, vals)
    assert bool(pr.check_single_crossing_diff(F, strict=True)) == brute_scd(lat, thetas, vals, strict=True)
    assert bool(pr.check_increasing_diff(F)) == brute_increasing_diff(lat, thetas, vals)


def random_cost_values(data, lat):
    """Mix of arbitrary tables and tables built to be single-dipped along every ray."""
    if data.draw(st.booleans()):
        vals = data.draw(st.lists(st.sampled_from([0.0, 0.5, 1.0, 2.0, INF]), min_size=len(lat.diffs), max_size=len(lat.diffs)))
    else:
        slope = data.draw(st.lists(st.sampled_from([0.0, 0.5, 1.0, INF]), min_size=lat.n, max_size=lat.n))
        fixed = data.draw(st.sampled_from([0.0, 1.0]))
        vals = [sum(s * abs(v) if v else 0.0 for s, v in zip(slope, row)) + (fixed if any(row) else 0.0) for row in lat.diffs]
    vals = list(vals)
    vals[lat.zero_diff] = data.draw(st.sampled_from([0.0, 0.5]))
    return vals


@given(sublattices(max_dim=2, max_points=4), st.data())
def test_cost_checks_match_brute_force(lat, data):
    C = random_cost_values(data, lat)
    ct = pr.CostTable(C, lat)
    assert bool(pr.check_cost_monotone(ct, lat)) == brute_monotone(lat, C)
    assert bool(pr.check_cost_strictly_monotone(ct, lat)) == brute_strictly_monotone(lat, C)
    assert bool(pr.check_cost_minimally_monotone(ct, lat)) == brute_minimally_monotone(lat, C)
    assert bool(pr.check_cost_strictly_minimally_monotone(ct, lat)) == brute_minimally_monotone(lat, C, strict=True)


@given(sublattices(max_dim=2, max_points=4), st.data())
def test_cost_implications(lat, data):
    ct = pr.CostTable(random_cost_values(data, lat), lat)
    strict = bool(pr.check_cost_strictly_monotone(ct, lat))
    mono = bool(pr.check_cost_monotone(ct, lat))
    smin = bool(pr.check_cost_strictly_minimally_monotone(ct, lat))
    mini = bool(pr.check_cost_minimally_monotone(ct, lat))
    assert not strict or (mono and smin)
    assert not mono or mini
    assert not smin or mini


@given(grids(max_dim=1, max_points=5), st.data())
def test_one_dimension_monotone_is_single_dipped(lat, data):
    C = random_cost_values(data, lat)
    ct = pr.CostTable(C, lat)
    points = [(row[0], c) for row, c in zip(lat.diffs, C)]
    assert bool(pr.check_cost_monotone(ct, lat)) == bool(pr.check_single_dipped_at_zero(points))


@given(sublattices(max_dim=2, max_points=3), st.data())
def test_objective_implications(lat, data):
    vals = data.draw(tables(lat, 3))
    F = Objective(lat, ParamPoset.chain([0, 1, 2]), vals)
    if pr.check_increasing_diff(F):
        assert pr.check_single_crossing_diff(F)
    if pr.check_single_crossing_diff(F, strict=True):
        assert pr.check_single_crossing_diff(F)
    if pr.check_supermodular(vals[:, 0], lat):
        assert pr.check_quasi_supermodular(vals[:, 0], lat)
    pos = Objective(lat, F.poset, np.exp(vals))
    if pr.check_log_increasing_diff(pos):
        assert pr.check_single_crossing_diff(pos)


@given(sublattices(max_dim=2, max_points=3), st.data())
def test_lemma_holds_for_monotone_costs(lat, data):
    ct = pr.CostTable(random_cost_values(data, lat), lat)
    if pr.check_cost_monotone(ct, lat):
        assert pr.check_lemma_c1(ct, lat)


# ---------------------------------------------------------- backend agreement


@pytest.mark.skipif(compiled is None, reason="compiled kernels not built")
@given(sublattices(), st.data())
def test_backends_agree_on_scans(lat, data):
    f = np.ascontiguousarray(data.draw(tables(lat))[:, 0])
    for mode in (pure.QUASI, pure.SUPER):
        assert pure.pair_scan(f, lat.meet_table, lat.join_table, mode, 0.0) == tuple(
            compiled.pair_scan(f, lat.meet_table, lat.join_table, mode, 0.0)
        )
    F = np.ascontiguousarray(np.exp(data.draw(tables(lat, 3))))
    leq = np.ascontiguousarray(lat.leq_matrix.astype(np.uint8))
    pairs = np.array([[0, 1], [0, 2], [1, 2]], dtype=np.int64)
    for mode in range(6):
        assert pure.scd_scan(F, leq, pairs, mode, 0.0) == tuple(compiled.scd_scan(F, leq, pairs, mode, 0.0))


@pytest.mark.skipif(compiled is None, reason="compiled kernels not built")
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_backends_agree_on_bellman(m, seed):
    rng = np.random.default_rng(seed)
    R = rng.integers(-8, 9, size=(m, m)).astype(float) / 4.0
    R[rng.random((m, m)) < 0.2] = -INF
    R[np.arange(m), np.arange(m)] = 0.0
    V = rng.integers(-4, 5, size=m).astype(float)
    assert np.array_equal(pure.bellman_max(R, V, 0.9), compiled.bellman_max(R, V, 0.9))
    a = pure.value_iteration(R, 0.9, 1e-10, 10_000, V)
    b = compiled.value_iteration(R, 0.9, 1e-10, 10_000, V)
    assert np.array_equal(a[0], b[0]) and tuple(a[1:]) == tuple(b[1:])
