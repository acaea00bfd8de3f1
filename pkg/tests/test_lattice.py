import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import grids, sublattices
from mcsadj.errors import LatticeError
from mcsadj.lattice import GridLattice, ParamPoset, join, leq, meet, strong_set_geq


def test_meet_and_join_are_coordinatewise():
    assert meet((1, 3), (2, 2)) == (1, 2)
    assert join((1, 3), (2, 2)) == (2, 3)
    assert meet((4, -1), (4, -1)) == (4, -1)
    assert leq((0, 1), (1, 1)) and not leq((1, 0), (0, 1))


def test_boolean_square(square):
    i, j = square.id_of((0, 1)), square.id_of((1, 0))
    assert square.point(square.join_id(i, j)) == (1, 1)
    assert square.point(square.meet_id(i, j)) == (0, 0)


def test_members_are_lexicographic(grid3):
    pts = grid3.points()
    assert pts == sorted(pts)
    assert len(grid3) == 9


def test_box_of_grid(grid3):
    assert grid3.box((0, 0), (1, 1)).points() == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert grid3.box((2, 1), (2, 1)).points() == [(2, 1)]


def test_not_closed_is_rejected():
    with pytest.raises(LatticeError, match="not a sublattice"):
        GridLattice([[0, 1], [0, 1]], members=[(0, 1), (1, 0)])


def test_bad_axes_rejected():
    with pytest.raises(LatticeError):
        GridLattice([[0, 0, 1]])
    with pytest.raises(LatticeError):
        GridLattice([[0, 1]], members=[(0.5,)])
    with pytest.raises(LatticeError):
        GridLattice([])


def test_masked_lattice_with_hole():
    # removing the centre breaks closure; removing a corner block keeps it
    mask = np.ones((3, 3), dtype=bool)
    mask[1, 1] = False
    with pytest.raises(LatticeError):
        GridLattice([[0, 1, 2], [0, 1, 2]], mask=mask)
    mask = np.ones((3, 3), dtype=bool)
    mask[2, 0] = False
    mask[2, 1] = False
    lat = GridLattice([[0, 1, 2], [0, 1, 2]], mask=mask)
    assert len(lat) == 7


def test_strong_set_order_examples(square):
    assert strong_set_geq([(1, 1)], [(0, 0)])
    assert not strong_set_geq([(1, 0)], [(0, 1)])


@given(grids(), st.data())
def test_strong_set_order_matches_definition(lat, data):
    ids = list(range(len(lat)))
    X = data.draw(st.lists(st.sampled_from(ids), min_size=1, max_size=4, unique=True))
    Y = data.draw(st.lists(st.sampled_from(ids), min_size=1, max_size=4, unique=True))
    xs, ys = lat.points(X), lat.points(Y)
    brute = all(join(x, y) in xs and meet(x, y) in ys for x in xs for y in ys)
    assert lat.strong_set_geq_ids(X, Y) == brute == strong_set_geq(xs, ys)


@given(sublattices())
def test_tables_match_coordinatewise_order(lat):
    for i, j in itertools.product(range(len(lat)), repeat=2):
        x, y = lat.point(i), lat.point(j)
        assert lat.point(lat.meet_id(i, j)) == meet(x, y)
        assert lat.point(lat.join_id(i, j)) == join(x, y)
        assert bool(lat.leq_matrix[i, j]) == leq(x, y) == lat.le(i, j)


@given(sublattices())
def test_lattice_laws(lat):
    M, J = lat.meet_table, lat.join_table
    m = len(lat)
    idx = np.arange(m)
    assert np.array_equal(M, M.T) and np.array_equal(J, J.T)
    assert np.array_equal(M[idx, idx], idx) and np.array_equal(J[idx, idx], idx)
    for i, j in itertools.product(range(m), repeat=2):
        assert M[i, J[i, j]] == i and J[i, M[i, j]] == i


@given(sublattices())
def test_difference_table(lat):
    D = lat.diff_table
    for i, j in itertools.product(range(len(lat)), repeat=2):
        assert tuple(lat.diffs[D[i, j]]) == tuple(a - b for a, b in zip(lat.point(i), lat.point(j)))
    assert not lat.diffs[lat.zero_diff].any()


@given(st.one_of(grids().map(lambda g: (g, None)), sublattices().map(lambda g: (g, "all"))), st.data())
def test_flip_is_an_involution(case, data):
    lat, mode = case
    dims = list(range(lat.n)) if mode == "all" else data.draw(st.lists(st.integers(0, lat.n - 1), unique=True))
    once, rows = lat.flipped(dims)
    twice, rows2 = once.flipped(dims)
    assert twice.points() == lat.points()
    assert np.array_equal(rows[rows2], np.arange(len(lat)))
    for k in range(len(once)):
        p, q = once.point(k), lat.point(rows[k])
        assert all((-a if d in dims else a) == b for d, (a, b) in enumerate(zip(p, q)))


def test_partial_flip_of_a_chain_is_rejected():
    chain = GridLattice([[0, 1], [0, 1]], members=[(0, 0), (1, 1)])
    with pytest.raises(LatticeError, match="does not give a sublattice"):
        chain.flipped([0])
    assert chain.flipped([0, 1])[0].points() == [(-1, -1), (0, 0)]


def test_is_sublattice_reports_a_pair(square):
    ok, pair = square.is_sublattice([square.id_of((0, 1)), square.id_of((1, 0))])
    assert not ok and pair is not None
    assert square.is_sublattice(range(4)) == (True, None)


def test_param_poset_orders():
    chain = ParamPoset.chain([0, 1, 2])
    assert chain.le(0, 2) and not chain.le(2, 0) and chain.lt(0, 1)
    prod = ParamPoset.product([(0, 0), (0, 1), (1, 0), (1, 1)])
    a, b = prod.index((0, 1)), prod.index((1, 0))
    assert not prod.le(a, b) and not prod.le(b, a)
    assert prod.le(prod.index((0, 0)), prod.index((1, 1)))
    assert chain.reversed().le(2, 0)


def test_param_poset_rejects_non_orders():
    with pytest.raises(LatticeError, match="antisymmetric"):
        ParamPoset(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(LatticeError, match="transitive"):
        ParamPoset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    with pytest.raises(LatticeError):
        ParamPoset.chain([0, 1]).index(5)
