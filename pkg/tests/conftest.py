import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mcsadj.lattice import GridLattice

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def grids(draw, max_dim=3, max_points=4):
    n = draw(st.integers(1, max_dim))
    axes = []
    for _ in range(n):
        vals = draw(st.lists(st.integers(-3, 4), min_size=1, max_size=max_points, unique=True))
        axes.append(sorted(vals))
    return GridLattice(axes)


@st.composite
def sublattices(draw, max_dim=3, max_points=4):
    """Meet/join closure of a random subset of a random grid."""
    full = draw(grids(max_dim, max_points))
    seeds = draw(st.lists(st.integers(0, len(full) - 1), min_size=1, max_size=5, unique=True))
    keep = set(seeds)
    while True:
        grown = keep | {int(full.meet_table[a, b]) for a in keep for b in keep} | {int(full.join_table[a, b]) for a in keep for b in keep}
        if grown == keep:
            break
        keep = grown
    return GridLattice([a.tolist() for a in full.axes], members=full.points(sorted(keep)))


@st.composite
def tables(draw, lattice, columns=1):
    vals = draw(st.lists(st.integers(-8, 8), min_size=len(lattice) * columns, max_size=len(lattice) * columns))
    return np.array(vals, dtype=float).reshape(len(lattice), columns) / 2.0


def all_pairs(m):
    return itertools.product(range(m), repeat=2)


@pytest.fixture
def square():
    return GridLattice([[0, 1], [0, 1]])


@pytest.fixture
def grid3():
    return GridLattice([[0, 1, 2], [0, 1, 2]])


_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance():
    """Record one verdict line per acceptance criterion; printed in the terminal summary."""

    def record(label: str, ok: bool, detail: str) -> bool:
        _ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
