"""Compare the compiled kernels with the numpy fallback.

Run from the repository root::

    python benchmarks/bench_kernels.py [--repeat 5] [--size 6]

Each kernel is timed on the same inputs under both backends; outputs are
checked for exact agreement before any timing is reported.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from mcsadj import _kernels_py as pure
from mcsadj.lattice import GridLattice

try:
    from mcsadj import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def inputs(size: int, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    axis = list(range(size))
    lat = GridLattice([axis, axis, axis])
    m = len(lat)
    # supermodular table, so the pair scan runs to completion
    X = lat.coords
    f = np.ascontiguousarray(X[:, 0] * X[:, 1] + X[:, 1] * X[:, 2] + X[:, 0] ** 2 / 4.0)
    F = np.ascontiguousarray(np.column_stack([f, f + X.sum(axis=1), f + 2 * X.sum(axis=1)]))
    leq = np.ascontiguousarray(lat.leq_matrix.astype(np.uint8))
    pairs = np.array([[0, 1], [1, 2], [0, 2]], dtype=np.int64)
    R = np.ascontiguousarray(rng.integers(-8, 9, size=(m, m)).astype(float) / 4.0)
    return {"lat": lat, "f": f, "F": F, "leq": leq, "pairs": pairs, "R": R, "V": np.zeros(m)}


def cases(d: dict) -> dict:
    lat = d["lat"]
    return {
        "pair_scan": lambda k: k.pair_scan(d["f"], lat.meet_table, lat.join_table, pure.SUPER, 0.0),
        "scd_scan": lambda k: k.scd_scan(d["F"], d["leq"], d["pairs"], pure.SCD, 0.0),
        "bellman_max": lambda k: k.bellman_max(d["R"], d["V"], 0.9),
        "value_iteration": lambda k: k.value_iteration(d["R"], 0.9, 1e-10, 10**6, d["V"]),
    }


def same(a, b) -> bool:
    if isinstance(a, tuple):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    return bool(np.array_equal(np.asarray(a), np.asarray(b)))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=6, help="points per axis of a 3-d grid")
    args = ap.parse_args()
    d = inputs(args.size)
    print(f"lattice: {len(d['lat'])} members; compiled backend: {'yes' if compiled else 'missing'}")
    print(f"{'kernel':<16}{'numpy (ms)':>12}{'cython (ms)':>13}{'speedup':>10}")
    for name, call in cases(d).items():
        t_py = min(timeit.repeat(lambda: call(pure), number=1, repeat=args.repeat)) * 1e3
        if compiled is None:
            print(f"{name:<16}{t_py:>12.2f}{'-':>13}{'-':>10}")
            continue
        if not same(call(pure), call(compiled)):
            raise SystemExit(f"{name}: backends disagree")
        t_c = min(timeit.repeat(lambda: call(compiled), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<16}{t_py:>12.2f}{t_c:>13.2f}{t_py / t_c:>9.1f}x")


if __name__ == "__main__":
    main()
