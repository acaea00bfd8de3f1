"""Exhaustive decision procedures for complementarity and cost properties.

Every check enumerates the finite instance and returns a
:class:`PropertyReport`. On failure the witness is the first violating tuple
in a fixed enumeration order (member ids ascending, then parameter pairs,
then dimensions), so reports are reproducible.

Costs may be infinite. Checks only ever compare cost values, never subtract
them, so ``inf <= inf`` holds and ``inf`` exceeds every finite value.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .costs import CostFunction, ScalarCost, tabulate
from .lattice import GridLattice, ParamPoset
from .objective import Objective


@dataclass(frozen=True)
class PropertyReport:
    name: str
    holds: bool
    witness: dict | None = None
    note: str = ""

    def __post_init__(self):
        if self.holds and self.witness is not None:
            raise ValueError("a report that holds carries no witness")
        if not self.holds and self.witness is None:
            raise ValueError("a failing report needs a witness")

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        out: dict = {"name": self.name, "holds": self.holds}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.note:
            out["note"] = self.note
        return out


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")
    if isinstance(v, np.integer):
        return int(v)
    return v


def _ok(name: str, note: str = "") -> PropertyReport:
    return PropertyReport(name, True, None, note)


def _plain(v):
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def _fail(name: str, witness: dict, note: str = "") -> PropertyReport:
    return PropertyReport(name, False, {k: _plain(v) for k, v in witness.items()}, note)


def _pt(v) -> list:
    return [float(a) for a in v]


# ------------------------------------------------------------ objective side
def _columns(f, lattice: GridLattice) -> tuple[np.ndarray, ParamPoset | None]:
    if isinstance(f, Objective):
        return np.ascontiguousarray(f.values), f.poset
    if callable(f):
        vals = np.array([f(lattice.point(i)) for i in range(len(lattice))], dtype=float)
        return vals[:, None], None
    arr = np.asarray(f, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.shape[0] != len(lattice):
        raise ValueError(f"table has {arr.shape[0]} rows for a lattice of {len(lattice)} members")
    return np.ascontiguousarray(arr), None


def _pair_check(name: str, mode: int, f, lattice: GridLattice, tol: float, negate: bool = False) -> PropertyReport:
    table, poset = _columns(f, lattice)
    if negate:
        table = -table
    for t in range(table.shape[1]):
        i, j = kernels.pair_scan(np.ascontiguousarray(table[:, t]), lattice.meet_table, lattice.join_table, mode, tol)
        if i >= 0:
            w = {"x": _pt(lattice.coords[i]), "y": _pt(lattice.coords[j])}
            if table.shape[1] > 1 or poset is not None:
                w["theta"] = poset.element(t) if poset is not None else t
            return _fail(name, w)
    return _ok(name)


def check_quasi_supermodular(f, lattice: GridLattice, tol: float = 0.0) -> PropertyReport:
    """``f(x) - f(x^y) >= (>) 0`` implies ``f(x v y) - f(y) >= (>) 0``, per parameter column."""
    return _pair_check("quasi_supermodular", kernels.QUASI, f, lattice, tol)


def check_supermodular(f, lattice: GridLattice, tol: float = 0.0) -> PropertyReport:
    return _pair_check("supermodular", kernels.SUPER, f, lattice, tol)


def check_submodular(f, lattice: GridLattice, tol: float = 0.0) -> PropertyReport:
    return _pair_check("submodular", kernels.SUPER, f, lattice, tol, negate=True)


def check_quasi_submodular(f, lattice: GridLattice, tol: float = 0.0) -> PropertyReport:
    return _pair_check("quasi_submodular", kernels.QUASI, f, lattice, tol, negate=True)


def _scd_like(name: str, mode: int, F: Objective, tol: float, pairs=None) -> PropertyReport:
    lat = F.lattice
    pairs = np.array(F.poset.strict_pairs() if pairs is None else pairs, dtype=np.int64).reshape(-1, 2)
    leq = np.ascontiguousarray(lat.leq_matrix.astype(np.uint8))
    i, j, p = kernels.scd_scan(np.ascontiguousarray(F.values), leq, pairs, mode, tol)
    if i < 0:
        return _ok(name)
    a, b = pairs[p]
    return _fail(
        name,
        {
            "x": _pt(lat.coords[i]),
            "y": _pt(lat.coords[j]),
            "theta_low": F.poset.element(int(a)),
            "theta_high": F.poset.element(int(b)),
        },
    )


def check_single_crossing_diff(F: Objective, strict: bool = False, tol: float = 0.0, pairs=None) -> PropertyReport:
    """Single-crossing differences in ``(x, theta)``; ``pairs`` restricts the parameter pairs."""
    if strict:
        return _scd_like("strict_single_crossing_differences", kernels.STRICT_SCD, F, tol, pairs)
    return _scd_like("single_crossing_differences", kernels.SCD, F, tol, pairs)


def check_increasing_diff(F: Objective, strict: bool = False, tol: float = 0.0) -> PropertyReport:
    if strict:
        return _scd_like("strict_increasing_differences", kernels.STRICT_INCREASING, F, tol)
    return _scd_like("increasing_differences", kernels.INCREASING, F, tol)


def check_log_increasing_diff(F: Objective, strict: bool = False, tol: float = 0.0) -> PropertyReport:
    if np.any(F.values <= 0):
        raise ValueError("log increasing differences needs a strictly positive objective")
    if strict:
        return _scd_like("strict_log_increasing_differences", kernels.STRICT_LOG_INCREASING, F, tol)
    return _scd_like("log_increasing_differences", kernels.LOG_INCREASING, F, tol)


# ----------------------------------------------------------------- cost side
class CostTable:
    """A cost evaluated on the whole difference set of a lattice."""

    def __init__(self, cost: CostFunction | Sequence[float], lattice: GridLattice):
        self.lattice = lattice
        self.diffs = lattice.diffs
        if isinstance(cost, CostFunction):
            self.cost = cost
            self.values = tabulate(cost, self.diffs)
        else:
            self.cost = None
            self.values = np.asarray(cost, dtype=float)
            if self.values.shape != (self.diffs.shape[0],):
                raise ValueError("cost table does not match the difference set")
        if np.any(np.isnan(self.values)) or np.any(self.values < 0):
            raise ValueError("cost values must lie in [0, inf]")
        if not np.isfinite(self.values[lattice.zero_diff]):
            raise ValueError("C(0) must be finite")

    @classmethod
    def of(cls, cost, lattice: GridLattice) -> "CostTable":
        """Tabulate once per (cost, lattice); tables of named costs are cached on the cost."""
        if isinstance(cost, CostTable):
            return cost
        if not isinstance(cost, CostFunction):
            return cls(cost, lattice)
        cache = cost.__dict__.setdefault("_tables", weakref.WeakKeyDictionary())
        table = cache.get(lattice)
        if table is None:
            table = cache[lattice] = cls(cost, lattice)
        return table

    def id(self, eps) -> int | None:
        return self.lattice.diff_id(eps)

    def vec(self, k: int) -> list:
        return _pt(self.diffs[k])

    def __getitem__(self, k):
        return self.values[k]


def _toward_zero_neighbours(diffs: np.ndarray) -> np.ndarray:
    """``nb[d, k]``: id of the next difference vector from ``diffs[k]`` toward 0 along axis d, or -1."""
    K, n = diffs.shape
    nb = np.full((n, K), -1, dtype=np.int64)
    for d in range(n):
        lines: dict[tuple, list[tuple[float, int]]] = {}
        for k, row in enumerate(diffs.tolist()):
            key = tuple(row[:d] + row[d + 1:])
            lines.setdefault(key, []).append((row[d], k))
        for members in lines.values():
            members.sort()
            vals = [v for v, _ in members]
            for pos, (v, k) in enumerate(members):
                if v > 0 and pos > 0 and vals[pos - 1] >= 0:
                    nb[d, k] = members[pos - 1][1]
                elif v < 0 and pos + 1 < len(members) and vals[pos + 1] <= 0:
                    nb[d, k] = members[pos + 1][1]
    return nb


def check_cost_monotone(cost, lattice: GridLattice, tol: float = 0.0) -> PropertyReport:
    """Shifting any one coordinate of an adjustment toward zero never raises cost."""
    ct = CostTable.of(cost, lattice)
    nb = _toward_zero_neighbours(ct.diffs)
    c = ct.values
    K = c.size
    for k in range(K):
        for d in range(lattice.n):
            j = nb[d, k]
            if j >= 0 and c[j] > c[k] + tol:
                return _fail("monotone", {"eps": ct.vec(k), "eps_toward_zero": ct.vec(j), "cost": c[k], "cost_toward_zero": c[j]})
    return _ok("monotone")


def _between(a: np.ndarray, b: np.ndarray) -> bool:
    return bool(np.all(((0 <= a) & (a <= b)) | ((0 >= a) & (a >= b))))


def check_cost_strictly_monotone(cost, lattice: GridLattice, tol: float = 0.0) -> PropertyReport:
    """``C(eps') < C(eps)`` for every ``eps' != eps`` lying between 0 and ``eps``."""
    ct = CostTable.of(cost, lattice)
    D = ct.diffs
    c = ct.values
    between = np.all(((D[None, :, :] >= 0) & (D[None, :, :] <= D[:, None, :])) | ((D[None, :, :] <= 0) & (D[None, :, :] >= D[:, None, :])), axis=2)
    np.fill_diagonal(between, False)
    # between[k, j]: diffs[j] lies between 0 and diffs[k]
    bad = between & ~(c[None, :] + tol < c[:, None])
    if bad.any():
        k, j = np.argwhere(bad)[0]
        return _fail("strictly_monotone", {"eps": ct.vec(k), "eps_between": ct.vec(j), "cost": c[k], "cost_between": c[j]})
    return _ok("strictly_monotone")


def _min_mono_pairs(ct: CostTable) -> tuple[np.ndarray, np.ndarray]:
    D = ct.diffs
    lo = np.array([ct.id(r) for r in np.minimum(D, 0)], dtype=np.int64)
    hi = np.array([ct.id(r) for r in np.maximum(D, 0)], dtype=np.int64)
    return lo, hi


def check_cost_minimally_monotone(cost, lattice: GridLattice, tol: float = 0.0) -> PropertyReport:
    """``C(eps ^ 0) <= C(eps) >= C(eps v 0)``."""
    ct = CostTable.of(cost, lattice)
    c = ct.values
    lo, hi = _min_mono_pairs(ct)
    for k in range(c.size):
        for other in (lo[k], hi[k]):
            if c[other] > c[k] + tol:
                return _fail("minimally_monotone", {"eps": ct.vec(k), "eps_cancelled": ct.vec(other), "cost": c[k], "cost_cancelled": c[other]})
    return _ok("minimally_monotone")


def check_cost_strictly_minimally_monotone(cost, lattice: GridLattice, tol: float = 0.0) -> PropertyReport:
    """Cancelling all upward (or all downward) moves strictly lowers cost unless nothing changes."""
    ct = CostTable.of(cost, lattice)
    c = ct.values
    lo, hi = _min_mono_pairs(ct)
    for k in range(c.size):
        for other in (lo[k], hi[k]):
            if other != k and not c[other] + tol < c[k]:
                return _fail(
                    "strictly_minimally_monotone",
                    {"eps": ct.vec(k), "eps_cancelled": ct.vec(other), "cost": c[k], "cost_cancelled": c[other]},
                )
    return _ok("strictly_minimally_monotone")


def check_single_dipped_at_zero(points: Iterable[tuple[float, float]]) -> PropertyReport:
    """A scalar function (given as ``(v, C(v))`` pairs, 0 included) is single-dipped and minimised at 0.

    Searches every dip location independently of the monotonicity check.
    """
    pts = sorted((float(v), float(c)) for v, c in points)
    vals = [c for _, c in pts]
    zero = [k for k, (v, _) in enumerate(pts) if v == 0]
    if not zero:
        raise ValueError("0 must be in the domain")
    if min(vals) < vals[zero[0]]:
        k = vals.index(min(vals))
        return _fail("single_dipped_at_zero", {"v": pts[k][0], "cost": vals[k], "cost_at_zero": vals[zero[0]]})
    for dip in range(len(vals)):
        left = all(vals[k] >= vals[k + 1] for k in range(dip))
        right = all(vals[k] <= vals[k + 1] for k in range(dip, len(vals) - 1))
        if left and right:
            return _ok("single_dipped_at_zero")
    # witness: a strict interior peak
    for k in range(1, len(vals) - 1):
        if vals[k] > min(vals[:k]) and vals[k] > min(vals[k + 1:]):
            return _fail("single_dipped_at_zero", {"v": pts[k][0], "cost": vals[k]})
    return _fail("single_dipped_at_zero", {"v": pts[0][0], "cost": vals[0]})


def check_cost_separable(cost, lattice: GridLattice, tol: float = 0.0) -> PropertyReport:
    """``C(eps) = sum_i C(eps_i e_i) - (n-1) C(0)`` on the difference set.

    When the cost declares components, those are checked instead.
    """
    ct = CostTable.of(cost, lattice)
    c = ct.values
    n = lattice.n
    comps = ct.cost.components if ct.cost is not None else None
    zero = float(c[lattice.zero_diff])
    for k, row in enumerate(ct.diffs):
        if comps is not None:
            parts = [comps[d](row[d]) for d in range(n)]
            total = math.fsum(parts) if all(math.isfinite(p) for p in parts) else math.inf
        else:
            parts = []
            for d in range(n):
                e = np.zeros(n)
                e[d] = row[d]
                j = ct.id(e)
                if j is None:
                    return _fail("additively_separable", {"eps": ct.vec(k), "missing_axis_vector": _pt(e)})
                parts.append(float(c[j]))
            total = math.inf if any(math.isinf(p) for p in parts) else math.fsum(parts) - (n - 1) * zero
        if math.isinf(total) or math.isinf(c[k]):
            if math.isinf(total) != math.isinf(c[k]):
                return _fail("additively_separable", {"eps": ct.vec(k), "cost": c[k], "sum_of_parts": total})
        elif abs(total - c[k]) > tol + 1e-12 * max(1.0, abs(total)):
            return _fail("additively_separable", {"eps": ct.vec(k), "cost": c[k], "sum_of_parts": total})
    return _ok("additively_separable")


def axis_cost_points(cost, lattice: GridLattice, d: int) -> list[tuple[float, float]]:
    """``(v, C(v e_d))`` for every axis-d difference present along the zero line."""
    ct = CostTable.of(cost, lattice)
    others = np.delete(ct.diffs, d, axis=1)
    on_axis = np.flatnonzero(np.all(others == 0, axis=1))
    return [(float(ct.diffs[k, d]), float(ct.values[k])) for k in on_axis]


def check_cost_convex_separable(cost, lattice: GridLattice, tol: float = 0.0) -> PropertyReport:
    """Separable, and each one-dimensional part is discretely convex.

    Convexity on a grid: the finite part of the domain is contiguous and the
    slopes between consecutive points are nondecreasing.
    """
    sep = check_cost_separable(cost, lattice, tol)
    if not sep:
        return _fail("convex_separable", sep.witness, "not additively separable")
    for d in range(lattice.n):
        pts = sorted(axis_cost_points(cost, lattice, d))
        finite = [k for k, (_, c) in enumerate(pts) if math.isfinite(c)]
        if finite != list(range(finite[0], finite[-1] + 1)):
            gap = next(k for k in range(finite[0], finite[-1] + 1) if k not in finite)
            return _fail("convex_separable", {"dim": d, "v": pts[gap][0], "cost": pts[gap][1]}, "finite domain has a gap")
        seg = [pts[k] for k in finite]
        slopes = [(seg[k + 1][1] - seg[k][1]) / (seg[k + 1][0] - seg[k][0]) for k in range(len(seg) - 1)]
        for k in range(len(slopes) - 1):
            if slopes[k] > slopes[k + 1] + tol:
                return _fail("convex_separable", {"dim": d, "v": seg[k + 1][0], "slope_left": slopes[k], "slope_right": slopes[k + 1]})
    return _ok("convex_separable")


def check_lemma_c1(cost, lattice: GridLattice, tol: float = 0.0) -> PropertyReport:
    """``C(z v x - z v y) <= C(x - y) >= C(z ^ x - z ^ y)`` plus the one-sided corollary.

    Triples range over lattice members, which keeps every difference inside
    the difference set. The conclusion is only guaranteed for monotone
    costs; the report says which hypothesis held.
    """
    ct = CostTable.of(cost, lattice)
    c = ct.values
    mono = bool(check_cost_monotone(ct, lattice, tol))
    note = "cost is monotone" if mono else "cost is not monotone; conclusion not guaranteed"
    D = lattice.diff_table
    M = lattice.meet_table
    J = lattice.join_table
    le = lattice.leq_matrix
    m = len(lattice)
    base = c[D]  # base[x, y] = C(x - y)
    for z in range(m):
        up = c[D[J[z][:, None], J[z][None, :]]]  # C(z v x - z v y)
        dn = c[D[M[z][:, None], M[z][None, :]]]
        bad = (up > base + tol) | (dn > base + tol)
        # corollary: z <= y -> C(z v x - y) <= C(x - y); z >= y -> C(z ^ x - y) <= C(x - y)
        cj = c[D[J[z][:, None], np.arange(m)[None, :]]]
        cm = c[D[M[z][:, None], np.arange(m)[None, :]]]
        bad |= le[z][None, :] & (cj > base + tol)
        bad |= le[:, z][None, :] & (cm > base + tol)
        if bad.any():
            x, y = np.argwhere(bad)[0]
            return _fail(
                "monotone_cost_lemma",
                {"x": _pt(lattice.coords[x]), "y": _pt(lattice.coords[y]), "z": _pt(lattice.coords[z])},
                note,
            )
    return _ok("monotone_cost_lemma", note)


def scalar_dip_inequality(cost: ScalarCost, x: float, y: float, z: float) -> tuple[float, float]:
    """Both sides of ``C(y v z - x v y) + C(y ^ z - x ^ y) <= C(y - x) + C(z - y)``."""
    lhs = cost(max(y, z) - max(x, y)) + cost(min(y, z) - min(x, y))
    rhs = cost(y - x) + cost(z - y)
    return lhs, rhs
