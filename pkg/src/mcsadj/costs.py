"""Adjustment-cost functions on difference vectors.

Costs take values in ``[0, inf]``; ``inf`` marks an infeasible adjustment.
Every named family keeps a JSON-able ``spec`` so that instances can be
written back into a scenario config and rebuilt bit-for-bit.
"""

from __future__ import annotations

import math
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import ConfigError

INF = math.inf


class ScalarCost:
    """A one-dimensional cost ``C_i``; the building block of separable costs."""

    def __init__(self, fn: Callable[[float], float], spec: dict | None = None, name: str | None = None):
        self._fn = fn
        self.spec = spec
        self.name = name or (spec or {}).get("family", "custom")

    def __call__(self, v: float) -> float:
        return float(self._fn(float(v)))

    def __repr__(self) -> str:
        return f"ScalarCost({self.spec or self.name})"


class CostFunction:
    """Cost on n-dimensional adjustment vectors.

    ``components`` is set for additively separable costs, in which case the
    value is the sum of the per-dimension scalar costs.
    """

    def __init__(
        self,
        fn: Callable[[tuple[float, ...]], float],
        spec: dict | None = None,
        components: Sequence[ScalarCost] | None = None,
        name: str | None = None,
    ):
        self._fn = fn
        self.spec = spec
        self.components = tuple(components) if components is not None else None
        self.name = name or (spec or {}).get("family", "custom")

    def __call__(self, eps: Sequence[float]) -> float:
        v = float(self._fn(tuple(float(e) for e in eps)))
        if v < 0 or math.isnan(v):
            raise ValueError(f"cost {self.name} returned {v} at {tuple(eps)}; costs must lie in [0, inf]")
        return v

    def __repr__(self) -> str:
        return f"CostFunction({self.spec or self.name})"

    @property
    def separable(self) -> bool:
        return self.components is not None

    def on_rows(self, rows: np.ndarray) -> np.ndarray:
        return np.array([self(tuple(r)) for r in rows], dtype=float)


# ------------------------------------------------------------- scalar families
def s_zero() -> ScalarCost:
    return ScalarCost(lambda v: 0.0, {"family": "zero"})


def s_fixed(k: float) -> ScalarCost:
    """Pay ``k`` for any nonzero adjustment."""
    return ScalarCost(lambda v: 0.0 if v == 0 else k, {"family": "fixed", "k": k})


def s_quadratic(a: float) -> ScalarCost:
    return ScalarCost(lambda v: a * v * v, {"family": "quadratic", "a": a})


def s_free_disposal(a: float) -> ScalarCost:
    """Quadratic for upward adjustment, free downward."""
    return ScalarCost(lambda v: a * v * v if v >= 0 else 0.0, {"family": "free_disposal", "a": a})


def s_constrained(a: float, lo: float, hi: float) -> ScalarCost:
    """Quadratic on the interval ``[lo, hi]`` (which must contain 0), infinite outside."""
    if not lo <= 0 <= hi:
        raise ConfigError(f"constraint interval [{lo}, {hi}] must contain 0")
    return ScalarCost(lambda v: a * v * v if lo <= v <= hi else INF, {"family": "constrained", "a": a, "lo": lo, "hi": hi})


def s_lumpy(a: float, size: float) -> ScalarCost:
    """Quadratic, but upward moves smaller than ``size`` are infeasible."""
    return ScalarCost(lambda v: a * v * v if (v <= 0 or v >= size) else INF, {"family": "lumpy", "a": a, "size": size})


def s_prohibitive() -> ScalarCost:
    return ScalarCost(lambda v: 0.0 if v == 0 else INF, {"family": "prohibitive"})


def s_asymmetric(a_down: float = 0.0, a_up: float = 0.0, b_down: float = 0.0, b_up: float = 0.0) -> ScalarCost:
    """Convex piecewise quadratic: ``a v^2 + b |v|`` with separate coefficients per side."""

    def fn(v):
        if v >= 0:
            return a_up * v * v + b_up * v
        return a_down * v * v - b_down * v

    return ScalarCost(fn, {"family": "asymmetric", "a_down": a_down, "a_up": a_up, "b_down": b_down, "b_up": b_up})


def s_band(lo: float, hi: float, k: float) -> ScalarCost:
    """Free inside ``[lo, hi]`` and ``k`` outside (inattention to small changes)."""
    return ScalarCost(lambda v: 0.0 if lo <= v <= hi else k, {"family": "band", "lo": lo, "hi": hi, "k": k})


def s_table(points: Mapping[float, float] | Sequence[Sequence[float]]) -> ScalarCost:
    """Tabulated cost; evaluating off the table is an error."""
    items = points.items() if isinstance(points, Mapping) else [(p[0], p[1]) for p in points]
    table = {float(k): float(v) for k, v in items}

    def fn(v):
        try:
            return table[v]
        except KeyError:
            raise KeyError(f"scalar cost table has no entry for {v}") from None

    return ScalarCost(fn, {"family": "table", "points": [[k, table[k]] for k in sorted(table)]})


SCALAR_FAMILIES: dict[str, Callable[..., ScalarCost]] = {
    "zero": s_zero,
    "fixed": s_fixed,
    "quadratic": s_quadratic,
    "free_disposal": s_free_disposal,
    "constrained": s_constrained,
    "lumpy": s_lumpy,
    "prohibitive": s_prohibitive,
    "asymmetric": s_asymmetric,
    "band": s_band,
    "table": s_table,
}


# ------------------------------------------------------------- vector families
def separable(components: Sequence[ScalarCost]) -> CostFunction:
    comps = tuple(components)

    def fn(eps):
        total = 0.0
        for c, e in zip(comps, eps):
            total += c(e)
        return total

    return CostFunction(fn, {"family": "separable", "components": [c.spec for c in comps]}, components=comps)


def uniform(scalar: ScalarCost, n: int) -> CostFunction:
    """The same scalar cost applied to every dimension and summed."""
    return separable([scalar] * n)


def zero(n: int) -> CostFunction:
    return uniform(s_zero(), n)


def prohibitive(n: int) -> CostFunction:
    return uniform(s_prohibitive(), n)


def euclidean(scale: float = 1.0) -> CostFunction:
    return CostFunction(lambda e: scale * math.sqrt(sum(v * v for v in e)), {"family": "euclidean", "scale": scale})


def cobb_douglas(exponents: Sequence[float], scale: float = 1.0) -> CostFunction:
    exps = [float(a) for a in exponents]
    if any(a <= 0 for a in exps):
        raise ConfigError("Cobb-Douglas exponents must be positive")

    def fn(e):
        out = scale
        for v, a in zip(e, exps):
            out *= abs(v) ** a
        return out

    return CostFunction(fn, {"family": "cobb_douglas", "exponents": exps, "scale": scale})


def table(entries: Mapping[tuple, float] | Sequence) -> CostFunction:
    if isinstance(entries, Mapping):
        items = list(entries.items())
    else:
        items = [(tuple(e[0]), e[1]) for e in entries]
    tab = {tuple(float(v) for v in k): float(val) for k, val in items}

    def fn(e):
        try:
            return tab[e]
        except KeyError:
            raise KeyError(f"cost table has no entry for {e}") from None

    return CostFunction(fn, {"family": "table", "entries": [[list(k), tab[k]] for k in sorted(tab)]})


def point_mass(target: Sequence[float], at_zero: float) -> CostFunction:
    """Free at ``target``, ``at_zero`` for no adjustment, infeasible elsewhere."""
    tgt = tuple(float(v) for v in target)

    def fn(e):
        if e == tgt:
            return 0.0
        if all(v == 0 for v in e):
            return at_zero
        return INF

    return CostFunction(fn, {"family": "point_mass", "target": list(tgt), "at_zero": at_zero})


def transformed(cost: CostFunction, phi: Callable[[float], float], name: str = "transformed") -> CostFunction:
    """``phi(C(eps))`` with ``phi(inf) = inf``; not serializable."""

    def fn(e):
        v = cost(e)
        return INF if math.isinf(v) else phi(v)

    return CostFunction(fn, None, name=name)


def scaled(cost: CostFunction, factor: float) -> CostFunction:
    """``factor * C`` (keeps separability)."""
    if cost.components is not None:
        comps = [
            ScalarCost(lambda v, c=c: factor * c(v), None, name=f"{factor}*{c.name}") for c in cost.components
        ]
        out = separable(comps)
    else:
        out = CostFunction(lambda e: factor * cost(e), None)
    out.spec = {"family": "scaled", "factor": factor, "cost": cost.spec} if cost.spec is not None else None
    out.name = f"{factor}*{cost.name}"
    return out


def flipped(cost: CostFunction, dims: Sequence[int]) -> CostFunction:
    """The cost seen after negating the listed coordinates of the choice variable."""
    dims = sorted(set(int(d) for d in dims))

    def flip(e):
        return tuple(-v if d in dims else v for d, v in enumerate(e))

    comps = None
    if cost.components is not None:
        comps = [
            ScalarCost(lambda v, c=c: c(-v), None, name=f"flip({c.name})") if d in dims else c
            for d, c in enumerate(cost.components)
        ]
    out = CostFunction(lambda e: cost(flip(e)), None, components=comps, name=f"flip({cost.name})")
    out.spec = {"family": "flipped", "dims": dims, "cost": cost.spec} if cost.spec is not None else None
    return out


def kl_divergence(reference: Sequence[float], scale: float = 1.0, snap: float = 1e-12) -> CostFunction:
    """``scale * KL(G || G0)`` for beliefs written as negated CDF values.

    ``reference`` is the CDF ``G0`` at every support point but the last (where
    it is 1). An adjustment ``eps`` moves the coordinates ``-G`` by ``eps``, so
    ``G = G0 - eps``. Vectors that are not CDFs, or that put mass where ``G0``
    has none, cost ``inf``. Masses within ``snap`` of zero count as zero.
    """
    g0 = [float(v) for v in reference] + [1.0]
    if any(b < a for a, b in zip(g0, g0[1:])) or g0[0] < 0:
        raise ConfigError("reference must be a nondecreasing CDF in [0, 1]")
    m0 = [g0[0]] + [b - a for a, b in zip(g0, g0[1:])]

    def fn(e):
        cdf = [a - v for a, v in zip(g0, e)] + [1.0]
        masses = [cdf[0]] + [b - a for a, b in zip(cdf, cdf[1:])]
        total = 0.0
        for m, q in zip(masses, m0):
            if abs(m) <= snap:
                continue
            if m < 0 or q <= snap:
                return INF
            total += m * math.log(m / q)
        return scale * max(total, 0.0)

    return CostFunction(fn, {"family": "kl", "reference": g0[:-1], "scale": scale})


def tabulate(cost: CostFunction, diffs: np.ndarray) -> np.ndarray:
    """Evaluate ``cost`` on every row of ``diffs``; the zero row must be finite."""
    vals = cost.on_rows(diffs)
    zero_rows = np.flatnonzero(np.all(diffs == 0, axis=1))
    if zero_rows.size and not np.isfinite(vals[zero_rows[0]]):
        raise ValueError(f"cost {cost.name} is infinite at zero; C(0) must be finite")
    return vals


def _scalar_from_spec(spec: Mapping, path: str) -> ScalarCost:
    if not isinstance(spec, Mapping) or "family" not in spec:
        raise ConfigError("scalar cost needs a 'family'", path)
    fam = spec["family"]
    if fam not in SCALAR_FAMILIES:
        raise ConfigError(f"unknown scalar cost family {fam!r}", path)
    params = {k: _num(v, f"{path}.{k}") for k, v in spec.items() if k != "family"}
    try:
        return SCALAR_FAMILIES[fam](**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {fam}: {exc}", path) from None


def _num(v, path):
    if isinstance(v, str):
        if v in ("inf", "+inf", "Infinity"):
            return INF
        if v in ("-inf", "-Infinity"):
            return -INF
        raise ConfigError(f"expected a number, got {v!r}", path)
    if isinstance(v, list):
        return [_num(x, f"{path}[{i}]") for i, x in enumerate(v)]
    return v


def from_spec(spec: Mapping, n: int, path: str = "$.cost") -> CostFunction:
    """Build a cost from its JSON description.

    A scalar family at the top level is applied to every dimension.
    """
    if not isinstance(spec, Mapping) or "family" not in spec:
        raise ConfigError("cost needs a 'family'", path)
    fam = spec["family"]
    if fam == "separable":
        comps = spec.get("components")
        if not isinstance(comps, list) or len(comps) != n:
            raise ConfigError(f"separable cost needs {n} components", path)
        return separable([_scalar_from_spec(c, f"{path}.components[{i}]") for i, c in enumerate(comps)])
    if fam == "euclidean":
        return euclidean(float(spec.get("scale", 1.0)))
    if fam == "cobb_douglas":
        exps = spec.get("exponents")
        if not isinstance(exps, list) or len(exps) != n:
            raise ConfigError(f"cobb_douglas needs {n} exponents", path)
        return cobb_douglas(exps, float(spec.get("scale", 1.0)))
    if fam == "table" and "entries" in spec:
        entries = [(tuple(e[0]), _num(e[1], f"{path}.entries[{i}]")) for i, e in enumerate(spec["entries"])]
        return table(entries)
    if fam == "point_mass":
        return point_mass(spec["target"], _num(spec["at_zero"], f"{path}.at_zero"))
    if fam == "scaled":
        return scaled(from_spec(spec["cost"], n, f"{path}.cost"), float(spec["factor"]))
    if fam == "kl":
        ref = spec.get("reference")
        if not isinstance(ref, list) or len(ref) != n:
            raise ConfigError(f"kl cost needs a reference CDF with {n} entries", path)
        return kl_divergence(ref, float(spec.get("scale", 1.0)))
    if fam == "flipped":
        return flipped(from_spec(spec["cost"], n, f"{path}.cost"), spec["dims"])
    if fam in SCALAR_FAMILIES:
        return uniform(_scalar_from_spec(spec, path), n)
    raise ConfigError(f"unknown cost family {fam!r}", path)
