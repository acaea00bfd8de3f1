"""Tabulated objectives ``F(x, theta)`` over a lattice and a parameter poset."""

from __future__ import annotations

from typing import Any, Callable

import numpy as np

from .errors import LatticeError
from .lattice import GridLattice, ParamPoset, Point


class Objective:
    """``F`` stored as an ``(m, k)`` table: rows are lattice members, columns parameters."""

    def __init__(self, lattice: GridLattice, poset: ParamPoset, values: Any, name: str = "table"):
        values = np.array(values, dtype=float)
        if values.shape != (len(lattice), len(poset)):
            raise LatticeError(f"objective table has shape {values.shape}, expected {(len(lattice), len(poset))}")
        if not np.all(np.isfinite(values)):
            raise LatticeError("objective values must be finite")
        values.setflags(write=False)
        self.lattice = lattice
        self.poset = poset
        self.values = values
        self.name = name

    @classmethod
    def from_function(
        cls, lattice: GridLattice, poset: ParamPoset, fn: Callable[[Point, Any], float], name: str = "function"
    ) -> "Objective":
        vals = [[fn(lattice.point(i), poset.element(t)) for t in range(len(poset))] for i in range(len(lattice))]
        return cls(lattice, poset, vals, name=name)

    def __call__(self, x: Point, theta: Any) -> float:
        return float(self.values[self.lattice.id_of(x), self.poset.index(theta)])

    def column(self, t: int) -> np.ndarray:
        return self.values[:, t]

    def reindexed(self, lattice: GridLattice, rows: np.ndarray, poset: ParamPoset | None = None) -> "Objective":
        """Same values on another enumeration: row ``i`` of the result is row ``rows[i]`` here."""
        return Objective(lattice, poset or self.poset, self.values[rows], name=self.name)

    def to_config(self) -> dict:
        return {"family": "table", "values": self.values.tolist()}
