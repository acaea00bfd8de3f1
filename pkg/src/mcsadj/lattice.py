"""Finite sublattices of a product grid and finite parameter posets.

Members of a :class:`GridLattice` are enumerated once, in lexicographic order
of their coordinates, and every other module refers to them by that integer
id. Meet, join, the product order and the difference set are precomputed as
id tables so that the solvers and checks can work on plain arrays.
"""

from __future__ import annotations

from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import LatticeError

Point = tuple[float, ...]


def _as_point(x: Iterable[float]) -> Point:
    return tuple(float(v) for v in x)


def meet(x: Sequence[float], y: Sequence[float]) -> Point:
    """Coordinatewise minimum."""
    if len(x) != len(y):
        raise LatticeError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return tuple(float(min(a, b)) for a, b in zip(x, y))


def join(x: Sequence[float], y: Sequence[float]) -> Point:
    """Coordinatewise maximum."""
    if len(x) != len(y):
        raise LatticeError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return tuple(float(max(a, b)) for a, b in zip(x, y))


def leq(x: Sequence[float], y: Sequence[float]) -> bool:
    """Product order: ``x <= y`` in every coordinate."""
    if len(x) != len(y):
        raise LatticeError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return all(a <= b for a, b in zip(x, y))


def strong_set_geq(X: Iterable[Sequence[float]], Y: Iterable[Sequence[float]]) -> bool:
    """True iff ``X`` is higher than ``Y`` in the strong set order.

    For every ``x`` in X and ``y`` in Y the join must lie in X and the meet in
    Y. Empty sets compare true.
    """
    xs = {_as_point(x) for x in X}
    ys = {_as_point(y) for y in Y}
    for x in xs:
        for y in ys:
            if join(x, y) not in xs or meet(x, y) not in ys:
                return False
    return True


class GridLattice:
    """A finite sublattice of the product grid ``axes[0] x ... x axes[n-1]``.

    Args:
        axes: per-dimension strictly increasing coordinate values.
        members: optional explicit member points; defaults to the full grid.
        mask: optional boolean array over the full grid (alternative to
            ``members``).

    Construction fails with :class:`LatticeError` if the member set is empty,
    off-grid, or not closed under coordinatewise min and max.
    """

    def __init__(
        self,
        axes: Sequence[Sequence[float]],
        members: Iterable[Sequence[float]] | None = None,
        mask: Any = None,
    ):
        if len(axes) == 0:
            raise LatticeError("at least one axis is required")
        self.axes: tuple[np.ndarray, ...] = tuple(np.asarray(a, dtype=float).reshape(-1) for a in axes)
        for d, ax in enumerate(self.axes):
            if ax.size == 0:
                raise LatticeError(f"axis {d} is empty")
            if not np.all(np.isfinite(ax)):
                raise LatticeError(f"axis {d} has non-finite values")
            if ax.size > 1 and not np.all(np.diff(ax) > 0):
                raise LatticeError(f"axis {d} is not strictly increasing")
        self.shape = tuple(ax.size for ax in self.axes)
        self.n = len(self.axes)

        if members is not None and mask is not None:
            raise LatticeError("give either members or mask, not both")
        if members is not None:
            pos = [{float(v): k for k, v in enumerate(ax)} for ax in self.axes]
            rows = []
            for p in members:
                p = tuple(p)
                if len(p) != self.n:
                    raise LatticeError(f"member {p} has dimension {len(p)}, expected {self.n}")
                try:
                    rows.append([pos[d][float(v)] for d, v in enumerate(p)])
                except KeyError:
                    raise LatticeError(f"member {p} is not on the grid axes") from None
            index = np.array(rows, dtype=np.int64).reshape(-1, self.n)
        elif mask is not None:
            mask = np.asarray(mask, dtype=bool)
            if mask.shape != self.shape:
                raise LatticeError(f"mask shape {mask.shape} != grid shape {self.shape}")
            index = np.argwhere(mask).astype(np.int64)
        else:
            index = np.indices(self.shape).reshape(self.n, -1).T.astype(np.int64)
        if index.shape[0] == 0:
            raise LatticeError("lattice is empty")
        index = np.unique(index, axis=0)  # also sorts rows lexicographically
        self.index = index
        self.index.setflags(write=False)
        self.size = index.shape[0]
        self.coords = np.column_stack([self.axes[d][index[:, d]] for d in range(self.n)])
        self.coords.setflags(write=False)

        self._strides = np.array([int(np.prod(self.shape[d + 1:])) for d in range(self.n)], dtype=np.int64)
        self._lookup = np.full(int(np.prod(self.shape)), -1, dtype=np.int64)
        self._lookup[index @ self._strides] = np.arange(self.size)
        self.full_grid = self.size == self._lookup.size
        self._check_closure()

    # ---------------------------------------------------------------- basics
    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"GridLattice(shape={self.shape}, members={self.size})"

    def point(self, i: int) -> Point:
        return tuple(float(v) for v in self.coords[i])

    def points(self, ids: Iterable[int] | None = None) -> list[Point]:
        if ids is None:
            ids = range(self.size)
        return [self.point(int(i)) for i in ids]

    def _grid_index(self, x: Sequence[float]) -> list[int] | None:
        if len(x) != self.n:
            raise LatticeError(f"dimension mismatch: {len(x)} vs {self.n}")
        out = []
        for d, v in enumerate(x):
            k = int(np.searchsorted(self.axes[d], float(v)))
            if k >= self.shape[d] or self.axes[d][k] != float(v):
                return None
            out.append(k)
        return out

    def contains(self, x: Sequence[float]) -> bool:
        g = self._grid_index(x)
        return g is not None and self._lookup[int(np.dot(g, self._strides))] >= 0

    def id_of(self, x: Sequence[float]) -> int:
        g = self._grid_index(x)
        i = -1 if g is None else int(self._lookup[int(np.dot(g, self._strides))])
        if i < 0:
            raise LatticeError(f"{tuple(x)} is not a member of the lattice")
        return i

    def ids_of(self, xs: Iterable[Sequence[float]]) -> np.ndarray:
        return np.array([self.id_of(x) for x in xs], dtype=np.int64)

    def _ids_from_index(self, idx: np.ndarray) -> np.ndarray:
        return self._lookup[idx @ self._strides]

    # ---------------------------------------------------------- order tables
    def _check_closure(self) -> None:
        lo = np.minimum(self.index[:, None, :], self.index[None, :, :])
        hi = np.maximum(self.index[:, None, :], self.index[None, :, :])
        mt = self._ids_from_index(lo)
        jt = self._ids_from_index(hi)
        bad = (mt < 0) | (jt < 0)
        if bad.any():
            i, j = (int(v) for v in np.argwhere(bad)[0])
            raise LatticeError(
                f"member set is not a sublattice: meet/join of {self.point(i)} and {self.point(j)} is missing"
            )
        self.meet_table = mt.astype(np.int32)
        self.join_table = jt.astype(np.int32)
        self.meet_table.setflags(write=False)
        self.join_table.setflags(write=False)

    @cached_property
    def leq_matrix(self) -> np.ndarray:
        """``leq_matrix[i, j]`` is True iff member i <= member j."""
        return np.all(self.index[:, None, :] <= self.index[None, :, :], axis=2)

    def le(self, i: int, j: int) -> bool:
        return bool(np.all(self.index[i] <= self.index[j]))

    def meet_id(self, i: int, j: int) -> int:
        return int(self.meet_table[i, j])

    def join_id(self, i: int, j: int) -> int:
        return int(self.join_table[i, j])

    def join_all(self, ids: Iterable[int]) -> int:
        ids = list(ids)
        if not ids:
            raise LatticeError("join of an empty set")
        out = int(ids[0])
        for i in ids[1:]:
            out = int(self.join_table[out, i])
        return out

    def meet_all(self, ids: Iterable[int]) -> int:
        ids = list(ids)
        if not ids:
            raise LatticeError("meet of an empty set")
        out = int(ids[0])
        for i in ids[1:]:
            out = int(self.meet_table[out, i])
        return out

    def largest(self, ids: Iterable[int]) -> int | None:
        """Id of the largest element of ``ids`` or None when there is none."""
        ids = [int(i) for i in ids]
        top = self.join_all(ids)
        return top if top in ids else None

    # -------------------------------------------------------- difference set
    @cached_property
    def _axis_diffs(self) -> list[tuple[np.ndarray, np.ndarray]]:
        out = []
        for ax in self.axes:
            dv = ax[:, None] - ax[None, :]
            uniq, inv = np.unique(dv, return_inverse=True)
            out.append((uniq, inv.reshape(dv.shape)))
        return out

    @cached_property
    def _diff_data(self) -> tuple[np.ndarray, np.ndarray]:
        sizes = [u.size for u, _ in self._axis_diffs]
        strides = [int(np.prod(sizes[d + 1:])) for d in range(self.n)]
        key = np.zeros((self.size, self.size), dtype=np.int64)
        for d, (_, pos) in enumerate(self._axis_diffs):
            col = self.index[:, d]
            key += pos[col[:, None], col[None, :]].astype(np.int64) * strides[d]
        keys, inv = np.unique(key, return_inverse=True)
        vecs = np.empty((keys.size, self.n))
        rem = keys.copy()
        for d, (uniq, _) in enumerate(self._axis_diffs):
            vecs[:, d] = uniq[rem // strides[d]]
            rem = rem % strides[d]
        vecs.setflags(write=False)
        table = inv.reshape(self.size, self.size).astype(np.int32)
        table.setflags(write=False)
        return vecs, table

    @property
    def diffs(self) -> np.ndarray:
        """The difference set {x - y : x, y in L}, sorted lexicographically."""
        return self._diff_data[0]

    @property
    def diff_table(self) -> np.ndarray:
        """``diff_table[i, j]`` is the id in :attr:`diffs` of ``x_i - x_j``."""
        return self._diff_data[1]

    @cached_property
    def _diff_lookup(self) -> dict[Point, int]:
        return {tuple(float(v) for v in row): k for k, row in enumerate(self.diffs)}

    def diff_id(self, eps: Sequence[float]) -> int | None:
        return self._diff_lookup.get(tuple(float(v) for v in eps))

    @cached_property
    def zero_diff(self) -> int:
        return int(self.diff_table[0, 0])

    # -------------------------------------------------------- sub-lattices
    def ids_in_box(self, lo: Sequence[float], hi: Sequence[float]) -> np.ndarray:
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        if lo.shape != (self.n,) or hi.shape != (self.n,):
            raise LatticeError("box corners have the wrong dimension")
        if not np.all(lo <= hi):
            raise LatticeError(f"box corners are not ordered: {tuple(lo)} !<= {tuple(hi)}")
        inside = np.all((self.coords >= lo) & (self.coords <= hi), axis=1)
        return np.flatnonzero(inside)

    def box(self, lo: Sequence[float], hi: Sequence[float]) -> "GridLattice":
        """The sub-sublattice ``{x in L : lo <= x <= hi}``."""
        ids = self.ids_in_box(lo, hi)
        if ids.size == 0:
            raise LatticeError(f"box [{tuple(lo)}, {tuple(hi)}] contains no members")
        return self.subset(ids)

    def subset(self, ids: Iterable[int]) -> "GridLattice":
        ids = np.asarray(list(ids), dtype=np.int64)
        return GridLattice(self.axes, members=[self.coords[i] for i in ids])

    def is_sublattice(self, ids: Iterable[int]) -> tuple[bool, tuple[int, int] | None]:
        """Closure of an id set under meet and join, with the first failing pair."""
        ids = np.unique(np.asarray(list(ids), dtype=np.int64))
        inside = np.zeros(self.size, dtype=bool)
        inside[ids] = True
        sub_m = self.meet_table[np.ix_(ids, ids)]
        sub_j = self.join_table[np.ix_(ids, ids)]
        bad = ~(inside[sub_m] & inside[sub_j])
        if bad.any():
            a, b = np.argwhere(bad)[0]
            return False, (int(ids[a]), int(ids[b]))
        return True, None

    def strong_set_geq_ids(self, X: Iterable[int], Y: Iterable[int]) -> bool:
        X = np.asarray(list(X), dtype=np.int64)
        Y = np.asarray(list(Y), dtype=np.int64)
        if X.size == 0 or Y.size == 0:
            return True
        in_x = np.zeros(self.size, dtype=bool)
        in_y = np.zeros(self.size, dtype=bool)
        in_x[X] = True
        in_y[Y] = True
        return bool(in_x[self.join_table[np.ix_(X, Y)]].all() and in_y[self.meet_table[np.ix_(X, Y)]].all())

    def flipped(self, dims: Iterable[int]) -> tuple["GridLattice", np.ndarray]:
        """Negate the listed coordinates.

        Always valid for a full grid or when every dimension is flipped;
        otherwise the image may fail to be a sublattice, which raises.

        Returns the new lattice and ``rows`` with ``rows[k]`` the id here of
        the member that becomes id ``k`` there.
        """
        dims = sorted(set(int(d) for d in dims))
        for d in dims:
            if not 0 <= d < self.n:
                raise LatticeError(f"no dimension {d} in a {self.n}-dimensional lattice")
        sign = np.ones(self.n)
        sign[dims] = -1.0
        axes = [(-ax[::-1] if d in dims else ax) for d, ax in enumerate(self.axes)]
        pts = self.coords * sign
        try:
            new = GridLattice(axes, members=pts)
        except LatticeError:
            # negating some but not all coordinates only preserves closure on product-like sets
            raise LatticeError(f"flipping dimensions {dims} does not give a sublattice; flip all dimensions or use a full grid") from None
        rows = np.empty(self.size, dtype=np.int64)
        rows[new.ids_of(pts)] = np.arange(self.size)
        return new, rows

    def to_config(self) -> dict:
        out: dict = {"axes": [[float(v) for v in ax] for ax in self.axes]}
        if not self.full_grid:
            out["members"] = [list(self.point(i)) for i in range(self.size)]
        return out


class ParamPoset:
    """A finite partially ordered parameter set.

    ``leq`` is either a collection of ``(a, b)`` element pairs meaning
    ``a <= b`` (reflexive pairs are added automatically) or a callable
    ``leq(a, b) -> bool``. The relation is checked to be a partial order.
    """

    def __init__(self, elements: Sequence[Hashable], leq: Iterable[tuple[Any, Any]] | Callable[[Any, Any], bool]):
        self.elements = [self._freeze(e) for e in elements]
        if not self.elements:
            raise LatticeError("parameter set is empty")
        self._pos = {}
        for k, e in enumerate(self.elements):
            if e in self._pos:
                raise LatticeError(f"duplicate parameter value {e!r}")
            self._pos[e] = k
        k = len(self.elements)
        rel = np.eye(k, dtype=bool)
        if callable(leq):
            for a in range(k):
                for b in range(k):
                    if leq(self.elements[a], self.elements[b]):
                        rel[a, b] = True
        else:
            for a, b in leq:
                rel[self.index(a), self.index(b)] = True
        for a in range(k):
            if not rel[a, a]:
                raise LatticeError("order is not reflexive")
        both = rel & rel.T
        np.fill_diagonal(both, False)
        if both.any():
            a, b = np.argwhere(both)[0]
            raise LatticeError(f"order is not antisymmetric: {self.elements[a]!r}, {self.elements[b]!r}")
        closure = (rel.astype(np.int64) @ rel.astype(np.int64)) > 0
        if (closure & ~rel).any():
            a, b = np.argwhere(closure & ~rel)[0]
            raise LatticeError(f"order is not transitive: missing {self.elements[a]!r} <= {self.elements[b]!r}")
        self.matrix = rel
        self.matrix.setflags(write=False)

    @staticmethod
    def _freeze(e):
        if isinstance(e, list):
            return tuple(ParamPoset._freeze(v) for v in e)
        return e

    @classmethod
    def chain(cls, values: Sequence[Any]) -> "ParamPoset":
        """Totally ordered parameters; values must be increasing."""
        vals = list(values)
        return cls(vals, [(vals[a], vals[b]) for a in range(len(vals)) for b in range(a, len(vals))])

    @classmethod
    def product(cls, values: Sequence[Sequence[float]]) -> "ParamPoset":
        """Vector parameters under the coordinatewise order."""
        vals = [tuple(v) for v in values]
        return cls(vals, lambda a, b: all(x <= y for x, y in zip(a, b)))

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"ParamPoset({self.elements!r})"

    def index(self, value: Any) -> int:
        try:
            return self._pos[self._freeze(value)]
        except (KeyError, TypeError):
            raise LatticeError(f"{value!r} is not in the parameter set") from None

    def element(self, i: int) -> Any:
        return self.elements[i]

    def le(self, a: int, b: int) -> bool:
        return bool(self.matrix[a, b])

    def lt(self, a: int, b: int) -> bool:
        return a != b and bool(self.matrix[a, b])

    def strict_pairs(self) -> list[tuple[int, int]]:
        """All index pairs ``(a, b)`` with ``a < b`` in the order, sorted."""
        return [(int(a), int(b)) for a, b in np.argwhere(self.matrix) if a != b]

    def reversed(self) -> "ParamPoset":
        return ParamPoset(self.elements, lambda a, b: self.le(self.index(b), self.index(a)))

    def to_config(self) -> dict:
        def enc(e):
            return list(e) if isinstance(e, tuple) else e

        return {
            "elements": [enc(e) for e in self.elements],
            "leq": [[enc(self.elements[a]), enc(self.elements[b])] for a, b in self.strict_pairs()],
        }
