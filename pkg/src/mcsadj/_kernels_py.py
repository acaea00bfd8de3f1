"""numpy implementations of the hot kernels.

These are the reference versions; ``_kernels.pyx`` mirrors them loop for loop
and must return identical results (same witnesses, same floating-point
operations in the Bellman sweeps).
"""

from __future__ import annotations

import numpy as np

# pair_scan modes
QUASI = 0
SUPER = 1

# scd_scan modes
SCD = 0
STRICT_SCD = 1
INCREASING = 2
STRICT_INCREASING = 3
LOG_INCREASING = 4
STRICT_LOG_INCREASING = 5


def pair_scan(f, meet, join, mode, tol):
    """First ``(i, j)`` in row-major order violating (quasi-)supermodularity.

    Returns ``(-1, -1)`` when the property holds.
    """
    f = np.asarray(f, dtype=float)
    fx = f[:, None]
    fy = f[None, :]
    fm = f[meet]
    fj = f[join]
    if mode == SUPER:
        bad = fx - fm > fj - fy + tol
    else:
        weak = (fx >= fm - tol) & ~(fj >= fy - tol)
        strict = (fx > fm + tol) & ~(fj > fy + tol)
        bad = weak | strict
    hits = np.argwhere(bad)
    if hits.size == 0:
        return -1, -1
    return int(hits[0, 0]), int(hits[0, 1])


def scd_scan(F, leq, pairs, mode, tol):
    """First ``(i, j, p)`` violating a differences property.

    ``leq[i, j]`` marks ``x_i <= x_j``; ``pairs[p] = (a, b)`` are parameter
    index pairs with ``theta_a < theta_b``. Weak modes skip ``i == j``; strict
    modes also require ``x_i < x_j`` which is the same thing on a lattice.
    """
    F = np.asarray(F, dtype=float)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    m = F.shape[0]
    if pairs.shape[0] == 0 or m < 2:
        return -1, -1, -1
    comparable = np.asarray(leq, dtype=bool).copy()
    np.fill_diagonal(comparable, False)
    a = pairs[:, 0]
    b = pairs[:, 1]
    # arrays indexed [i, j, p]
    xa = F[:, None, a]
    ya = F[None, :, a]
    xb = F[:, None, b]
    yb = F[None, :, b]
    if mode == SCD:
        bad = ((ya >= xa - tol) & ~(yb >= xb - tol)) | ((ya > xa + tol) & ~(yb > xb + tol))
    elif mode == STRICT_SCD:
        bad = (ya >= xa - tol) & ~(yb > xb + tol)
    elif mode == INCREASING:
        bad = yb - xb < ya - xa - tol
    elif mode == STRICT_INCREASING:
        bad = ~(yb - xb > ya - xa + tol)
    elif mode == LOG_INCREASING:
        bad = yb * xa < ya * xb * (1.0 - tol)
    elif mode == STRICT_LOG_INCREASING:
        bad = ~(yb * xa > ya * xb * (1.0 + tol))
    else:
        raise ValueError(f"unknown mode {mode}")
    bad &= comparable[:, :, None]
    hits = np.argwhere(bad)
    if hits.size == 0:
        return -1, -1, -1
    return int(hits[0, 0]), int(hits[0, 1]), int(hits[0, 2])


def bellman_max(R, V, delta):
    """One Bellman sweep: ``max_a R[s, a] + delta * V[a]`` per row."""
    return np.max(R + delta * V[None, :], axis=1)


def value_iteration(R, delta, tol, max_iter, V0):
    """Iterate the Bellman operator until the sup-norm change is at most ``tol``.

    Returns ``(V, iterations, converged)``. Rows of ``R`` must contain at
    least one finite entry.
    """
    V = np.array(V0, dtype=float)
    DV = delta * V
    for it in range(1, max_iter + 1):
        Vn = np.max(R + DV[None, :], axis=1)
        diff = float(np.max(np.abs(Vn - V)))
        V = Vn
        DV = delta * V
        if diff <= tol:
            return V, it, True
    return V, max_iter, False
