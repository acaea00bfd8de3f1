# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the scans and Bellman sweeps in ``_kernels_py``.

Loop order and arithmetic mirror the numpy code exactly so both backends
return the same witnesses and bit-identical value functions.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY

cnp.import_array()

cdef int QUASI = 0
cdef int SUPER = 1


def pair_scan(const double[::1] f, const int[:, ::1] meet, const int[:, ::1] join, int mode, double tol):
    cdef Py_ssize_t m = f.shape[0]
    cdef Py_ssize_t i, j
    cdef double fx, fy, fm, fj
    cdef bint bad
    for i in range(m):
        fx = f[i]
        for j in range(m):
            fy = f[j]
            fm = f[meet[i, j]]
            fj = f[join[i, j]]
            if mode == SUPER:
                bad = fx - fm > fj - fy + tol
            else:
                bad = ((fx >= fm - tol) and not (fj >= fy - tol)) or ((fx > fm + tol) and not (fj > fy + tol))
            if bad:
                return int(i), int(j)
    return -1, -1


def scd_scan(const double[:, ::1] F, const unsigned char[:, ::1] leq, pairs, int mode, double tol):
    cdef long long[:, ::1] pr = np.ascontiguousarray(np.asarray(pairs, dtype=np.int64).reshape(-1, 2))
    cdef Py_ssize_t m = F.shape[0]
    cdef Py_ssize_t P = pr.shape[0]
    cdef Py_ssize_t i, j, p
    cdef long long a, b
    cdef double xa, ya, xb, yb
    cdef bint bad
    if P == 0 or m < 2:
        return -1, -1, -1
    if mode < 0 or mode > 5:
        raise ValueError(f"unknown mode {mode}")
    for i in range(m):
        for j in range(m):
            if i == j or not leq[i, j]:
                continue
            for p in range(P):
                a = pr[p, 0]
                b = pr[p, 1]
                xa = F[i, a]
                ya = F[j, a]
                xb = F[i, b]
                yb = F[j, b]
                if mode == 0:
                    bad = ((ya >= xa - tol) and not (yb >= xb - tol)) or ((ya > xa + tol) and not (yb > xb + tol))
                elif mode == 1:
                    bad = (ya >= xa - tol) and not (yb > xb + tol)
                elif mode == 2:
                    bad = yb - xb < ya - xa - tol
                elif mode == 3:
                    bad = not (yb - xb > ya - xa + tol)
                elif mode == 4:
                    bad = yb * xa < ya * xb * (1.0 - tol)
                else:
                    bad = not (yb * xa > ya * xb * (1.0 + tol))
                if bad:
                    return int(i), int(j), int(p)
    return -1, -1, -1


cdef void _sweep(const double[:, ::1] R, const double[::1] DV, double[::1] out) noexcept nogil:
    cdef Py_ssize_t S = R.shape[0]
    cdef Py_ssize_t A = R.shape[1]
    cdef Py_ssize_t s, a
    cdef double best, v
    for s in range(S):
        best = -INFINITY
        for a in range(A):
            v = R[s, a] + DV[a]
            if v > best:
                best = v
        out[s] = best


def bellman_max(R, V, double delta):
    cdef const double[:, ::1] Rv = np.ascontiguousarray(R, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] DV = delta * np.asarray(V, dtype=np.float64)
    out = np.empty(Rv.shape[0])
    _sweep(Rv, DV, out)
    return out


def value_iteration(R, double delta, double tol, long long max_iter, V0):
    cdef const double[:, ::1] Rv = np.ascontiguousarray(R, dtype=np.float64)
    cdef Py_ssize_t S = Rv.shape[0]
    cdef double[::1] V = np.array(V0, dtype=np.float64)
    cdef double[::1] Vn = np.empty(S)
    cdef double[::1] DV = np.empty(S)
    cdef double diff, d
    cdef long long it
    cdef Py_ssize_t s
    for s in range(S):
        DV[s] = delta * V[s]
    for it in range(1, max_iter + 1):
        with nogil:
            _sweep(Rv, DV, Vn)
            diff = 0.0
            for s in range(S):
                d = fabs(Vn[s] - V[s])
                if d > diff or d != d:
                    diff = d
                V[s] = Vn[s]
                DV[s] = delta * V[s]
        if diff <= tol:
            return np.asarray(V).copy(), int(it), True
    return np.asarray(V).copy(), int(max_iter), False
