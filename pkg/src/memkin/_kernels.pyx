# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: batched bordered-tridiagonal steady-state solve and the
arctan staircase accumulation.  Mirrors _kernels_py exactly; selected at
import by _backend when available.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport atan, M_PI

COMPILED = True


def solve_chain_batched(kmf, kmb, kbf, kbb, ktf, ktb, n_sites):
    """See _kernels_py.solve_chain_batched."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] amf = np.ascontiguousarray(kmf, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] amb = np.ascontiguousarray(kmb, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] abf = np.ascontiguousarray(kbf, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] abb = np.ascontiguousarray(kbb, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] atf = np.ascontiguousarray(ktf, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] atb = np.ascontiguousarray(ktb, dtype=np.float64)
    cdef Py_ssize_t batch = amf.shape[0]
    cdef int N = int(n_sites)
    if N < 2:
        raise ValueError("need at least 2 sites")
    cdef cnp.ndarray[cnp.float64_t, ndim=2] occ = np.empty((batch, N + 1), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] diag = np.empty(N, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rhs = np.empty(N, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cp = np.empty(N, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dp = np.empty(N, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = np.empty(N, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] resid = np.empty(N, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dv = np.empty(N, dtype=np.float64)
    cdef Py_ssize_t b
    cdef int i
    cdef double f_m, b_m, denom, s, ptb

    for b in range(batch):
        f_m = amf[b]
        b_m = amb[b]
        diag[0] = -(abb[b] + f_m)
        for i in range(1, N - 1):
            diag[i] = -(f_m + b_m)
        diag[N - 1] = -(b_m + atf[b])
        for i in range(N):
            rhs[i] = 0.0
        rhs[0] = -abf[b]
        rhs[N - 1] -= atb[b]

        # forward sweep
        cp[0] = b_m / diag[0]
        dp[0] = rhs[0] / diag[0]
        for i in range(1, N):
            denom = diag[i] - f_m * cp[i - 1]
            if i < N - 1:
                cp[i] = b_m / denom
            dp[i] = (rhs[i] - f_m * dp[i - 1]) / denom
        v[N - 1] = dp[N - 1]
        for i in range(N - 2, -1, -1):
            v[i] = dp[i] - cp[i] * v[i + 1]

        # one refinement pass
        for i in range(N):
            resid[i] = rhs[i] - diag[i] * v[i]
        resid[0] -= b_m * v[1]
        resid[N - 1] -= f_m * v[N - 2]
        for i in range(1, N - 1):
            resid[i] -= f_m * v[i - 1] + b_m * v[i + 1]
        dp[0] = resid[0] / diag[0]
        for i in range(1, N):
            denom = diag[i] - f_m * cp[i - 1]
            dp[i] = (resid[i] - f_m * dp[i - 1]) / denom
        dv[N - 1] = dp[N - 1]
        for i in range(N - 2, -1, -1):
            dv[i] = dp[i] - cp[i] * dv[i + 1]
        s = 0.0
        for i in range(N):
            v[i] += dv[i]
            s += v[i]
        ptb = 1.0 / (1.0 + s)
        for i in range(N):
            occ[b, i] = v[i] * ptb
        occ[b, N] = ptb
    return occ


def staircase_fraction(levels, centers, kappa):
    """See _kernels_py.staircase_fraction."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lv = np.ascontiguousarray(levels, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cc = np.ascontiguousarray(centers, dtype=np.float64)
    cdef Py_ssize_t M = lv.shape[0]
    cdef Py_ssize_t K = cc.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(M, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double kap = float(kappa)
    cdef double acc
    for i in range(M):
        acc = 0.0
        for j in range(K):
            acc += atan((lv[i] - cc[j]) / kap) / M_PI + 0.5
        out[i] = acc / K
    return out
