"""Pure-numpy fallback implementations of the hot kernels.

The steady-state solver exploits the bordered-tridiagonal structure of the
hopping chain: with the electrode occupancy as parameter, the site block is
tridiagonal with constant off-diagonals, so one vectorized Thomas sweep per
batch solves every level at once.  The compiled extension in _kernels.pyx
implements the same algorithms with C loops.
"""

import numpy as np

COMPILED = False


def solve_chain_batched(kmf, kmb, kbf, kbb, ktf, ktb, n_sites):
    """Stationary occupations of the hopping chain for a batch of rate sets.

    Rate arrays are 1-D over the batch; returns occ with shape
    (batch, n_sites + 1): sites 1..N then the shared electrode term.
    The site block is solved against the electrode occupancy by the Thomas
    algorithm (diagonally dominant M-matrix, stable without pivoting), one
    iterative-refinement pass tightens the residual, and normalization
    fixes the electrode term.
    """
    kmf = np.asarray(kmf, dtype=float)
    batch = kmf.shape[0]
    N = int(n_sites)
    if N < 2:
        raise ValueError("need at least 2 sites")

    diag = np.empty((N, batch))
    diag[0] = -(kbb + kmf)
    for i in range(1, N - 1):
        diag[i] = -(kmf + kmb)
    diag[N - 1] = -(kmb + ktf)
    rhs = np.zeros((N, batch))
    rhs[0] = -kbf
    rhs[N - 1] -= ktb   # -= so N == 2 accumulates both endpoint terms

    def thomas(r):
        cp = np.empty((N - 1, batch))
        dp = np.empty((N, batch))
        cp[0] = kmb / diag[0]
        dp[0] = r[0] / diag[0]
        for i in range(1, N):
            denom = diag[i] - kmf * cp[i - 1]
            if i < N - 1:
                cp[i] = kmb / denom
            dp[i] = (r[i] - kmf * dp[i - 1]) / denom
        v = np.empty((N, batch))
        v[N - 1] = dp[N - 1]
        for i in range(N - 2, -1, -1):
            v[i] = dp[i] - cp[i] * v[i + 1]
        return v

    v = thomas(rhs)

    # one refinement pass against the exact tridiagonal residual
    resid = rhs - diag * v
    resid[0] -= kmb * v[1]
    resid[N - 1] -= kmf * v[N - 2]
    if N > 2:
        resid[1:N - 1] -= kmf * v[0:N - 2] + kmb * v[2:N]
    v += thomas(resid)

    p_tb = 1.0 / (1.0 + v.sum(axis=0))
    occ = np.empty((batch, N + 1))
    occ[:, :N] = (v * p_tb).T
    occ[:, N] = p_tb
    return occ


def staircase_fraction(levels, centers, kappa):
    """Mean arctan staircase over the layer centers at the given levels."""
    lv = np.asarray(levels, dtype=float)
    c = np.asarray(centers, dtype=float)
    return (np.arctan((lv[:, None] - c[None, :]) / kappa) / np.pi + 0.5).mean(axis=1)
