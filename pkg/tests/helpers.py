"""Independent oracles used by the test suite.

These deliberately avoid the library's own evaluation paths: dense
trapezoid quadrature for the energy integrals and explicit time stepping
for the master equation.
"""

import numpy as np


def trapezoid_gaussian_fermi(center, spread4kT, kT, use_hole=False,
                             nodes=1_000_000):
    """Dense-trapezoid evaluation of the Gaussian x Fermi integral."""
    W = abs(center) + 6.0 * np.sqrt(spread4kT / 2.0) + 20.0 * kT
    E = np.linspace(-W, W, nodes)
    occ = 1.0 / (1.0 + np.exp(np.clip(E / kT, -700, 700)))
    w = (1.0 - occ) if use_hole else occ
    y = np.exp(-np.clip((E - center) ** 2 / spread4kT, 0, 700)) * w
    return np.trapz(y, E)


def quad_e1_scaled(x):
    """Adaptive-quadrature oracle for e^x * E1(x) via u = x + t."""
    from scipy.integrate import quad
    val, _ = quad(lambda t: np.exp(-t) / (x + t), 0.0, np.inf, limit=200)
    return val


def chain_rate_matrix(kmf, kmb, kbf, kbb, ktf, ktb, N):
    """Generator matrix of the chain master equation, states [1..N, TB]."""
    M = np.zeros((N + 1, N + 1))
    TB = N
    for i in range(N - 1):
        M[i + 1, i] += kmf
        M[i, i] -= kmf
        M[i, i + 1] += kmb
        M[i + 1, i + 1] -= kmb
    M[0, TB] += kbf
    M[TB, TB] -= kbf
    M[TB, 0] += kbb
    M[0, 0] -= kbb
    M[TB, N - 1] += ktf
    M[N - 1, N - 1] -= ktf
    M[N - 1, TB] += ktb
    M[TB, TB] -= ktb
    return M


def relax_to_steady_state(kmf, kmb, kbf, kbb, ktf, ktb, N,
                          tol=1e-13, max_steps=4_000_000):
    """Explicit time stepping of dP/dt = M P from the uniform start."""
    M = chain_rate_matrix(kmf, kmb, kbf, kbb, ktf, ktb, N)
    rate_scale = np.max(-np.diag(M))
    dt = 0.2 / rate_scale
    P = np.full(N + 1, 1.0 / (N + 1))
    for _ in range(max_steps):
        dP = M @ P
        P = P + dt * dP
        if np.max(np.abs(dP)) * dt < tol:
            break
    return P
