"""Quasi-DC (steady-state) current-voltage sweep model.

Each measured voltage point dwells long enough for the film to relax
thermodynamically, so the state populations follow the voltage directly: a
double-logistic crossover sends the ground state through the intermediate
to the fully oxidized state at the two threshold voltages, and the
resulting three-state couplings feed the same transport solve as the
pulsed branch.  Forward sweeps only; the relaxed model has no hysteresis
to offer a reverse branch.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .nucleation import dc_state_fractions
from .numerics import DEFAULT_QUADRATURE
from .transport import batched_chain_currents, mixed_couplings_dc


@dataclass(frozen=True)
class SweepSpec:
    """Voltage grid of a quasi-DC sweep; dwell time is metadata only."""

    V_start: float = 0.05
    V_stop: float = 3.0
    V_step: float = 0.01
    dwell_ms: float = 50.0

    def __post_init__(self):
        if not self.V_step > 0:
            raise ValidationError("V_step must be positive")
        if not self.V_start < self.V_stop:
            raise ValidationError(
                "V_start must be below V_stop (reverse sweeps are unmodeled)")

    def voltages(self):
        n = int(np.floor((self.V_stop - self.V_start) / self.V_step + 1e-9))
        return self.V_start + self.V_step * np.arange(n + 1)


def _logistic(x):
    return 1.0 / (1.0 + np.exp(-np.clip(x, -700.0, 700.0)))


def dc_fractions(V, p):
    """Three-state fractions at a steady voltage.

    s1 switches the ground state off around V1, s2 converts the
    intermediate around V2: f_31 = 1 - s1, f_11 = s1 (1 - s2),
    f_00 = s1 s2; the sum is 1 by construction.
    """
    if not p.w_dc > 0:
        raise ValidationError("w_dc must be positive")
    s1 = float(_logistic((V - p.V1) / p.w_dc))
    s2 = float(_logistic((V - p.V2) / p.w_dc))
    return dc_state_fractions(f_31=1.0 - s1, f_11=s1 * (1.0 - s2),
                              f_00=s1 * s2)


def dc_sweep(spec, p, quad=DEFAULT_QUADRATURE):
    """Current-voltage trace over the sweep grid.

    Per voltage: fractions -> three-state couplings -> rate constants at
    that bias -> stationary solve -> current.  Returns (V, I, fractions,
    conservation) where fractions is the (nV, 3) array of (f_31, f_11,
    f_00) and conservation the worst relative current disagreement.
    """
    V = spec.voltages()
    fr = np.empty((V.size, 3))
    gam = np.empty(V.size)
    gT = np.empty(V.size)
    gB = np.empty(V.size)
    for i, v in enumerate(V):
        f = dc_fractions(float(v), p)
        fr[i] = (f["f_31"], f["f_11"], f["f_00"])
        c = mixed_couplings_dc(f, p)
        gam[i], gT[i], gB[i] = c.gamma_m, c.Gamma_T, c.Gamma_B
    # electrode integrals depend on V, so solve voltage by voltage
    I = np.empty(V.size)
    worst_rel = 0.0
    worst_norm = 0.0
    for i, v in enumerate(V):
        try:
            ii, _, rel, nerr = batched_chain_currents(
                gam[i:i + 1], gT[i:i + 1], gB[i:i + 1], float(v), p, spec=quad)
        except Exception as exc:
            raise type(exc)(f"{exc} (at V = {float(v):.4f} V)") from exc
        I[i] = ii[0]
        worst_rel = max(worst_rel, rel)
        worst_norm = max(worst_norm, nerr)
    return V, I, fr, {"current_rel_spread": worst_rel,
                      "occupation_norm_error": worst_norm}
