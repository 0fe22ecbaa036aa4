"""State-fraction-weighted couplings, hop/electrode rate constants, the
stationary occupation solve on the hopping chain, and the current.

Chain topology: shared electrode reservoir (occupancy P_TB) -> site 1 ->
... -> site N -> back to the reservoir.  Forward means bottom-to-top flow,
the direction favoured by positive read bias.  The current is evaluated
from three equivalent stationary fluxes (bottom injection, interior hop,
top extraction) and their agreement is reported as a conservation check.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from ._backend import solve_chain_batched
from .constants import E_CHARGE
from .errors import ConservationError, ValidationError
from .numerics import DEFAULT_QUADRATURE, gaussian_fermi_integral

_CONSERVATION_HARD = 1e-8   # relative disagreement that signals a solver defect
_NORM_TOL = 1e-12


@dataclass(frozen=True)
class CouplingSet:
    """Effective couplings at one level or voltage, 1/s."""

    gamma_m: float
    Gamma_T: float
    Gamma_B: float

    def __post_init__(self):
        if min(self.gamma_m, self.Gamma_T, self.Gamma_B) <= 0:
            raise ValidationError("couplings must be strictly positive")


@dataclass(frozen=True)
class RateSet:
    """Forward/backward rate constants of the chain, 1/s."""

    K_m_f: float
    K_m_b: float
    K_T_f: float
    K_T_b: float
    K_B_f: float
    K_B_b: float

    def __post_init__(self):
        for name in ("K_m_f", "K_m_b", "K_T_f", "K_T_b", "K_B_f", "K_B_b"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be non-negative")


@dataclass(frozen=True)
class OccupationVector:
    """Stationary probabilities P_1..P_N plus the electrode term P_TB."""

    sites: np.ndarray
    P_TB: float

    def __post_init__(self):
        total = float(self.sites.sum() + self.P_TB)
        if abs(total - 1.0) > _NORM_TOL:
            raise ValidationError(f"occupations must sum to 1, got {total!r}")
        if self.sites.min() < -_NORM_TOL or self.P_TB < -_NORM_TOL:
            raise ValidationError("occupations must be non-negative")

    @property
    def total(self):
        return float(self.sites.sum() + self.P_TB)


@dataclass(frozen=True)
class CurrentReport:
    """Current from the three stationary flux expressions, amperes."""

    I: float              # bottom-injection expression (the reported value)
    I_interior: float     # hop flux between the last two sites
    I_top: float          # top-extraction expression
    rel_spread: float     # max pairwise disagreement relative to scale


def _weights(fractions, states, mode):
    if fractions.mode != mode:
        raise ValidationError(f"expected {mode} fractions, got {fractions.mode}")
    return [fractions[s] for s in states]


def mixed_couplings_pulsed(fractions, p):
    """Two-state weighted couplings for the pulsed branch.

    Weighted average over the ground (31) and excited (22) states with the
    supplied fractions; feeding telescoped fractions (converted volume
    since the start, base state carrying the rest) keeps the ground-level
    conductance at the pure ground-state value.
    """
    w31, w22 = (fractions["f_31"], fractions["f_22"]) if fractions.mode == "pulsed" \
        else (None, None)
    if w31 is None:
        raise ValidationError("pulsed couplings need pulsed-mode fractions")
    return CouplingSet(
        gamma_m=w31 * p.gamma_m_31 + w22 * p.gamma_m_22,
        Gamma_T=w31 * p.Gamma_T_31 + w22 * p.Gamma_T_22,
        Gamma_B=w31 * p.Gamma_B_31 + w22 * p.Gamma_B_22,
    )


def mixed_couplings_dc(fractions, p):
    """Three-state weighted couplings for the quasi-DC branch."""
    f31, f11, f00 = _weights(fractions, ("f_31", "f_11", "f_00"), "dc")
    return CouplingSet(
        gamma_m=f31 * p.gamma_m_31 + f11 * p.gamma_m_11 + f00 * p.gamma_m_00,
        Gamma_T=f31 * p.Gamma_T_31 + f11 * p.Gamma_T_11 + f00 * p.Gamma_T_00,
        Gamma_B=f31 * p.Gamma_B_31 + f11 * p.Gamma_B_11 + f00 * p.Gamma_B_00,
    )


def electrode_integrals(V_r, p, spec=DEFAULT_QUADRATURE):
    """The four electrode energy integrals at read bias V_r (eV units).

    Gaussian activation kernels of width 4*u_lambda*kT weighted by the
    electrode occupancy: electron-weighted (occupied states) for the pair
    whose kernel peaks at +u_lambda + delta_E +- a*V_r, hole-weighted for
    the pair peaking at -u_lambda + delta_E -+ a*V_r.  At zero bias the
    top-forward/bottom-backward and top-backward/bottom-forward integrands
    coincide pairwise.
    """
    kT = p.kT
    spread = 4.0 * p.u_lambda * kT
    tf = gaussian_fermi_integral(p.u_lambda + p.delta_E + p.a_T * V_r,
                                 spread, kT, use_hole=False, spec=spec)
    tb = gaussian_fermi_integral(-p.u_lambda + p.delta_E - p.a_T * V_r,
                                 spread, kT, use_hole=True, spec=spec)
    bf = gaussian_fermi_integral(-p.u_lambda + p.delta_E + p.a_B * V_r,
                                 spread, kT, use_hole=True, spec=spec)
    bb = gaussian_fermi_integral(p.u_lambda + p.delta_E + p.a_B * V_r,
                                 spread, kT, use_hole=False, spec=spec)
    return tf, tb, bf, bb


def rate_constants(c, V_r, p, spec=DEFAULT_QUADRATURE):
    """Six rate constants from the couplings at read bias V_r.

    Hop rates carry the bias exponent a_m*V_r/(eta*kT) with the exact ratio
    K_m_f/K_m_b = exp(2 a_m V_r / (eta kT)); electrode rates scale the four
    energy integrals by Gamma / sqrt(4 pi u_lambda kT).
    """
    if not np.isfinite(V_r):
        raise ValidationError("V_r must be finite")
    kT = p.kT
    x = p.a_m * V_r / (p.eta * kT)
    tf, tb, bf, bb = electrode_integrals(V_r, p, spec=spec)
    pref_T = c.Gamma_T / np.sqrt(4.0 * np.pi * p.u_lambda * kT)
    pref_B = c.Gamma_B / np.sqrt(4.0 * np.pi * p.u_lambda * kT)
    return RateSet(
        K_m_f=c.gamma_m * np.exp(x),
        K_m_b=c.gamma_m * np.exp(-x),
        K_T_f=pref_T * tf,
        K_T_b=pref_T * tb,
        K_B_f=pref_B * bf,
        K_B_b=pref_B * bb,
    )


def stationary_occupations(r, N_z):
    """Solve the stationary master equation of the chain.

    N stationarity rows (one per site) with the electrode row replaced by
    the normalization sum; solved through the bordered-tridiagonal kernel.
    """
    if min(r.K_m_f + r.K_m_b, r.K_B_f + r.K_B_b, r.K_T_f + r.K_T_b) <= 0:
        raise ValidationError("every link needs at least one positive rate")
    occ = solve_chain_batched(
        np.array([r.K_m_f]), np.array([r.K_m_b]),
        np.array([r.K_B_f]), np.array([r.K_B_b]),
        np.array([r.K_T_f]), np.array([r.K_T_b]), N_z)[0]
    sites = np.clip(occ[:N_z], 0.0, None)
    return OccupationVector(sites=sites, P_TB=float(occ[N_z]))


def current(r, occ):
    """Current through the device from the stationary occupations.

    I = e (K_B_f P_TB - K_B_b P_1); the interior-hop and top-extraction
    expressions must agree with it at stationarity and are returned in the
    report.  Disagreement beyond 1e-8 relative signals a solver defect.
    """
    P = occ.sites
    i_bot = E_CHARGE * (r.K_B_f * occ.P_TB - r.K_B_b * P[0])
    i_int = E_CHARGE * (r.K_m_f * P[-2] - r.K_m_b * P[-1])
    i_top = E_CHARGE * (r.K_T_f * P[-1] - r.K_T_b * occ.P_TB)
    scale = max(abs(i_bot), abs(i_int), abs(i_top),
                E_CHARGE * max(r.K_m_f, r.K_B_f, r.K_T_f) * 1e-18)
    spread = max(abs(i_bot - i_int), abs(i_bot - i_top), abs(i_int - i_top))
    rel = spread / scale
    if rel > _CONSERVATION_HARD:
        raise ConservationError(
            f"current expressions disagree by {rel:.2e} relative")
    return CurrentReport(I=i_bot, I_interior=i_int, I_top=i_top,
                         rel_spread=rel)


def closed_form_current(c, V_r, p, occ):
    """Interior current in the closed form e*gamma_m*(e^x P_{N-1} - e^-x P_N).

    Algebraically identical to the interior-hop flux; kept as a cross-check
    rather than an independent path.
    """
    x = p.a_m * V_r / (p.eta * p.kT)
    P = occ.sites
    return E_CHARGE * c.gamma_m * (np.exp(x) * P[-2] - np.exp(-x) * P[-1])


def batched_chain_currents(gamma_m, Gamma_T, Gamma_B, V_r, p,
                           spec=DEFAULT_QUADRATURE):
    """Currents and conservation data for per-level coupling arrays.

    The four electrode integrals depend only on V_r, so a full trace costs
    four quadratures plus one batched chain solve.  Returns (currents,
    occupations, max_rel_spread, max_norm_error).
    """
    gamma_m = np.asarray(gamma_m, dtype=float)
    kT = p.kT
    x = p.a_m * V_r / (p.eta * kT)
    tf, tb, bf, bb = electrode_integrals(V_r, p, spec=spec)
    pref = 1.0 / np.sqrt(4.0 * np.pi * p.u_lambda * kT)
    kmf = gamma_m * np.exp(x)
    kmb = gamma_m * np.exp(-x)
    ktf = np.asarray(Gamma_T) * pref * tf
    ktb = np.asarray(Gamma_T) * pref * tb
    kbf = np.asarray(Gamma_B) * pref * bf
    kbb = np.asarray(Gamma_B) * pref * bb
    occ = solve_chain_batched(kmf, kmb, kbf, kbb, ktf, ktb, p.N_z)
    P_tb = occ[:, p.N_z]
    i_bot = E_CHARGE * (kbf * P_tb - kbb * occ[:, 0])
    i_int = E_CHARGE * (kmf * occ[:, p.N_z - 2] - kmb * occ[:, p.N_z - 1])
    i_top = E_CHARGE * (ktf * occ[:, p.N_z - 1] - ktb * P_tb)
    scale = np.maximum.reduce([np.abs(i_bot), np.abs(i_int), np.abs(i_top)])
    scale = np.maximum(scale, E_CHARGE * np.maximum(kmf, kbf) * 1e-18)
    spread = np.maximum.reduce([np.abs(i_bot - i_int), np.abs(i_bot - i_top),
                                np.abs(i_int - i_top)])
    rel = spread / scale
    max_rel = float(rel.max()) if rel.size else 0.0
    if max_rel > _CONSERVATION_HARD:
        raise ConservationError(
            f"current expressions disagree by {max_rel:.2e} relative")
    norm_err = float(np.abs(occ.sum(axis=1) - 1.0).max()) if occ.size else 0.0
    if occ.size and occ.min() < -_NORM_TOL:
        warnings.warn("negative occupation beyond tolerance from the solver")
    return i_bot, occ, max_rel, norm_err
