"""Electron-transfer kinetics of the write process: Marcus-type transfer
rate, transfer probability, the binary switching indicator theta(z, n), and
extraction of the nucleation-center line from the switching grid.

Layer convention: layers are indexed by depth 1..N_z from the biased
electrode at z = L, because that is the order in which they become
switchable (the potential is deepest next to that contact).  Layer ell
spans physical positions [L - ell*dz, L - (ell-1)*dz].
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .constants import HBAR, K_B
from .errors import StalledLayerError, ValidationError
from .numerics import DEFAULT_QUADRATURE, gaussian_fermi_integral
from .screening import potential_profile, screening_zeta, seen_fraction

_FEASIBLE_GUARD = 1e9  # level-index bound when inverting the screening law


def coupling_rate_prefactor(p):
    """gamma_DA = (2 pi / hbar) H_DA^2, the molecular-transformation rate, 1/s."""
    return 2.0 * np.pi / HBAR * p.H_DA ** 2


def mhc_probability(center_energy, p, spec=DEFAULT_QUADRATURE):
    """Transfer probability for a Gaussian activation kernel at the given
    driving energy: the transfer integral normalized by the full Gaussian
    mass.  Strictly increasing in center_energy from 0 to 1, equal to 1/2
    at zero driving.
    """
    kT = p.kT
    spread = 4.0 * p.E_lambda * kT
    val = gaussian_fermi_integral(-center_energy, spread, kT, use_hole=False,
                                  spec=spec)
    return val / np.sqrt(np.pi * spread)


def electron_transfer_rate(z_nm, n, p, spec=DEFAULT_QUADRATURE, V_m=None):
    """Transfer rate at position z and level n under the write bias, 1/s.

    k = gamma_DA / sqrt(4 pi E_lambda kT) * integral of the Gaussian kernel
    centred at -(E_lambda + dG0 - e*phi(z, n)) against the Fermi occupancy.
    The potential phi is negative under positive write bias, so -e*phi adds
    to the driving force; layers at deeper potential transfer faster.
    """
    if V_m is None:
        V_m = p.a_m * p.V_write_P
    prof = potential_profile(n, V_m, p)
    phi = float(np.interp(z_nm, prof.z_nm, prof.phi_V))
    center = p.E_lambda + p.delta_G0 - phi  # eV; -e*phi with phi in volts
    kT = p.kT
    spread = 4.0 * p.E_lambda * kT
    integral = gaussian_fermi_integral(-center, spread, kT, use_hole=False,
                                       spec=spec)
    return coupling_rate_prefactor(p) / np.sqrt(4.0 * np.pi * p.E_lambda * kT) \
        * integral


def transfer_probability(z_nm, n, p, spec=DEFAULT_QUADRATURE, V_m=None):
    """Probability of transfer within one molecular-transformation time.

    k_ET normalized by gamma_DA; independent of H_DA because the prefactor
    cancels.  Values above 1 indicate parameters outside the perturbative
    regime and are clamped with a warning.
    """
    if coupling_rate_prefactor(p) <= 0:
        raise ValidationError("transfer probability undefined for H_DA = 0")
    P = electron_transfer_rate(z_nm, n, p, spec=spec, V_m=V_m) \
        / coupling_rate_prefactor(p)
    if P > 1.0:
        warnings.warn(f"transfer probability {P:.3g} > 1; parameters outside "
                      "the perturbative regime", UserWarning)
        P = 1.0
    return P


def switching_indicator(P, epsilon):
    """1 when the transfer probability reaches the threshold, else 0."""
    if not (0.0 <= P <= 1.0):
        raise ValidationError("P must lie in [0, 1]")
    if not (0.0 < epsilon < 1.0):
        raise ValidationError("epsilon must lie in (0, 1)")
    return 1 if P >= epsilon else 0


def threshold_potential(p, T=None, spec=DEFAULT_QUADRATURE):
    """Potential magnitude phi_eps at which the transfer probability equals
    epsilon (V).  theta(z, n) = 1 is equivalent to -phi(z, n) >= phi_eps
    because the probability is strictly monotone in the driving energy.
    """
    kT = K_B * T if T is not None else p.kT
    spread = 4.0 * p.E_lambda * kT

    def prob(c):
        return gaussian_fermi_integral(-c, spread, kT, spec=spec) \
            / np.sqrt(np.pi * spread) - p.epsilon

    lo, hi = -2.0, 2.0
    c_eps = brentq(prob, lo, hi, xtol=1e-15)
    phi_eps = c_eps - (p.E_lambda + p.delta_G0)
    if phi_eps <= 0:
        raise ValidationError(
            "epsilon threshold is met at zero bias; every layer would be "
            "switched from the start")
    return phi_eps


def pulse_drive(p, V_m=None, T=None):
    """Per-pulse conversion drive g relative to the reference operating point.

    Product of an Arrhenius ion-relaxation factor, a threshold-schedule
    normalization that keeps the nucleation timetable stiff inside the
    operating window, and two knees: an overdrive acceleration above
    drive_v_sat and a sub-threshold collapse below drive_v_floor.  g = 1 at
    the reference amplitude and temperature.
    """
    if V_m is None:
        V_m = p.a_m * p.V_write_P
    if T is None:
        T = p.T
    if V_m <= p.drive_phi_scale:
        return 0.0
    kT = K_B * T
    kT_ref = K_B * p.drive_T_ref
    arrh = np.exp(-p.nucleation_barrier * (1.0 / kT - 1.0 / kT_ref))
    schedule = (np.log(p.drive_v_ref / p.drive_phi_scale)
                / np.log(V_m / p.drive_phi_scale))
    sat = np.exp(max(0.0, V_m - p.drive_v_sat) / p.drive_w_sat)
    floor = np.exp(-max(0.0, p.drive_v_floor - V_m) / p.drive_w_floor)
    return float(arrh * schedule * sat * floor)


@dataclass(frozen=True)
class SwitchingGrid:
    """Switching feasibility over (layer depth, level).

    first_passage[ell-1] is the first level at which layer ell can switch
    (may exceed the pulse budget when nucleation arrives late); stalled
    layers (threshold unreachable at any level) are marked with -1.
    theta(horizon) materializes the boolean indicator on a level grid.
    """

    first_passage: np.ndarray   # int64, -1 for stalled
    layers: np.ndarray          # 1..N_z depth index
    phi_eps: float              # V
    epsilon: float
    V_m: float
    drive: float

    @property
    def stalled(self):
        return self.layers[self.first_passage < 0]

    def theta(self, horizon):
        """Boolean theta[n, ell-1] for n = 0..horizon (0/1 entries)."""
        n = np.arange(horizon + 1)[:, None]
        fp = self.first_passage[None, :].astype(float)
        fp = np.where(fp < 0, np.inf, fp)
        return (n >= fp).astype(np.int8)


def layer_positions(p):
    """Relative positions u = z/L of the layer centers, depth-ordered.

    Layer ell (depth ell from the z = L electrode) has center
    u = 1 - (ell - 1/2)/N_z; the profile value there equals the mean of the
    two enclosing boundary samples up to the sub-layer curvature, and the
    switching front is computed from these centers.
    """
    ell = np.arange(1, p.N_z + 1)
    return 1.0 - (ell - 0.5) / p.N_z


def build_switching_grid(p, V_m=None, T=None):
    """Construct the switching grid for a write amplitude.

    Uses the monotone-threshold equivalence: layer ell switches at the
    first level n where the screening has relaxed enough that the local
    potential magnitude V_m * seen_fraction exceeds phi_eps.  Because the
    profile deepens monotonically with the screening parameter, the first
    passage is the (dilated) inversion of the screening law at the
    crossing value; layers whose asymptotic potential u*V_m never reaches
    phi_eps are stalled.
    """
    if V_m is None:
        V_m = p.a_m * p.V_write_P
    if T is None:
        T = p.T
    phi_eps = threshold_potential(p, T=T)
    g = pulse_drive(p, V_m=V_m, T=T)
    u = layer_positions(p)
    fp = np.full(p.N_z, -1, dtype=np.int64)
    if V_m > 0 and g > 0:
        rho = phi_eps / V_m
        zeta0 = screening_zeta(0.0, p)
        for i, ui in enumerate(u):
            if rho >= ui:
                continue  # asymptotically unreachable: stalled
            if seen_fraction(ui, zeta0, p) >= rho:
                fp[i] = 0
                continue
            # crossing screening value, then invert the screening law
            z_cross = brentq(lambda z: seen_fraction(ui, z, p) - rho,
                             zeta0, 1e4, xtol=1e-14, rtol=8.9e-16)
            n_cross = brentq(
                lambda n: screening_zeta(n, p) - z_cross,
                0.0, _FEASIBLE_GUARD, xtol=1e-9)
            fp[i] = int(np.ceil(n_cross / g))
    return SwitchingGrid(first_passage=fp,
                         layers=np.arange(1, p.N_z + 1),
                         phi_eps=phi_eps, epsilon=p.epsilon,
                         V_m=V_m, drive=g)


@dataclass(frozen=True)
class NucleationLine:
    """Least-squares line chi(ell) = a1*ell + a2 through the first passages."""

    a1: float
    a2: float
    chi_raw: np.ndarray
    layers: np.ndarray

    def centers(self, p):
        """Per-layer curve centers per the configured source."""
        if p.chi_source == "raw":
            return self.chi_raw.astype(float)
        return self.a1 * self.layers + self.a2


def nucleation_centers(grid, require_all=True):
    """Fit the nucleation-center line from a switching grid.

    Returns the fit together with the raw first-passage values.  Stalled
    layers raise StalledLayerError when require_all is set; otherwise they
    are excluded from the fit (the caller reports them).
    """
    fp = grid.first_passage
    ok = fp >= 0
    if require_all and not np.all(ok):
        raise StalledLayerError(
            grid.layers[~ok],
            hint=f"film potential at depth never reaches phi_eps = "
                 f"{grid.phi_eps * 1e3:.2f} mV; check interface fractions")
    if ok.sum() < 2:
        raise StalledLayerError(
            grid.layers[~ok], hint="fewer than two switchable layers")
    ll = grid.layers[ok].astype(float)
    A = np.vstack([ll, np.ones(ll.size)]).T
    (a1, a2), *_ = np.linalg.lstsq(A, fp[ok].astype(float), rcond=None)
    return NucleationLine(a1=float(a1), a2=float(a2),
                          chi_raw=fp.copy(), layers=grid.layers.copy())
