"""Nucleation-limited areal population and volumetric state fractions.

Each layer converts along an arctan curve centred at its nucleation center
chi(z) with width kappa (Lorentzian half-width of dNr/dn; the FWHM of the
conversion rate is 2*kappa).  The volumetric fraction is the layer mean.
Depression mirrors the curves (1 - Nr) with the centers re-anchored so the
descent starts from the fraction reached by potentiation.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ValidationError

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class StateFractions:
    """Per-level volumetric fractions; unit sum enforced.

    Pulsed mode carries (f_22, f_31); quasi-DC mode (f_31, f_11, f_00).
    """

    mode: str                  # "pulsed" | "dc"
    values: dict

    def __post_init__(self):
        total = sum(self.values.values())
        if abs(total - 1.0) > _SUM_TOL:
            raise ValidationError(f"fractions must sum to 1, got {total!r}")
        for k, v in self.values.items():
            if not (-_SUM_TOL <= v <= 1.0 + _SUM_TOL):
                raise ValidationError(f"fraction {k} = {v} outside [0, 1]")

    def __getitem__(self, key):
        return self.values[key]


def pulsed_fractions(f_22):
    return StateFractions("pulsed", {"f_22": f_22, "f_31": 1.0 - f_22})


def dc_state_fractions(f_31, f_11, f_00):
    return StateFractions("dc", {"f_31": f_31, "f_11": f_11, "f_00": f_00})


def nucleation_population(n, chi_z, kappa):
    """Areal switched population Nr(n) = arctan((n - chi_z)/kappa)/pi + 1/2.

    Strictly increasing in n, 1/2 at the center, slope 1/(pi*kappa) there.
    """
    if not kappa > 0:
        raise ValidationError("kappa must be positive")
    return np.arctan((np.asarray(n, dtype=float) - chi_z) / kappa) / np.pi + 0.5


def fraction_22(n, chi, kappa, N_z=None):
    """Layer mean of the nucleation populations: the volumetric fraction.

    chi holds one center per layer; N_z, when given, must match its length.
    Monotone increasing in n; the complementary fraction is 1 - f_22.
    """
    chi = np.asarray(chi, dtype=float)
    if N_z is not None and chi.size != N_z:
        raise ValidationError(f"expected {N_z} centers, got {chi.size}")
    if not kappa > 0:
        raise ValidationError("kappa must be positive")
    n = np.asarray(n, dtype=float)
    vals = np.arctan((n[..., None] - chi) / kappa) / np.pi + 0.5
    return vals.mean(axis=-1)


def depression_population(n, chi_z, kappa):
    """Mirrored curve 1 - Nr for the depression branch."""
    return 1.0 - nucleation_population(n, chi_z, kappa)


def fraction_22_depression(n, chi, kappa):
    """Layer mean of the mirrored curves (descending in n)."""
    return 1.0 - fraction_22(n, chi, kappa)


def anchor_depression_centers(chi, kappa, start_fraction):
    """Shift the mirrored comb so the descent starts at start_fraction.

    Solves for the offset tau with mean(1 - Nr(0; chi - tau)) equal to
    start_fraction; the per-layer descent order is preserved.  Returns the
    shifted centers.  start_fraction at or below the comb's asymptotic
    floor yields None (nothing left to depress).
    """
    chi = np.asarray(chi, dtype=float)
    if not (0.0 <= start_fraction <= 1.0):
        raise ValidationError("start_fraction must lie in [0, 1]")

    def at_zero(tau):
        return float(fraction_22_depression(np.array(0.0), chi - tau, kappa))

    # at_zero decreases with tau: large negative tau pushes every center far
    # ahead (nothing depressed yet, ~1); large positive tau puts the comb far
    # behind (fully depressed floor, ~0)
    span = abs(chi).max() + 1e4 * kappa + 1e6
    if start_fraction <= at_zero(span):
        return None
    if start_fraction >= at_zero(-span):
        return chi + span
    tau = brentq(lambda t: at_zero(t) - start_fraction, -span, span,
                 xtol=1e-9)
    return chi - tau


def fraction_increment(f_values):
    """First differences df(n) = f(n) - f(n-1) of an ordered level sequence.

    The increments telescope: their sum equals f(last) - f(first).
    """
    f = np.asarray(f_values, dtype=float)
    if f.ndim != 1 or f.size < 2:
        raise ValidationError("need an ordered sequence of at least 2 levels")
    return np.diff(f)
