"""Special functions and quadrature shared by the screening and kinetics
modules: Fermi occupancy, the scaled exponential integral e^x*E1(x), and the
Gaussian x Fermi energy integral that appears in every electrode transfer
rate.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import QuadratureError, ValidationError

_EXP_CLIP = 700.0  # |argument| above this would overflow exp in float64

_EULER_GAMMA = 0.5772156649015328606


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls the Gauss-Legendre evaluation of the energy integrals.

    min_half_width_eV is a floor on the integration window half-width; the
    effective window is widened automatically to cover the Gaussian and
    Fermi tails of each integrand.
    """

    min_half_width_eV: float = 1.0
    nodes: int = 512
    rtol: float = 1e-9

    def __post_init__(self):
        if not self.min_half_width_eV > 0:
            raise ValidationError("quadrature window half-width must be > 0")
        if self.nodes < 16:
            raise ValidationError("quadrature node count must be >= 16")
        if not (0.0 < self.rtol <= 1e-4):
            raise ValidationError("quadrature rtol must be in (0, 1e-4]")


DEFAULT_QUADRATURE = QuadratureSpec()


@lru_cache(maxsize=32)
def _leggauss(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def fermi(E, kT):
    """Occupancy 1/[1 + exp(E/kT)]; saturates instead of overflowing."""
    if kT <= 0:
        raise ValidationError("kT must be positive")
    arg = np.clip(np.asarray(E, dtype=float) / kT, -_EXP_CLIP, _EXP_CLIP)
    out = 1.0 / (1.0 + np.exp(arg))
    if np.isscalar(E) or np.ndim(E) == 0:
        return float(out)
    return out


def _e1_scaled_series(x):
    # e^x * E1(x) from the ascending series of E1; accurate for x < 1
    s = -_EULER_GAMMA - np.log(x)
    term = 1.0
    for k in range(1, 30):
        term *= -x / k
        s -= term / k
        if abs(term / k) < 1e-18 * max(abs(s), 1e-300):
            break
    return np.exp(x) * s


def _e1_scaled_cf(x):
    # continued fraction e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- 9/(...))))
    f = 0.0
    for k in range(80, 0, -1):
        f = k * k / (x + 2 * k + 1 - f)
    return 1.0 / (x + 1.0 - f)


def e1_scaled(x):
    """Scaled exponential integral e^x * int_x^inf e^-u / u du for x > 0.

    Power series below x = 1, continued fraction from x = 1 up; satisfies
    the classical bracketing 1/(x+1) < result < 1/x.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise ValidationError("e1_scaled requires x > 0")
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    out = np.empty_like(xa)
    small = xa < 1.0
    out[small] = [_e1_scaled_series(v) for v in xa[small]]
    out[~small] = [_e1_scaled_cf(v) for v in xa[~small]]
    return float(out[0]) if scalar else out


def gaussian_fermi_integral(center, spread4kT, kT, use_hole=False,
                            spec=DEFAULT_QUADRATURE):
    """Integral of exp[-(E-center)^2/spread4kT] * w(E) over energy.

    center is the position of the Gaussian peak (eV); spread4kT = 4*lambda*kT
    for the relevant reorganization energy; w(E) is the Fermi occupancy when
    use_hole is False and the hole occupancy 1 - fermi(E) otherwise.

    Shifting the peak far below the Fermi level recovers the full Gaussian
    mass sqrt(pi * spread4kT); shifting it far above kills the integral.
    Raises QuadratureError when halving the node count moves the result by
    more than spec.rtol, i.e. the quadrature has not converged.
    """
    if spread4kT <= 0:
        raise ValidationError("spread4kT must be positive")
    if kT <= 0:
        raise ValidationError("kT must be positive")
    W = max(spec.min_half_width_eV,
            abs(center) + 6.0 * np.sqrt(spread4kT / 2.0) + 20.0 * kT)

    def _eval(nodes):
        x, wq = _leggauss(nodes)
        E = x * W
        gauss = np.exp(-np.clip((E - center) ** 2 / spread4kT, 0.0, _EXP_CLIP))
        occ = fermi(E, kT)
        weight = (1.0 - occ) if use_hole else occ
        return float((wq * W) @ (gauss * weight))

    full = _eval(spec.nodes)
    half = _eval(max(16, spec.nodes // 2))
    scale = max(abs(full), 1e-300)
    if abs(full - half) > spec.rtol * scale + 1e-300:
        raise QuadratureError(
            f"gaussian_fermi_integral did not converge at {spec.nodes} nodes "
            f"(rel change {abs(full - half) / scale:.2e} > rtol {spec.rtol:.1e})")
    return full
