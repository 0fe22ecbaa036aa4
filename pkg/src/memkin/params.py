"""Model parameters, validation, config parsing and the shipped default set.

Units: energies in eV, lengths in nm, pulse widths in ns, voltages in V,
couplings (gamma_*, Gamma_*) in 1/s, temperatures in K.  kappa_* and the
nucleation line coefficients a1/a2 are in pulse counts.

The default set below mixes experimental operating conditions (film
geometry, temperatures, pulse amplitudes/widths/counts, quasi-DC
thresholds) with fitted calibration values (couplings, energies, screening
coefficients, drive-law constants); CONFIG.md tags each key accordingly.
"""

import math
import warnings
from dataclasses import dataclass, fields, replace

from .constants import K_B
from .errors import ConfigError, ValidationError

_SUM_TOL = 1e-12

# config keys holding strings rather than numbers
_STR_FIELDS = {"chi_source"}
# optional float fields where an unset value is stored as None
_OPTIONAL_FIELDS = {"a1", "a2"}
_INT_FIELDS = {"N_z", "n_max_P", "n_max_D"}
_BOOL_FIELDS = {"allow_coupling_disorder"}


@dataclass(frozen=True)
class ModelParams:
    """Complete parameter set of the kinetic memristor model.

    Immutable after validation; safe to share across parallel evaluations.
    """

    # intermolecular couplings per redox state, 1/s
    gamma_m_31: float = 1.0e9
    gamma_m_22: float = 2.0e13
    gamma_m_11: float = 5.0e10
    gamma_m_00: float = 2.5e13
    # top-electrode couplings per state, 1/s
    Gamma_T_31: float = 4.0e11
    Gamma_T_22: float = 8.0e15
    Gamma_T_11: float = 2.0e13
    Gamma_T_00: float = 1.0e16
    # bottom-electrode couplings per state, 1/s
    Gamma_B_31: float = 4.0e11
    Gamma_B_22: float = 8.0e15
    Gamma_B_11: float = 2.0e13
    Gamma_B_00: float = 1.0e16
    # voltage-division fractions (top interface, bottom interface, film)
    a_T: float = 0.05
    a_B: float = 0.05
    a_m: float = 0.90
    # energies, eV
    delta_E: float = -0.15     # hopping energy gain
    u_lambda: float = 0.30     # interfacial reorganization energy
    E_lambda: float = 0.20     # counter-ion reorganization energy
    delta_G0: float = -0.192   # free energy of the ground->excited transition
    H_DA: float = 0.01         # donor-acceptor transfer integral
    # dimensionless fitting parameters
    eta: float = 280.0         # bias-division ideality in the hop rates
    epsilon: float = 0.56      # switching-indicator threshold, in (0, 1)
    sigma: float = 0.03        # molecular radius / film thickness
    # geometry and temperature
    L: float = 60.0            # film thickness, nm
    N_z: int = 30              # hopping layers
    T: float = 294.0           # K
    # screening-law coefficients: zeta(n) = b1*n + b2 + c1*exp(c2*n)
    b1: float = 3.693550125495821e-07
    b2: float = 0.0038657467546032776
    c1: float = 6.857553173794542e-09
    c2: float = 0.0008725136130767436
    # nucleation widths (Lorentzian half-width of dNr/dn; FWHM is 2*kappa)
    kappa_P: float = 540.0
    kappa_D: float = 340.0
    # optional overrides of the fitted nucleation-center line chi = a1*z + a2
    a1: float | None = None
    a2: float | None = None
    # write/read pulse programme
    V_write_P: float = 0.9     # V
    t_pulse_P: float = 80.0    # ns
    V_write_D: float = 0.75    # V
    t_pulse_D: float = 65.0    # ns
    V_read: float = 0.2        # V
    n_max_P: int = 16500
    n_max_D: int = 16500
    # quasi-DC transition thresholds and logistic width, V
    V1: float = 2.0
    V2: float = 2.76
    w_dc: float = 0.02
    # per-pulse drive law (Arrhenius barrier + operating-window knees)
    nucleation_barrier: float = 0.132   # eV
    drive_T_ref: float = 294.0          # K
    drive_v_ref: float = 0.81           # V across the film at reference
    drive_phi_scale: float = 0.008640957091817801  # V, threshold scale
    drive_v_sat: float = 0.95           # V, overdrive knee
    drive_w_sat: float = 0.045          # V
    drive_v_floor: float = 0.62         # V, sub-threshold knee
    drive_w_floor: float = 0.22         # V
    # which nucleation centers feed the population curves
    chi_source: str = "fitted"          # "fitted" | "raw"
    # demote the coupling-ordering violation to a warning
    allow_coupling_disorder: bool = False

    def __post_init__(self):
        validate_params(self)

    # -- derived quantities ------------------------------------------------

    @property
    def kT(self):
        """Thermal energy at the operating temperature, eV."""
        return thermal_energy(self.T)

    @property
    def attempt_frequency(self):
        """Arrhenius attempt frequency of the per-level transition rate, 1/s.

        Defined so that 1/(kappa_P * t_pulse_P) equals
        attempt_frequency * exp(-nucleation_barrier / kT) at drive_T_ref.
        """
        kT_ref = K_B * self.drive_T_ref
        base = 1.0 / (self.kappa_P * self.t_pulse_P * 1e-9)
        return base * math.exp(self.nucleation_barrier / kT_ref)

    def with_interface_share(self, share):
        """Copy with a_T + a_B = share split evenly and a_m = 1 - share."""
        return replace(self, a_T=share / 2.0, a_B=share / 2.0, a_m=1.0 - share)


def thermal_energy(T):
    """k_B * T in eV; rejects non-positive temperatures."""
    if not T > 0:
        raise ValidationError(f"temperature must be positive, got {T}")
    return K_B * T


def validate_params(p):
    """Raise ValidationError on any violated invariant.

    The coupling-ordering check (gamma_m_00 >= gamma_m_22 > gamma_m_11 >
    gamma_m_31 > 0) downgrades to a warning when allow_coupling_disorder
    is set.
    """
    frac_sum = p.a_T + p.a_B + p.a_m
    if abs(frac_sum - 1.0) > _SUM_TOL:
        if frac_sum > 1.0 + _SUM_TOL:
            raise ValidationError(
                f"voltage fractions exceed 1 (a_T + a_B + a_m = {frac_sum!r})")
        raise ValidationError(
            f"voltage fractions must sum to 1, got {frac_sum!r}")
    for name in ("a_T", "a_B", "a_m"):
        v = getattr(p, name)
        if not (0.0 <= v <= 1.0):
            raise ValidationError(f"{name} must lie in [0, 1], got {v}")
    if p.N_z < 2:
        raise ValidationError("N_z must be at least 2")
    if not p.L > 0:
        raise ValidationError("film thickness L must be positive")
    if not p.T > 0:
        raise ValidationError("temperature T must be positive")
    if not (p.kappa_P > 0 and p.kappa_D > 0):
        raise ValidationError("nucleation widths kappa_P, kappa_D must be positive")
    if not (0.0 < p.epsilon < 1.0):
        raise ValidationError("epsilon must lie strictly inside (0, 1)")
    if not p.sigma > 0:
        raise ValidationError("sigma must be positive")
    if not (p.u_lambda > 0 and p.E_lambda > 0):
        raise ValidationError("reorganization energies must be positive")
    if not p.eta > 0:
        raise ValidationError("eta must be positive")
    if not p.H_DA >= 0:
        raise ValidationError("H_DA must be non-negative")
    for name in ("t_pulse_P", "t_pulse_D"):
        if not getattr(p, name) > 0:
            raise ValidationError(f"{name} must be positive")
    if p.n_max_P < 1 or p.n_max_D < 1:
        raise ValidationError("pulse counts must be at least 1")
    if not p.w_dc > 0:
        raise ValidationError("w_dc must be positive")
    if p.chi_source not in ("fitted", "raw"):
        raise ValidationError("chi_source must be 'fitted' or 'raw'")
    for name in ("drive_w_sat", "drive_w_floor", "drive_v_ref",
                 "drive_phi_scale", "drive_T_ref"):
        if not getattr(p, name) > 0:
            raise ValidationError(f"{name} must be positive")
    couplings = [getattr(p, f.name) for f in fields(p)
                 if f.name.startswith(("gamma_m_", "Gamma_T_", "Gamma_B_"))]
    if any(c <= 0 for c in couplings):
        raise ValidationError("all coupling constants must be positive")
    ordered = (p.gamma_m_00 >= p.gamma_m_22 > p.gamma_m_11 > p.gamma_m_31 > 0)
    if not ordered:
        msg = ("coupling ordering gamma_m_00 >= gamma_m_22 > gamma_m_11 > "
               "gamma_m_31 > 0 violated")
        if p.allow_coupling_disorder:
            warnings.warn(msg)
        else:
            raise ValidationError(msg)


def paper_defaults():
    """The shipped calibration; every experiment starts from this set."""
    return ModelParams()


def _parse_value(key, raw, line_no):
    if key in _STR_FIELDS:
        return raw
    if key in _BOOL_FIELDS:
        low = raw.lower()
        if low in ("true", "1", "yes"):
            return True
        if low in ("false", "0", "no"):
            return False
        raise ConfigError(f"expected a boolean for {key!r}, got {raw!r}", line_no)
    if key in _OPTIONAL_FIELDS and raw.lower() in ("none", "nan"):
        return None
    try:
        if key in _INT_FIELDS:
            return int(raw)
        return float(raw)
    except ValueError:
        raise ConfigError(f"expected a number for {key!r}, got {raw!r}", line_no)


def load_params(source):
    """Parse `key = value` config text into a validated ModelParams.

    One pair per line, '#' starts a comment, keys are case-sensitive and
    must match the ModelParams field names.  Unspecified keys fall back to
    the shipped defaults.  Raises ConfigError with the offending line
    number on parse problems and ValidationError on invariant violations.
    """
    known = {f.name for f in fields(ModelParams)}
    overrides = {}
    for line_no, line in enumerate(source.splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"expected 'key = value', got {text!r}", line_no)
        key, _, raw = text.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in known:
            raise ConfigError(f"unknown parameter {key!r}", line_no)
        if not raw:
            raise ConfigError(f"missing value for {key!r}", line_no)
        overrides[key] = _parse_value(key, raw, line_no)
    return replace(paper_defaults(), **overrides)


def serialize_params(p):
    """Render a ModelParams back into the config grammar (round-trips)."""
    lines = []
    for f in fields(p):
        v = getattr(p, f.name)
        if v is None:
            lines.append(f"{f.name} = none")
        elif isinstance(v, bool):
            lines.append(f"{f.name} = {'true' if v else 'false'}")
        elif isinstance(v, int):
            lines.append(f"{f.name} = {v}")
        elif isinstance(v, str):
            lines.append(f"{f.name} = {v}")
        else:
            lines.append(f"{f.name} = {format(v, '.17g')}")
    return "\n".join(lines) + "\n"


def params_dict(p):
    """JSON-ready snapshot of a parameter set."""
    out = {}
    for f in fields(p):
        v = getattr(p, f.name)
        out[f.name] = v
    return out
