"""End-to-end experiment drivers.

Pipeline for a pulsed trace: switching grid (potential profile + transfer
threshold) -> nucleation-center line -> per-level converted volume ->
state-weighted couplings -> rate constants at the read bias -> stationary
occupations -> current.  The converted volume w(n) telescopes the
per-pulse fraction increments from zero, so the ground level carries the
pure ground-state couplings and the dynamic range is set by the coupling
contrast.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from ._backend import staircase_fraction
from .constants import K_B
from .errors import StalledLayerError, ValidationError
from .kinetics import (build_switching_grid, nucleation_centers, pulse_drive,
                       threshold_potential)
from .nucleation import anchor_depression_centers, fraction_22_depression
from .params import params_dict
from .transport import batched_chain_currents

_ARRHENIUS_PAIRS = ((1, 2), (5001, 5002), (16001, 16002))
_PAIR_AGREEMENT_TOL = 0.05


@dataclass(frozen=True)
class TraceResult:
    """A computed pulse (or cycle) trace with its provenance."""

    mode: str                      # potentiation | depression | cycle
    levels: np.ndarray             # pulse index per sample
    currents: np.ndarray           # A
    f_22: np.ndarray               # converted-volume weight per sample
    f_31: np.ndarray
    params: dict
    conservation: dict
    segments: tuple = ()           # ((mode, i_start, i_stop), ...) index ranges
    line: tuple = (None, None)     # fitted (a1, a2)

    def __post_init__(self):
        n = len(self.levels)
        if not (len(self.currents) == len(self.f_22) == len(self.f_31) == n):
            raise ValidationError("trace sequences must share one length")
        if not np.all(np.isfinite(self.currents)):
            raise ValidationError("trace currents must be finite")


@dataclass(frozen=True)
class LinearityReport:
    """Linearity factors: 0 means every increment equals the mean slope."""

    nu_P: float | None = None
    mu_P: float | None = None
    n_max_P: int | None = None
    nu_D: float | None = None
    mu_D: float | None = None
    n_max_D: int | None = None
    degenerate: bool = False       # flat trace: mean slope zero, nu undefined


@dataclass(frozen=True)
class InterfaceReport:
    """Outcome of the degraded-interface scenario."""

    interface_share: float
    stalled_layers: tuple
    nu_ratio: float | None         # nu_P(degraded) / nu_P(baseline)
    df_flatness: float             # max |df/median - 1| over middle levels
    baseline_df_flatness: float
    trace: TraceResult | None
    baseline: TraceResult


@dataclass(frozen=True)
class ArrheniusReport:
    """Arrhenius fit of the level-transition rates."""

    E_a: float                     # eV
    attempt_frequency: float       # 1/s
    fit_residual: float            # max |ln R - fit| over points
    temperatures: tuple
    pairs: tuple
    pair_rates: dict               # T -> tuple of rates, 1/s
    max_pair_spread: float         # worst relative spread across pairs
    zeroth_order_ok: bool


@dataclass(frozen=True)
class PhaseDiagram:
    """Normalized linearity factors over (nucleation rate, amplitude)."""

    rates_per_us: np.ndarray
    amplitudes_V: np.ndarray
    nu_P_norm: np.ndarray          # shape (n_rates, n_amps)
    nu_D_norm: np.ndarray
    nu_P_raw: np.ndarray
    nu_D_raw: np.ndarray
    failures: tuple = ()           # ((mode, i_rate, i_amp, message), ...)


def _trace_levels(n_max, stride):
    lv = np.arange(0, n_max + 1, max(1, int(stride)), dtype=np.int64)
    if lv[-1] != n_max:
        lv = np.append(lv, n_max)
    return lv


def potentiation_line(p, V_write=None, require_all=True):
    """Switching grid and fitted nucleation line at the write amplitude."""
    V_m = p.a_m * (p.V_write_P if V_write is None else V_write)
    grid = build_switching_grid(p, V_m=V_m)
    line = nucleation_centers(grid, require_all=require_all)
    return grid, line


def _centers(p, line):
    if p.a1 is not None and p.a2 is not None:
        return p.a1 * np.arange(1, p.N_z + 1, dtype=float) + p.a2
    return line.centers(p)


def converted_volume(levels, centers, kappa):
    """Telescoped conversion w(n) = f(n) - f(0) of the staircase mean."""
    lv = np.asarray(levels, dtype=float)
    f = staircase_fraction(np.concatenate(([0.0], lv)), centers, kappa)
    return np.clip(f[1:] - f[0], 0.0, 1.0)


def _trace_from_w(p, levels, w, mode, segments=(), line=(None, None)):
    gamma = p.gamma_m_31 + (p.gamma_m_22 - p.gamma_m_31) * w
    gt = p.Gamma_T_31 + (p.Gamma_T_22 - p.Gamma_T_31) * w
    gb = p.Gamma_B_31 + (p.Gamma_B_22 - p.Gamma_B_31) * w
    I, occ, rel, nerr = batched_chain_currents(gamma, gt, gb, p.V_read, p)
    cons = {"current_rel_spread": rel, "occupation_norm_error": nerr,
            "fraction_sum_error": float(np.abs((w + (1.0 - w)) - 1.0).max())}
    return TraceResult(mode=mode, levels=np.asarray(levels),
                       currents=I, f_22=w, f_31=1.0 - w,
                       params=params_dict(p), conservation=cons,
                       segments=tuple(segments), line=line)


def run_potentiation(p, n_max=None, stride=1, require_all=True):
    """Potentiation trace over levels 0..n_max at the configured amplitude."""
    n_max = p.n_max_P if n_max is None else int(n_max)
    grid, line = potentiation_line(p, require_all=require_all)
    centers = _centers(p, line)
    levels = _trace_levels(n_max, stride)
    w = converted_volume(levels, centers, p.kappa_P)
    return _trace_from_w(p, levels, w, "potentiation",
                         segments=(("potentiation", 0, len(levels) - 1),),
                         line=(line.a1, line.a2))


def _depression_volume(p, start_fraction, levels, centers):
    anchored = anchor_depression_centers(centers, p.kappa_D, start_fraction)
    if anchored is None:
        return np.zeros(len(levels))
    return np.clip(fraction_22_depression(np.asarray(levels, dtype=float),
                                          anchored, p.kappa_D), 0.0, 1.0)


def run_depression(p, start_fraction=None, n_pulses=None, stride=1):
    """Depression trace: mirrored nucleation descent from start_fraction.

    The mirrored comb reuses the potentiation-fitted centers, re-anchored
    so the descent starts at the supplied fraction (default: the fraction
    a full potentiation reaches).
    """
    n_pulses = p.n_max_D if n_pulses is None else int(n_pulses)
    _, line = potentiation_line(p)
    centers = _centers(p, line)
    if start_fraction is None:
        w_full = converted_volume(np.array([p.n_max_P]), centers, p.kappa_P)
        start_fraction = float(w_full[0])
    if not (0.0 <= start_fraction <= 1.0):
        raise ValidationError("start_fraction must lie in [0, 1]")
    levels = _trace_levels(n_pulses, stride)
    w = _depression_volume(p, start_fraction, levels, centers)
    return _trace_from_w(p, levels, w, "depression",
                         segments=(("depression", 0, len(levels) - 1),),
                         line=(line.a1, line.a2))


def run_cycle(p, n_stop, stride=1):
    """Potentiation to n_stop followed by depression over the same budget."""
    n_stop = int(n_stop)
    if not (0 < n_stop <= p.n_max_P):
        raise ValidationError("n_stop must lie in (0, n_max_P]")
    _, line = potentiation_line(p)
    centers = _centers(p, line)
    lv_p = _trace_levels(n_stop, stride)
    w_p = converted_volume(lv_p, centers, p.kappa_P)
    lv_d = _trace_levels(n_stop, stride)
    w_d = _depression_volume(p, float(w_p[-1]), lv_d, centers)
    levels = np.concatenate([lv_p, n_stop + lv_d[1:]])
    w = np.concatenate([w_p, w_d[1:]])
    i_mid = len(lv_p) - 1
    return _trace_from_w(
        p, levels, w, "cycle",
        segments=(("potentiation", 0, i_mid),
                  ("depression", i_mid, len(levels) - 1)),
        line=(line.a1, line.a2))


def _segment_factors(levels, currents, sign):
    """Linearity factor of one segment; sign -1 flips for depression."""
    n = np.asarray(levels, dtype=float)
    I = np.asarray(currents, dtype=float)
    span = n[-1] - n[0]
    if span <= 0 or len(n) < 2:
        return None, None, True
    mu = sign * (I[-1] - I[0]) / span
    if mu == 0.0:
        return None, 0.0, True
    steps = np.diff(n)
    incr = sign * np.diff(I) / steps
    nu = float(np.sum(steps * (incr - mu) ** 2) / mu)
    return nu, float(mu), False


def linearity_factors(trace):
    """Linearity factors of a trace (per segment for cycles).

    At unit stride the potentiation factor is exactly
    sum_n [I(n) - I(n-1) - mu]^2 / mu with mu = [I(n_max) - I(first)]/n_max;
    at larger strides the per-level increments are estimated from the
    strided differences (documented interpolation).  A flat segment has no
    defined factor and is reported as degenerate.
    """
    segs = trace.segments or ((trace.mode, 0, len(trace.levels) - 1),)
    out = {"degenerate": False}
    for mode, i0, i1 in segs:
        lv = trace.levels[i0:i1 + 1]
        cu = trace.currents[i0:i1 + 1]
        sign = -1.0 if mode == "depression" else 1.0
        nu, mu, degen = _segment_factors(lv, cu, sign)
        key = "D" if mode == "depression" else "P"
        out[f"nu_{key}"] = nu
        out[f"mu_{key}"] = mu
        out[f"n_max_{key}"] = int(lv[-1] - lv[0])
        out["degenerate"] = out["degenerate"] or degen
    return LinearityReport(**out)


def df_flatness(trace, window=0.9):
    """Max relative deviation of the per-level fraction increment from its
    median over the middle `window` share of levels."""
    lv = np.asarray(trace.levels, dtype=float)
    w = np.asarray(trace.f_22, dtype=float)
    df = np.diff(w) / np.diff(lv)
    mid = 0.5 * (lv[1:] + lv[:-1])
    lo = lv[0] + (1.0 - window) / 2.0 * (lv[-1] - lv[0])
    hi = lv[-1] - (1.0 - window) / 2.0 * (lv[-1] - lv[0])
    sel = (mid >= lo) & (mid <= hi)
    dfm = df[sel]
    med = np.median(dfm)
    if med == 0.0:
        return math.inf
    return float(np.max(np.abs(dfm / med - 1.0)))


def run_interface_scenario(p, interface_share=0.6, stride=1):
    """Rerun the pipeline with a degraded interface voltage split.

    Stalled layers are an acceptable outcome here: they are excluded from
    the line fit and reported instead of raised.  With every layer stalled
    no trace is produced and the report carries the full stall list.
    """
    baseline = run_potentiation(p, stride=stride)
    nu_base = linearity_factors(baseline).nu_P
    base_flat = df_flatness(baseline)
    p_int = p.with_interface_share(interface_share)
    grid = build_switching_grid(p_int)
    stalled = tuple(int(x) for x in grid.stalled)
    try:
        line = nucleation_centers(grid, require_all=False)
    except StalledLayerError:
        return InterfaceReport(interface_share=interface_share,
                               stalled_layers=stalled, nu_ratio=None,
                               df_flatness=math.inf,
                               baseline_df_flatness=base_flat,
                               trace=None, baseline=baseline)
    centers = _centers(p_int, line)
    levels = _trace_levels(p_int.n_max_P, stride)
    w = converted_volume(levels, centers, p_int.kappa_P)
    trace = _trace_from_w(p_int, levels, w, "potentiation",
                          segments=(("potentiation", 0, len(levels) - 1),),
                          line=(line.a1, line.a2))
    nu_int = linearity_factors(trace).nu_P
    ratio = None if (nu_base in (None, 0.0) or nu_int is None) \
        else nu_int / nu_base
    return InterfaceReport(interface_share=interface_share,
                           stalled_layers=stalled, nu_ratio=ratio,
                           df_flatness=df_flatness(trace),
                           baseline_df_flatness=base_flat,
                           trace=trace, baseline=baseline)


# -- temperature dependence ---------------------------------------------


def _staircase_at_T(p, T):
    """Nucleation centers and width at temperature T (reference amplitude).

    The conversion drive scales Arrhenius-like with temperature, diluting
    both the center schedule and the width; the switching threshold also
    drifts with kT, which the grid rebuild captures.
    """
    V_m = p.a_m * p.V_write_P
    grid = build_switching_grid(p, V_m=V_m, T=T)
    line = nucleation_centers(grid)
    centers = _centers(p, line)
    kT = K_B * T
    kT_ref = K_B * p.drive_T_ref
    g_T = math.exp(-p.nucleation_barrier * (1.0 / kT - 1.0 / kT_ref))
    return centers, p.kappa_P / g_T


def _match_level(target_f, centers, kappa, hint):
    lo, hi = -1e7, max(1e7, hint * 10.0)
    f = lambda m: float(staircase_fraction(np.array([m]), centers, kappa)[0]) \
        - target_f
    return brentq(f, lo, hi, xtol=1e-7)


def fit_arrhenius(rates, temperatures):
    """Least-squares line through ln(rate) vs 1/(k_B T).

    Returns (E_a, attempt_frequency, max residual of ln-rate).
    """
    T = np.asarray(temperatures, dtype=float)
    x = 1.0 / (K_B * T)
    y = np.log(np.asarray(rates, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.max(np.abs(y - (slope * x + intercept))))
    return -slope, math.exp(intercept), resid


def arrhenius_rates(p, temperatures=None, pairs=_ARRHENIUS_PAIRS):
    """Temperature dependence of the level-to-level transition rates.

    For each temperature, the rate of the n -> n+1 transition is the
    inverse time the pulse train needs to move the conversion between the
    two reference fraction values: R = 1 / (pulses-per-level * t_pulse).
    Rates for well-separated pairs coincide when the kinetics are
    zeroth-order; their Arrhenius fit yields the shared activation energy
    and attempt frequency.
    """
    if temperatures is None:
        temperatures = (294.0, 270.0, 250.0, 230.0, 210.0, 190.0)
    temps = [float(t) for t in temperatures]
    if len(temps) < 3:
        raise ValidationError("need at least 3 temperatures")
    if any(t < 160.0 or t > 294.0 for t in temps):
        raise ValidationError("temperatures must lie within [160, 294] K")
    centers0, kappa0 = _staircase_at_T(p, p.drive_T_ref)
    f_targets = []
    for n0, n1 in pairs:
        f0 = float(staircase_fraction(np.array([float(n0)]), centers0, kappa0)[0])
        f1 = float(staircase_fraction(np.array([float(n1)]), centers0, kappa0)[0])
        f_targets.append((f0, f1))
    t_pulse_s = p.t_pulse_P * 1e-9
    pair_rates = {}
    worst = 0.0
    for T in temps:
        cT, kT_ = _staircase_at_T(p, T)
        rates = []
        for (n0, n1), (f0, f1) in zip(pairs, f_targets):
            hint = max(abs(n1), 1.0) * kappa0 / min(kT_, kappa0)
            m0 = _match_level(f0, cT, kT_, hint)
            m1 = _match_level(f1, cT, kT_, hint)
            rates.append(1.0 / ((m1 - m0) * t_pulse_s))
        pair_rates[T] = tuple(rates)
        spread = (max(rates) - min(rates)) / float(np.mean(rates))
        worst = max(worst, spread)
    mean_rates = [float(np.mean(pair_rates[T])) for T in temps]
    E_a, nu_att, resid = fit_arrhenius(mean_rates, temps)
    return ArrheniusReport(E_a=E_a, attempt_frequency=nu_att,
                           fit_residual=resid, temperatures=tuple(temps),
                           pairs=tuple(pairs), pair_rates=pair_rates,
                           max_pair_spread=worst,
                           zeroth_order_ok=worst <= _PAIR_AGREEMENT_TOL)


# -- phase diagram --------------------------------------------------------


def _kappa_from_rate(rate_per_us, t_pulse_ns):
    return 1.0 / (rate_per_us * t_pulse_ns * 1e-3)


def _nu_or_fail(fn):
    try:
        report = linearity_factors(fn())
        nu = report.nu_P if report.nu_P is not None else report.nu_D
        if nu is None:
            return math.inf, "degenerate trace"
        return nu, None
    except (StalledLayerError, ValidationError) as exc:
        return math.inf, str(exc)


def phase_diagram(p, rates_per_us=None, amplitudes_V=None, stride=10,
                  threads=1):
    """Normalized linearity factors over the (nucleation rate, amplitude)
    grid.

    Potentiation cells rerun the full pipeline (the amplitude moves the
    film voltage, hence the switching schedule and the fitted line, and the
    rate sets the width); depression cells depress from the default
    potentiation endpoint with the cell's width, the mirrored line being
    amplitude-independent.  Per-cell failures are recorded, not raised;
    each panel is normalized by its grid minimum.
    """
    if rates_per_us is None:
        rates_per_us = np.round(np.linspace(0.012, 0.06, 9), 6)
    if amplitudes_V is None:
        amplitudes_V = np.round(np.linspace(0.80, 1.24, 12), 6)
    rates = np.asarray(rates_per_us, dtype=float)
    amps = np.asarray(amplitudes_V, dtype=float)
    if np.any(rates <= 0) or np.any(amps <= 0):
        raise ValidationError("grid axes must be positive")
    shape = (rates.size, amps.size)
    nu_P = np.full(shape, math.inf)
    nu_D = np.full(shape, math.inf)
    failures = []

    _, line0 = potentiation_line(p)
    centers0 = _centers(p, line0)
    w_start = float(converted_volume(np.array([p.n_max_P]), centers0,
                                     p.kappa_P)[0])
    lv_d = _trace_levels(p.n_max_D, stride)

    def pot_cell(idx):
        i, j = idx
        kap = _kappa_from_rate(rates[i], p.t_pulse_P)
        cell = replace(p, kappa_P=kap, V_write_P=float(amps[j]))
        return _nu_or_fail(lambda: run_potentiation(cell, stride=stride))

    def dep_cell(idx):
        i, j = idx
        kap = _kappa_from_rate(rates[i], p.t_pulse_D)
        cell = replace(p, kappa_D=kap, V_write_D=float(amps[j]))
        w = _depression_volume(cell, w_start, lv_d, centers0)
        return _nu_or_fail(
            lambda: _trace_from_w(cell, lv_d, w, "depression",
                                  segments=(("depression", 0, len(lv_d) - 1),)))

    idxs = [(i, j) for i in range(rates.size) for j in range(amps.size)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            pot_vals = list(ex.map(pot_cell, idxs))
            dep_vals = list(ex.map(dep_cell, idxs))
    else:
        pot_vals = [pot_cell(ix) for ix in idxs]
        dep_vals = [dep_cell(ix) for ix in idxs]
    for (i, j), (vP, eP), (vD, eD) in zip(idxs, pot_vals, dep_vals):
        nu_P[i, j] = vP
        nu_D[i, j] = vD
        if eP:
            failures.append(("potentiation", i, j, eP))
        if eD:
            failures.append(("depression", i, j, eD))

    def norm(a):
        finite = a[np.isfinite(a)]
        if finite.size == 0:
            return np.full_like(a, math.inf)
        return a / finite.min()

    return PhaseDiagram(rates_per_us=rates, amplitudes_V=amps,
                        nu_P_norm=norm(nu_P), nu_D_norm=norm(nu_D),
                        nu_P_raw=nu_P, nu_D_raw=nu_D,
                        failures=tuple(failures))


# -- synthetic in-plane map ------------------------------------------------


def synthetic_xy_map(level, p, seed=0, size=256, eps_jitter=0.0):
    """Deterministic in-plane occupancy map of the visible (top) layer.

    The switched area fraction equals the layer's normalized conversion at
    the requested level: 0 at level 0, 1 at the pulse budget.  Clusters are
    seeded and grown with a seeded generator, so identical arguments give
    bit-identical maps.  eps_jitter adds seeded spread to the number of
    nucleation sites (visual roughness only).
    """
    if not (0 <= level <= p.n_max_P):
        raise ValidationError("level outside the trace range")
    _, line = potentiation_line(p)
    centers = _centers(p, line)
    chi_top = centers[0]

    def conv(n):
        return float(np.arctan((n - chi_top) / p.kappa_P) / np.pi + 0.5)

    lo, hi = conv(0), conv(p.n_max_P)
    q = (conv(level) - lo) / (hi - lo)
    q = min(max(q, 0.0), 1.0)
    target = int(round(q * size * size))
    grid = np.zeros((size, size), dtype=np.int8)
    if target == 0:
        return grid
    if target == size * size:
        return np.ones((size, size), dtype=np.int8)
    rng = np.random.default_rng(seed)
    n_sites = max(1, int(round(12 * (1.0 + eps_jitter * rng.standard_normal()))))
    seeds = rng.integers(0, size, size=(n_sites, 2))
    frontier = []
    count = 0
    for y, x in seeds:
        if grid[y, x] == 0:
            grid[y, x] = 1
            count += 1
            frontier.append((int(y), int(x)))
        if count >= target:
            return grid
    while count < target and frontier:
        k = int(rng.integers(0, len(frontier)))
        y, x = frontier[k]
        nbrs = [(y - 1, x), (y + 1, x), (y, x - 1), (y, x + 1)]
        rng.shuffle(nbrs)
        grown = False
        for ny, nx in nbrs:
            if 0 <= ny < size and 0 <= nx < size and grid[ny, nx] == 0:
                grid[ny, nx] = 1
                count += 1
                frontier.append((ny, nx))
                grown = True
                break
        if not grown:
            frontier.pop(k)
    flat = np.flatnonzero(grid.ravel() == 0)
    while count < target:
        pick = flat[int(rng.integers(0, flat.size))]
        if grid.ravel()[pick] == 0:
            grid.ravel()[pick] = 1
            count += 1
    return grid
