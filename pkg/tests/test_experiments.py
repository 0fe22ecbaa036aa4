import numpy as np
import pytest
from dataclasses import replace

from memkin import (TraceResult, ValidationError, arrhenius_rates,
                    df_flatness, fit_arrhenius, linearity_factors,
                    phase_diagram, run_cycle, run_depression,
                    run_interface_scenario, run_potentiation,
                    synthetic_xy_map)
from memkin.params import params_dict


@pytest.fixture(scope="module")
def pot(defaults):
    return run_potentiation(defaults)


@pytest.fixture(scope="module")
def dep(defaults):
    return run_depression(defaults)


class TestPotentiation:
    def test_shapes_and_invariants(self, pot, defaults):
        assert len(pot.levels) == defaults.n_max_P + 1
        assert np.all(np.isfinite(pot.currents))
        assert np.all(pot.currents > 0)
        assert np.all(pot.f_22 + pot.f_31 == 1.0)
        assert np.all(np.diff(pot.f_22) >= 0)

    def test_ground_level_pure_ground_state(self, pot):
        assert pot.f_22[0] == 0.0
        assert pot.f_31[0] == 1.0

    def test_conservation_bundle(self, pot):
        assert pot.conservation["current_rel_spread"] < 1e-10
        assert pot.conservation["occupation_norm_error"] < 1e-12
        assert pot.conservation["fraction_sum_error"] < 1e-12

    def test_stride_consistency(self, pot, defaults):
        strided = run_potentiation(defaults, stride=10)
        sel = np.isin(pot.levels, strided.levels)
        assert np.allclose(pot.currents[sel], strided.currents, rtol=1e-12)

    def test_line_slope_positive(self, pot):
        a1, a2 = pot.line
        assert a1 > 0


class TestDepression:
    def test_monotone_descent(self, dep):
        assert np.all(np.diff(dep.currents) <= 1e-30)

    def test_full_descent_ends_near_ground(self, dep):
        assert dep.f_22[-1] < 0.02

    def test_slope_symmetry(self, pot, dep):
        lo, hi = 825, 15675
        n = np.arange(lo, hi + 1)
        sP = np.polyfit(n, pot.currents[lo:hi + 1], 1)[0]
        sD = np.polyfit(n, dep.currents[lo:hi + 1], 1)[0]
        assert 0.9 <= abs(sD) / sP <= 1.1

    def test_zero_start_is_flat(self, defaults):
        tr = run_depression(defaults, start_fraction=0.0, stride=50)
        assert np.allclose(tr.currents, tr.currents[0], rtol=1e-12)
        assert np.all(tr.f_22 == 0.0)

    def test_start_fraction_domain(self, defaults):
        with pytest.raises(ValidationError):
            run_depression(defaults, start_fraction=1.5)


class TestCycle:
    def test_composition_at_full_budget(self, defaults, pot, dep):
        tr = run_cycle(defaults, defaults.n_max_P, stride=25)
        mid = [i for m, i, j in tr.segments if m == "potentiation"][0]
        i_mid = tr.segments[0][2]
        # potentiation half matches the standalone potentiation run
        sel = np.isin(pot.levels, tr.levels[:i_mid + 1])
        assert np.allclose(pot.currents[sel], tr.currents[:i_mid + 1],
                           rtol=1e-12)
        # depression half starts where potentiation stopped
        assert tr.f_22[i_mid] == pytest.approx(pot.f_22[-1], abs=1e-7)

    def test_two_point_segments_zero_factor(self, defaults):
        tr = run_cycle(defaults, 1)
        rep = linearity_factors(tr)
        assert rep.nu_P == pytest.approx(0.0, abs=1e-30)

    def test_early_reversal_segments_stay_linear(self, defaults, pot, dep):
        tr = run_cycle(defaults, 8000)
        rep = linearity_factors(tr)
        full_P = linearity_factors(pot).nu_P
        full_D = linearity_factors(dep).nu_D
        assert rep.nu_P <= 2.0 * full_P
        assert rep.nu_D <= 2.0 * full_D

    def test_n_stop_domain(self, defaults):
        with pytest.raises(ValidationError):
            run_cycle(defaults, 0)
        with pytest.raises(ValidationError):
            run_cycle(defaults, defaults.n_max_P + 1)


class TestLinearityFactors:
    def _trace(self, levels, currents):
        levels = np.asarray(levels)
        currents = np.asarray(currents, dtype=float)
        n = len(levels)
        return TraceResult(mode="potentiation", levels=levels,
                           currents=currents, f_22=np.zeros(n),
                           f_31=np.ones(n), params={}, conservation={},
                           segments=(("potentiation", 0, n - 1),))

    def test_hand_arithmetic(self):
        rep = linearity_factors(self._trace([0, 1, 2, 3], [0.0, 1.0, 2.0, 4.0]))
        assert rep.mu_P == pytest.approx(4.0 / 3.0, rel=1e-12)
        assert rep.nu_P == pytest.approx(0.5, rel=1e-12)

    def test_exactly_linear_is_zero(self):
        n = np.arange(0, 100)
        rep = linearity_factors(self._trace(n, 3.0 * n + 1.0))
        assert rep.nu_P == pytest.approx(0.0, abs=1e-20)

    def test_homogeneous_degree_one(self):
        n = np.arange(0, 50)
        I = 2.0 * n + 0.1 * np.sin(n / 3.0)
        r1 = linearity_factors(self._trace(n, I))
        r2 = linearity_factors(self._trace(n, 7.0 * I))
        assert r2.nu_P == pytest.approx(7.0 * r1.nu_P, rel=1e-12)

    def test_flat_trace_degenerate(self):
        rep = linearity_factors(self._trace([0, 1, 2], [1.0, 1.0, 1.0]))
        assert rep.degenerate
        assert rep.nu_P is None


class TestDfFlatness:
    def test_zeroth_order_regime(self, pot):
        # per-pulse conversion constant within 5% over the middle levels
        assert df_flatness(pot) <= 0.05


class TestInterfaceScenario:
    def test_degraded_interface(self, defaults):
        rep = run_interface_scenario(defaults, 0.6, stride=1)
        assert rep.nu_ratio is not None and rep.nu_ratio >= 10.0
        assert rep.df_flatness > 0.05         # zeroth-order disrupted
        assert rep.baseline_df_flatness <= 0.05
        assert len(rep.stalled_layers) >= 1   # reported, not raised

    def test_extreme_interface_all_stalled(self, defaults):
        rep = run_interface_scenario(defaults, 0.99, stride=100)
        assert rep.trace is None
        assert len(rep.stalled_layers) >= defaults.N_z - 1


class TestArrhenius:
    def test_synthetic_exact_recovery(self):
        # noiseless rates generated at the measured barrier refit exactly
        E_a, nu = 0.134, 2.0e9
        temps = [294.0, 260.0, 230.0, 200.0, 170.0]
        from memkin.constants import K_B
        rates = [nu * np.exp(-E_a / (K_B * T)) for T in temps]
        fit_Ea, fit_nu, resid = fit_arrhenius(rates, temps)
        assert fit_Ea == pytest.approx(E_a, abs=1e-6)
        assert fit_nu == pytest.approx(nu, rel=1e-6)
        assert resid < 1e-12

    def test_defaults_activation_energy(self, defaults):
        rep = arrhenius_rates(defaults)
        assert 0.125 <= rep.E_a <= 0.140
        assert rep.zeroth_order_ok

    def test_pair_rates_overlap(self, defaults):
        rep = arrhenius_rates(defaults)
        for T, rates in rep.pair_rates.items():
            spread = (max(rates) - min(rates)) / np.mean(rates)
            assert spread <= 0.05

    def test_temperature_domain(self, defaults):
        with pytest.raises(ValidationError):
            arrhenius_rates(defaults, temperatures=[294.0, 250.0])
        with pytest.raises(ValidationError):
            arrhenius_rates(defaults, temperatures=[310.0, 250.0, 200.0])


class TestPhaseDiagram:
    @pytest.fixture(scope="class")
    def small(self, defaults):
        return phase_diagram(defaults,
                             rates_per_us=[0.016, 0.023, 0.03],
                             amplitudes_V=[0.9, 1.0, 1.22],
                             stride=50)

    def test_normalization(self, small):
        assert np.nanmin(small.nu_P_norm) == pytest.approx(1.0)
        assert np.nanmin(small.nu_D_norm) == pytest.approx(1.0)

    def test_default_cell_in_basin(self, small):
        # the shipped operating point sits in the flat region
        i = list(small.rates_per_us).index(0.023)
        j = list(small.amplitudes_V).index(0.9)
        assert small.nu_P_norm[i, j] <= 2.0

    def test_overdrive_cell_far_out(self, small):
        j = list(small.amplitudes_V).index(1.22)
        assert np.all(small.nu_P_norm[:, j] >= 10.0)

    def test_reproducible_bit_for_bit(self, defaults, small):
        again = phase_diagram(defaults,
                              rates_per_us=[0.016, 0.023, 0.03],
                              amplitudes_V=[0.9, 1.0, 1.22],
                              stride=50)
        assert np.array_equal(again.nu_P_norm, small.nu_P_norm)
        assert np.array_equal(again.nu_D_norm, small.nu_D_norm)

    def test_threads_match_serial(self, defaults, small):
        threaded = phase_diagram(defaults,
                                 rates_per_us=[0.016, 0.023, 0.03],
                                 amplitudes_V=[0.9, 1.0, 1.22],
                                 stride=50, threads=4)
        assert np.array_equal(threaded.nu_P_norm, small.nu_P_norm)

    def test_grid_validation(self, defaults):
        with pytest.raises(ValidationError):
            phase_diagram(defaults, rates_per_us=[-0.01],
                          amplitudes_V=[0.9])


class TestSyntheticMap:
    def test_ground_level_empty(self, defaults):
        grid = synthetic_xy_map(0, defaults, seed=1, size=64)
        assert grid.sum() == 0

    def test_full_budget_full_grid(self, defaults):
        grid = synthetic_xy_map(defaults.n_max_P, defaults, seed=1, size=64)
        assert grid.sum() == 64 * 64

    def test_deterministic(self, defaults):
        a = synthetic_xy_map(5000, defaults, seed=9, size=64)
        b = synthetic_xy_map(5000, defaults, seed=9, size=64)
        assert np.array_equal(a, b)

    def test_mean_matches_target(self, defaults):
        grid = synthetic_xy_map(8000, defaults, seed=2, size=128)
        # mean agrees with the normalized top-layer conversion to within
        # one grid cell
        from memkin.experiments import potentiation_line, _centers
        _, line = potentiation_line(defaults)
        chi_top = _centers(defaults, line)[0]

        def conv(n):
            return float(np.arctan((n - chi_top) / defaults.kappa_P)
                         / np.pi + 0.5)

        q = (conv(8000) - conv(0)) / (conv(defaults.n_max_P) - conv(0))
        assert abs(grid.mean() - q) <= 1.0 / 128

    def test_level_domain(self, defaults):
        with pytest.raises(ValidationError):
            synthetic_xy_map(-5, defaults)


class TestTraceResult:
    def test_length_mismatch_rejected(self, defaults):
        with pytest.raises(ValidationError):
            TraceResult(mode="potentiation", levels=np.arange(3),
                        currents=np.ones(2), f_22=np.zeros(3),
                        f_31=np.ones(3), params={}, conservation={})

    def test_params_snapshot_attached(self, pot, defaults):
        assert pot.params == params_dict(defaults)
