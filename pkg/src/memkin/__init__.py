"""Kinetic model of a molecular memristor.

Screened film potentials, Marcus-type electron transfer with a switching
threshold, nucleation-limited state conversion and an N-site hopping
transport solve, orchestrated into potentiation/depression traces,
quasi-DC sweeps, Arrhenius extraction and linearity phase diagrams.
"""

from ._backend import HAS_COMPILED
from .errors import (ConfigError, ConservationError, MemkinError,
                     QuadratureError, StalledLayerError, TruncationError,
                     ValidationError)
from .experiments import (ArrheniusReport, InterfaceReport, LinearityReport,
                          PhaseDiagram, TraceResult, arrhenius_rates,
                          df_flatness, fit_arrhenius, linearity_factors,
                          phase_diagram, run_cycle, run_depression,
                          run_interface_scenario, run_potentiation,
                          synthetic_xy_map)
from .kinetics import (NucleationLine, SwitchingGrid, build_switching_grid,
                       electron_transfer_rate, nucleation_centers,
                       pulse_drive, switching_indicator, threshold_potential,
                       transfer_probability)
from .nucleation import (StateFractions, anchor_depression_centers,
                         dc_state_fractions, fraction_22,
                         fraction_22_depression, fraction_increment,
                         nucleation_population, pulsed_fractions)
from .numerics import (QuadratureSpec, e1_scaled, fermi,
                       gaussian_fermi_integral)
from .params import (ModelParams, load_params, paper_defaults,
                     serialize_params, thermal_energy)
from .quasidc import SweepSpec, dc_fractions, dc_sweep
from .screening import (PotentialProfile, fourier_coefficient,
                        potential_profile, screening_zeta, seen_fraction)
from .transport import (CouplingSet, CurrentReport, OccupationVector,
                        RateSet, closed_form_current, current,
                        mixed_couplings_dc, mixed_couplings_pulsed,
                        rate_constants, stationary_occupations)

__version__ = "0.1.0"
