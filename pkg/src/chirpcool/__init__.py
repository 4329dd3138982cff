"""chirpcool: pulsed cooling of a mechanical mirror in linearized cavity
optomechanics with a chirped (sech/tanh) coupling pulse.

Propagates the 4x4 second-moment matrix of the fluctuation operators,
reconstructs the physical drive realizing the pulse, validates against
the closed-form Bloch solution in the rotating-wave regime, and runs
residual-phonon studies and pulse-parameter sweeps.
"""

from .bloch import (BlochState, bloch_analytic, bloch_from_covariance,
                    bloch_integrate, rwa_phonon)
from .config import RunConfig, dump_config, parse_config
from .covariance import (build_m_matrix, initial_covariance,
                         linearization_check, noise_matrix, observables,
                         observables_series, propagate_covariance,
                         propagate_via_green)
from .errors import ChirpcoolError, ConfigError, NumericalAbortError
from .experiments import (SweepResult, final_phonon, heating_estimate,
                          heating_tail, optimize_beta, sideband_limit,
                          sweep_area_deviation, sweep_beta, sweep_detuning)
from .io import emit_sweep, emit_timeseries, load_sweep
from .model import (MeanFieldTrajectory, PulseParams, SystemParams,
                    chirp_amplitude, chirp_phase, chirp_phase_rate,
                    drive_reconstruct, mean_field_solve, optimal_chi0)
from .numerics import TimeGrid, cumulative_trapezoid, rk4_integrate

__version__ = "0.1.0"

__all__ = [
    "BlochState", "bloch_analytic", "bloch_from_covariance",
    "bloch_integrate", "rwa_phonon",
    "RunConfig", "dump_config", "parse_config",
    "build_m_matrix", "initial_covariance", "linearization_check",
    "noise_matrix", "observables", "observables_series",
    "propagate_covariance", "propagate_via_green",
    "ChirpcoolError", "ConfigError", "NumericalAbortError",
    "SweepResult", "final_phonon", "heating_estimate", "heating_tail",
    "optimize_beta", "sideband_limit", "sweep_area_deviation",
    "sweep_beta", "sweep_detuning",
    "emit_sweep", "emit_timeseries", "load_sweep",
    "MeanFieldTrajectory", "PulseParams", "SystemParams",
    "chirp_amplitude", "chirp_phase", "chirp_phase_rate",
    "drive_reconstruct", "mean_field_solve", "optimal_chi0",
    "TimeGrid", "cumulative_trapezoid", "rk4_integrate",
]
