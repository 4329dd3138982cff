"""Physical parameters, the sech/tanh chirped-pulse shape, classical
mean-field dynamics of the cavity and mirror amplitudes, and
reconstruction of the physical drive that realizes the pulse.

Unit system: the mechanical frequency is the unit (omega_m = 1
internally); rates are in units of omega_m and times in 1/omega_m.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .numerics import TimeGrid, cumulative_trapezoid, rk4_integrate

__all__ = [
    "SystemParams",
    "PulseParams",
    "MeanFieldTrajectory",
    "chirp_amplitude",
    "chirp_phase_rate",
    "chirp_phase",
    "optimal_chi0",
    "mean_field_solve",
    "drive_reconstruct",
]

# The chirped coupling approximates a two-mode beam splitter only while
# its peak strength is well below the mechanical frequency.
RWA_STRAIN_RATIO = 0.25


@dataclass(frozen=True)
class SystemParams:
    """Physical rates of the optomechanical system, in units of omega_m."""

    g: float                      # radiation-pressure coupling
    gamma_c: float = 0.0          # cavity decay rate
    gamma_m: float = 0.0          # mechanical decay rate
    n_bar_m: float = 0.0          # thermal occupation of the mirror bath
    delta_c: float = 1.0          # cavity detuning (sideband resonance default)
    omega_m: float = 1.0          # the unit; kept explicit for readability

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError("g must be positive")
        if self.gamma_c < 0 or self.gamma_m < 0:
            raise ValueError("decay rates must be non-negative")
        if self.n_bar_m < 0:
            raise ValueError("n_bar_m must be non-negative")
        if not self.omega_m > 0:
            raise ValueError("omega_m must be positive")


@dataclass(frozen=True)
class PulseParams:
    """Chirped-pulse shape: peak coupling chi0, inverse duration alpha,
    frequency-modulation magnitude beta, peak time t0, and a
    multiplicative area deviation (1 + delta_dev) on the amplitude.

    chi0 of None is auto-filled with the optimal value
    sqrt(alpha^2 + beta^2)/2; the deviation factor is applied on top.
    """

    alpha: float
    beta: float
    t0: float
    chi0: float | None = None
    delta_dev: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not self.t0 > 0:
            raise ValueError("t0 must be positive")
        if self.chi0 is None:
            object.__setattr__(self, "chi0", optimal_chi0(self.alpha, self.beta))
        if self.chi0 < 0:
            raise ValueError("chi0 must be non-negative")
        if not self.rwa_valid:
            warnings.warn(
                f"chi0 = {self.chi0:.4g} is not small compared to omega_m; "
                "the rotating-wave picture is strained",
                stacklevel=2,
            )

    @property
    def rwa_valid(self):
        return self.chi0 < RWA_STRAIN_RATIO


@dataclass(frozen=True)
class MeanFieldTrajectory:
    """Classical amplitudes on a grid: <a(t)>, <b(t)>, the accumulated
    phase 2g * integral of Re<b>, and the reconstructed drive Omega(t)."""

    grid: TimeGrid
    a_mean: np.ndarray
    b_mean: np.ndarray
    phase_integral: np.ndarray
    omega_drive: np.ndarray


def chirp_amplitude(t, p):
    """Pulse coupling strength (1 + delta) * chi0 * sech[alpha (t - t0)]."""
    return (1.0 + p.delta_dev) * p.chi0 / np.cosh(p.alpha * (np.asarray(t) - p.t0))


def chirp_phase_rate(t, p):
    """Instantaneous frequency modulation beta * tanh[alpha (t - t0)]."""
    return p.beta * np.tanh(p.alpha * (np.asarray(t) - p.t0))


def _log_cosh(x):
    # |x| + log((1 + e^{-2|x|})/2): overflow-safe for large |x|.
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - np.log(2.0)


def chirp_phase(t, p):
    """Accumulated modulation phase
    (beta/alpha) * log(cosh[alpha (t - t0)] / cosh[alpha t0]),
    zero at t = 0 by construction."""
    x = p.alpha * (np.asarray(t) - p.t0)
    return (p.beta / p.alpha) * (_log_cosh(x) - _log_cosh(p.alpha * p.t0))


def optimal_chi0(alpha, beta):
    """Peak coupling that realizes complete transfer: sqrt(alpha^2+beta^2)/2."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return 0.5 * float(np.hypot(alpha, beta))


def mean_field_solve(sp, p, grid):
    """Solve the classical mean-field motion over the grid.

    <b> obeys  d<b>/dt = -(gamma_m/2 + i omega_m) <b> + i chi(t)^2 / g,
    the phase integral is the cumulative trapezoid of 2 g Re<b>, and
    <a(t)> = (chi(t)/g) * exp(-i [phi(t) - phase_integral(t)]).

    The grid must start at t = 0 (where <b> = 0 and the phase integral
    vanishes by definition).
    """
    if sp.g == 0:
        raise ValueError("g = 0: the cavity amplitude <a> ~ chi/g diverges")
    if abs(grid.t_start) > 1e-12:
        raise ValueError("mean-field grid must start at t = 0")

    def rhs(t, y):
        chi = chirp_amplitude(t, p)
        return np.array(
            [-(sp.gamma_m / 2.0 + 1j * sp.omega_m) * y[0] + 1j * chi * chi / sp.g],
            dtype=complex,
        )

    b = rk4_integrate(rhs, np.array([0.0 + 0.0j]), grid)[:, 0]
    z = cumulative_trapezoid(2.0 * sp.g * b.real, grid.dt)
    t = grid.times
    a = (chirp_amplitude(t, p) / sp.g) * np.exp(-1j * (chirp_phase(t, p) - z))
    traj = MeanFieldTrajectory(grid, a, b, z, np.zeros_like(a))
    omega = drive_reconstruct(traj, sp, p)
    return MeanFieldTrajectory(grid, a, b, z, omega)


def drive_reconstruct(traj, sp, p):
    """Physical drive amplitude realizing the pulse:

    Omega(t) = i <da/dt> - [Delta(t) - i gamma_c/2] <a>,
    Delta(t) = delta_c - 2 g Re<b(t)>,

    with <da/dt> in closed form,
    <da/dt> = <a> * (-alpha tanh[alpha(t-t0)] - i [phidot - 2 g Re<b>]),
    so no endpoint differencing artifacts enter.
    """
    t = traj.grid.times
    a = traj.a_mean
    shift = 2.0 * sp.g * traj.b_mean.real
    a_dot = a * (
        -p.alpha * np.tanh(p.alpha * (t - p.t0))
        - 1j * (chirp_phase_rate(t, p) - shift)
    )
    delta_t = sp.delta_c - shift
    return 1j * a_dot - (delta_t - 1j * sp.gamma_c / 2.0) * a
