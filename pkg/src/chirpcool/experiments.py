"""Quantitative studies: residual phonon numbers, post-pulse heating,
parameter sweeps over the frequency-modulation magnitude, detuning and
pulse-area error, and a 1-D pulse-parameter optimizer.

All sweeps read their figure of merit at t = 2 t0 (end of the pulse
body) and are deterministic: parallel and serial execution produce
identical results, ordered by axis index.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .covariance import observables, propagate_covariance
from .model import PulseParams, optimal_chi0
from .numerics import TimeGrid

__all__ = [
    "SweepResult",
    "DEFAULT_DT",
    "final_phonon",
    "final_numbers",
    "sweep_beta",
    "sweep_detuning",
    "sweep_area_deviation",
    "optimize_beta",
    "heating_estimate",
    "heating_tail",
    "sideband_limit",
]

DEFAULT_DT = 1e-3
THREADS_ENV = "CHIRPCOOL_THREADS"

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SweepResult:
    """One swept axis with the final displaced particle numbers per point
    and the full parameter record for archival."""

    axis_name: str
    axis_values: np.ndarray
    final_phonon: np.ndarray
    final_photon: np.ndarray
    metadata: dict = field(default_factory=dict)


def _pulse_grid(p, dt):
    return TimeGrid(0.0, 2.0 * p.t0, dt)


def final_numbers(sp, p, rwa=False, dt=DEFAULT_DT):
    """(phonon, photon) at t = 2 t0 from the moment-ODE propagation."""
    Rseq = propagate_covariance(sp, p, _pulse_grid(p, dt), rwa=rwa)
    return observables(Rseq[-1])


def final_phonon(sp, p, rwa=False, dt=DEFAULT_DT):
    """Final displaced phonon number at t = 2 t0."""
    return final_numbers(sp, p, rwa=rwa, dt=dt)[0]


def _n_threads():
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_points(fn, items):
    # The propagation kernels release the GIL, so a thread pool gives
    # real parallelism; results always come back in axis order.
    n = _n_threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _metadata(sp, p, rwa, dt, **extra):
    md = {
        "g": sp.g, "gamma_c": sp.gamma_c, "gamma_m": sp.gamma_m,
        "n_bar_m": sp.n_bar_m, "delta_c": sp.delta_c, "omega_m": sp.omega_m,
        "chi0": p.chi0, "alpha": p.alpha, "beta": p.beta, "t0": p.t0,
        "delta_dev": p.delta_dev, "rwa": rwa, "dt": dt,
        "sideband_limit": sideband_limit(sp),
    }
    md.update(extra)
    return md


def sweep_beta(sp, base, betas, lock_chi0=True, rwa=False, dt=DEFAULT_DT):
    """Final phonon/photon numbers versus the frequency-modulation
    magnitude.  With lock_chi0, the peak coupling is recomputed per
    point as sqrt(alpha^2 + beta^2)/2 (the area deviation factor is
    applied on top of the lock, not inside it)."""
    betas = np.asarray(betas, dtype=float)

    def point(beta):
        chi0 = optimal_chi0(base.alpha, beta) if lock_chi0 else base.chi0
        p = replace(base, beta=float(beta), chi0=chi0)
        return final_numbers(sp, p, rwa=rwa, dt=dt)

    pairs = _map_points(point, list(betas))
    phon = np.array([ph for ph, _ in pairs])
    phot = np.array([pt for _, pt in pairs])
    return SweepResult("beta", betas, phon, phot,
                       _metadata(sp, base, rwa, dt, lock_chi0=lock_chi0))


def sweep_detuning(sp, p, detunings, rwa=False, dt=DEFAULT_DT):
    """Final phonon/photon numbers versus the cavity detuning."""
    detunings = np.asarray(detunings, dtype=float)

    def point(dc):
        return final_numbers(replace(sp, delta_c=float(dc)), p, rwa=rwa, dt=dt)

    pairs = _map_points(point, list(detunings))
    phon = np.array([ph for ph, _ in pairs])
    phot = np.array([pt for _, pt in pairs])
    return SweepResult("delta_c", detunings, phon, phot,
                       _metadata(sp, p, rwa, dt))


def sweep_area_deviation(sp, p, deltas, rwa=False, dt=DEFAULT_DT):
    """Final phonon/photon numbers versus the pulse-area deviation, the
    multiplicative (1 + delta) calibration error on the amplitude."""
    deltas = np.asarray(deltas, dtype=float)

    def point(dd):
        return final_numbers(sp, replace(p, delta_dev=float(dd)), rwa=rwa, dt=dt)

    pairs = _map_points(point, list(deltas))
    phon = np.array([ph for ph, _ in pairs])
    phot = np.array([pt for _, pt in pairs])
    return SweepResult("delta_dev", deltas, phon, phot,
                       _metadata(sp, p, rwa, dt))


def optimize_beta(sp, base, bounds, rwa=False, dt=DEFAULT_DT,
                  n_coarse=41, tol=1e-3):
    """Minimize the final phonon number over beta with the peak coupling
    locked to the optimal relation.

    Coarse scan on n_coarse points, then golden-section refinement of
    the bracketing interval until it is narrower than tol.  Grid ties
    break toward smaller |beta|.  Returns (beta_opt, phonon_opt).
    """
    lo, hi = float(bounds[0]), float(bounds[1])
    if not np.isfinite(lo) or not np.isfinite(hi):
        raise ValueError("bounds must be finite")
    if hi < lo:
        lo, hi = hi, lo

    def objective(beta):
        p = replace(base, beta=float(beta), chi0=optimal_chi0(base.alpha, beta))
        value = final_phonon(sp, p, rwa=rwa, dt=dt)
        if not np.isfinite(value):
            raise RuntimeError(f"non-finite objective at beta = {beta:.6g}")
        return value

    if hi == lo:
        return lo, objective(lo)

    grid = np.linspace(lo, hi, n_coarse)
    values = np.array(_map_points(objective, list(grid)))
    order = sorted(range(n_coarse),
                   key=lambda i: (values[i], abs(grid[i]), grid[i]))
    best = order[0]

    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, n_coarse - 1)]
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = objective(d)
    beta_opt = c if fc < fd else d
    phonon_opt = min(fc, fd)
    if values[best] <= phonon_opt:
        # a coarse node can beat the refined point when the objective is
        # flat or multimodal inside the bracket
        beta_opt, phonon_opt = grid[best], values[best]
    return float(beta_opt), float(phonon_opt)


def heating_estimate(sp, n_residual):
    """Phonons gained from n_residual leftover cavity photons:
    (g * n_r / omega_m)^2."""
    if n_residual < 0:
        raise ValueError("n_residual must be non-negative")
    return (sp.g * n_residual / sp.omega_m) ** 2


def heating_tail(sp, p, t_end, rwa=False, dt=DEFAULT_DT):
    """Phonon number at the end of the pulse body (t = 2 t0) and after a
    long free tail at t_end, exposing the mirror-bath reheating."""
    if not t_end > 2.0 * p.t0:
        raise ValueError("t_end must exceed 2 t0")
    grid = TimeGrid(0.0, float(t_end), dt)
    Rseq = propagate_covariance(sp, p, grid, rwa=rwa)
    k_pulse = int(round(2.0 * p.t0 / dt))
    return float(Rseq[k_pulse, 3, 1].real), float(Rseq[-1, 3, 1].real)


def sideband_limit(sp):
    """Steady-state resolved-sideband cooling floor (gamma_c / 4 omega_m)^2,
    reported alongside pulsed results as a reference constant."""
    return (sp.gamma_c / (4.0 * sp.omega_m)) ** 2
