"""Second-moment dynamics of the fluctuation operators.

The fluctuation vector is v = [dA, dB, dA_dag, dB_dag] (cavity and
mirror, with the daggered operators carried explicitly), and the state
is the 4x4 matrix R_{ll'} = <v_l v_{l'}>.  The default propagation is
the moment ODE

    dR/dt = M(t) R + R M^T(t) + C,

with M the drift matrix of the transformed linear Langevin system and C
the constant noise matrix.  NOTE the plain transpose: v already
contains the daggered operators, so no conjugation appears anywhere in
the moment equation.  This is the likeliest place to get the dynamics
silently wrong.

A Green-function route (propagator G with dG/dt = M G, then
R = G [R(0) + Z] G^T with Z the accumulated, back-propagated noise) is
kept as an independent cross-check; it inverts G at every node and is
less stable on long horizons, so the moment ODE is the default.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import NumericalAbortError

__all__ = [
    "build_m_matrix",
    "initial_covariance",
    "noise_matrix",
    "propagate_covariance",
    "propagate_via_green",
    "observables",
    "observables_series",
    "commutator_residual",
    "conjugation_swap_residual",
    "linearization_check",
    "LinearizationReport",
]

# Commutator drift beyond this is an unusable integration, not a warning.
COMMUTATOR_ABORT_TOL = 1e-3
GREEN_COND_LIMIT = 1e8

_OK, _NONFINITE, _COMMUTATOR, _ILLCOND = 0, 1, 2, 3


@njit(cache=True, nogil=True)
def _m_kernel(t, chi_peak, alpha, beta, t0, delta_c, omega_m,
              gamma_c, gamma_m, rwa):
    M = np.zeros((4, 4), dtype=np.complex128)
    x = alpha * (t - t0)
    chi = chi_peak / np.cosh(x)
    phidot = beta * np.tanh(x)
    em = np.exp(1j * (delta_c - omega_m) * t)
    M[0, 0] = -gamma_c / 2.0 + 1j * phidot
    M[0, 1] = 1j * chi * em
    M[1, 0] = 1j * chi * np.conj(em)
    M[1, 1] = -gamma_m / 2.0
    M[2, 2] = -gamma_c / 2.0 - 1j * phidot
    M[2, 3] = -1j * chi * np.conj(em)
    M[3, 2] = -1j * chi * em
    M[3, 3] = -gamma_m / 2.0
    if not rwa:
        ep = np.exp(1j * (delta_c + omega_m) * t)
        M[0, 3] = 1j * chi * ep
        M[1, 2] = 1j * chi * ep
        M[2, 1] = -1j * chi * np.conj(ep)
        M[3, 0] = -1j * chi * np.conj(ep)
    return M


@njit(cache=True, nogil=True)
def _moment_rhs(t, R, C, chi_peak, alpha, beta, t0, delta_c, omega_m,
                gamma_c, gamma_m, rwa):
    M = _m_kernel(t, chi_peak, alpha, beta, t0, delta_c, omega_m,
                  gamma_c, gamma_m, rwa)
    return M @ R + R @ M.T + C


@njit(cache=True, nogil=True)
def _moment_loop(R0, C, t_start, dt, n, chi_peak, alpha, beta, t0,
                 delta_c, omega_m, gamma_c, gamma_m, rwa):
    out = np.empty((n + 1, 4, 4), dtype=np.complex128)
    out[0] = R0
    R = R0.copy()
    status = _OK
    fail = -1
    for k in range(n):
        t = t_start + k * dt
        k1 = _moment_rhs(t, R, C, chi_peak, alpha, beta, t0,
                         delta_c, omega_m, gamma_c, gamma_m, rwa)
        k2 = _moment_rhs(t + 0.5 * dt, R + 0.5 * dt * k1, C, chi_peak, alpha,
                         beta, t0, delta_c, omega_m, gamma_c, gamma_m, rwa)
        k3 = _moment_rhs(t + 0.5 * dt, R + 0.5 * dt * k2, C, chi_peak, alpha,
                         beta, t0, delta_c, omega_m, gamma_c, gamma_m, rwa)
        k4 = _moment_rhs(t + dt, R + dt * k3, C, chi_peak, alpha,
                         beta, t0, delta_c, omega_m, gamma_c, gamma_m, rwa)
        R = R + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.isfinite(R.real.sum() + R.imag.sum()):
            status = _NONFINITE
            fail = k + 1
            break
        drift = max(np.abs(R[0, 2] - R[2, 0] - 1.0),
                    np.abs(R[1, 3] - R[3, 1] - 1.0))
        if drift > COMMUTATOR_ABORT_TOL:
            status = _COMMUTATOR
            fail = k + 1
            break
        out[k + 1] = R
    return out, status, fail


@njit(cache=True, nogil=True)
def _norm1(A):
    best = 0.0
    for j in range(4):
        s = 0.0
        for i in range(4):
            s += np.abs(A[i, j])
        if s > best:
            best = s
    return best


@njit(cache=True, nogil=True)
def _green_loop(R0, C, t_start, dt, n, chi_peak, alpha, beta, t0,
                delta_c, omega_m, gamma_c, gamma_m, rwa):
    out = np.empty((n + 1, 4, 4), dtype=np.complex128)
    G = np.eye(4, dtype=np.complex128)
    Z = np.zeros((4, 4), dtype=np.complex128)
    Ginv = np.eye(4, dtype=np.complex128)
    S_prev = Ginv @ C @ Ginv.T
    out[0] = R0
    status = _OK
    fail = -1
    for k in range(n):
        t = t_start + k * dt
        k1 = _m_kernel(t, chi_peak, alpha, beta, t0, delta_c, omega_m,
                       gamma_c, gamma_m, rwa) @ G
        k2 = _m_kernel(t + 0.5 * dt, chi_peak, alpha, beta, t0, delta_c,
                       omega_m, gamma_c, gamma_m, rwa) @ (G + 0.5 * dt * k1)
        k3 = _m_kernel(t + 0.5 * dt, chi_peak, alpha, beta, t0, delta_c,
                       omega_m, gamma_c, gamma_m, rwa) @ (G + 0.5 * dt * k2)
        k4 = _m_kernel(t + dt, chi_peak, alpha, beta, t0, delta_c, omega_m,
                       gamma_c, gamma_m, rwa) @ (G + dt * k3)
        G = G + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.isfinite(G.real.sum() + G.imag.sum()):
            status = _NONFINITE
            fail = k + 1
            break
        Ginv = np.linalg.inv(G)
        if _norm1(G) * _norm1(Ginv) > GREEN_COND_LIMIT:
            status = _ILLCOND
            fail = k + 1
            break
        S = Ginv @ C @ Ginv.T
        Z = Z + 0.5 * dt * (S_prev + S)
        S_prev = S
        out[k + 1] = G @ (R0 + Z) @ G.T
    return out, status, fail


def _pulse_scalars(sp, p):
    chi_peak = (1.0 + p.delta_dev) * p.chi0
    return (chi_peak, p.alpha, p.beta, p.t0,
            sp.delta_c, sp.omega_m, sp.gamma_c, sp.gamma_m)


def build_m_matrix(t, sp, p, rwa=False):
    """Drift matrix M(t) of the transformed fluctuation system.

    The counter-rotating entries carry exp(+-i (delta_c + omega_m) t);
    with rwa=True those four entries are zeroed, which reduces the
    dynamics to a pure excitation-exchange (beam-splitter) form.
    """
    return _m_kernel(float(t), *_pulse_scalars(sp, p), bool(rwa))


def initial_covariance(n_bar_m):
    """R(0) for cavity vacuum and a thermal mirror: R13 = 1,
    R24 = n_bar_m + 1, R42 = n_bar_m, all else zero."""
    if n_bar_m < 0:
        raise ValueError("n_bar_m must be non-negative")
    R = np.zeros((4, 4), dtype=complex)
    R[0, 2] = 1.0
    R[1, 3] = n_bar_m + 1.0
    R[3, 1] = n_bar_m
    return R


def noise_matrix(sp):
    """Constant noise matrix: C13 = gamma_c, C24 = gamma_m (n+1),
    C42 = gamma_m n."""
    C = np.zeros((4, 4), dtype=complex)
    C[0, 2] = sp.gamma_c
    C[1, 3] = sp.gamma_m * (sp.n_bar_m + 1.0)
    C[3, 1] = sp.gamma_m * sp.n_bar_m
    return C


def _check_status(status, fail, grid, method):
    if status == _OK:
        return
    t_fail = grid.t_start + fail * grid.dt
    if status == _NONFINITE:
        raise NumericalAbortError(
            f"{method}: non-finite state at t = {t_fail:.6g}", t_fail=t_fail)
    if status == _COMMUTATOR:
        raise NumericalAbortError(
            f"{method}: commutator drift exceeded {COMMUTATOR_ABORT_TOL:g} "
            f"at t = {t_fail:.6g}", t_fail=t_fail)
    if status == _ILLCOND:
        raise NumericalAbortError(
            f"{method}: propagator condition number exceeded "
            f"{GREEN_COND_LIMIT:g} at t = {t_fail:.6g}; use "
            "propagate_covariance instead", t_fail=t_fail)


def propagate_covariance(sp, p, grid, rwa=False):
    """Propagate R over the grid via the moment ODE (default method).

    Returns an array of shape (n_steps + 1, 4, 4); entry k is R at grid
    node k.  Aborts if the commutator invariants drift beyond 1e-3.
    """
    if abs(grid.t_start) > 1e-12:
        raise ValueError("covariance grid must start at t = 0")
    R0 = initial_covariance(sp.n_bar_m)
    C = noise_matrix(sp)
    out, status, fail = _moment_loop(
        R0, C, grid.t_start, grid.dt, grid.n_steps,
        *_pulse_scalars(sp, p), bool(rwa))
    _check_status(status, fail, grid, "moment ODE")
    return out


def propagate_via_green(sp, p, grid, rwa=False):
    """Propagate R via the propagator G: dG/dt = M G, with the noise
    contribution accumulated as Z = int G^-1 C G^-T and
    R = G (R(0) + Z) G^T.  Cross-validation path; errors out if G
    becomes ill-conditioned (mixes growing and decaying modes)."""
    if abs(grid.t_start) > 1e-12:
        raise ValueError("covariance grid must start at t = 0")
    R0 = initial_covariance(sp.n_bar_m)
    C = noise_matrix(sp)
    out, status, fail = _green_loop(
        R0, C, grid.t_start, grid.dt, grid.n_steps,
        *_pulse_scalars(sp, p), bool(rwa))
    _check_status(status, fail, grid, "Green function")
    return out


def observables(R):
    """(phonon, photon) = (Re R42, Re R31), the displaced particle
    numbers.  Warns if the imaginary residue exceeds 1e-6."""
    phonon = R[3, 1]
    photon = R[2, 0]
    if max(abs(phonon.imag), abs(photon.imag)) > 1e-6:
        warnings.warn(
            f"imaginary residue in particle numbers: "
            f"Im R42 = {phonon.imag:.3g}, Im R31 = {photon.imag:.3g}",
            stacklevel=2)
    return phonon.real, photon.real


def observables_series(Rseq):
    """Vectorized observables over a propagated sequence."""
    return Rseq[:, 3, 1].real, Rseq[:, 2, 0].real


def commutator_residual(R):
    """max(|R13 - R31 - 1|, |R24 - R42 - 1|)."""
    return max(abs(R[..., 0, 2] - R[..., 2, 0] - 1.0).max(),
               abs(R[..., 1, 3] - R[..., 3, 1] - 1.0).max())


_SWAP = np.array([2, 3, 0, 1])


def conjugation_swap_residual(R):
    """Deviation from R_{s(l), s(l')} = conj(R_{l', l}) with s the
    dagger swap (1<->3, 2<->4)."""
    swapped = R[..., _SWAP, :][..., :, _SWAP]
    target = np.conj(np.swapaxes(R, -1, -2))
    return abs(swapped - target).max()


@dataclass(frozen=True)
class LinearizationReport:
    """Advisory check that the mean field dominates the fluctuations."""

    flagged_times: np.ndarray
    worst_ratio: float
    worst_time: float

    @property
    def ok(self):
        return self.flagged_times.size == 0


def linearization_check(traj, Rseq, margin=10.0):
    """Flag times where |<a>|^2 < margin * <da_dag da>.

    Points where both sides are below 1e-12 (no field, no fluctuation)
    are skipped.  Advisory only: the tail after the pulse is expected to
    flag since <a> decays with the pulse envelope.
    """
    t = traj.grid.times
    if len(t) != Rseq.shape[0]:
        raise ValueError("trajectory and covariance grids are not aligned")
    mean_sq = np.abs(traj.a_mean) ** 2
    photon = Rseq[:, 2, 0].real
    active = (mean_sq >= 1e-12) | (photon >= 1e-12)
    ratio = np.full_like(mean_sq, np.inf)
    np.divide(mean_sq, photon, out=ratio, where=active & (photon > 0))
    flagged = active & (mean_sq < margin * photon)
    if np.any(active & np.isfinite(ratio)):
        finite = np.where(active & np.isfinite(ratio))[0]
        worst = finite[np.argmin(ratio[finite])]
        return LinearizationReport(t[flagged], float(ratio[worst]), float(t[worst]))
    return LinearizationReport(t[flagged], np.inf, float(t[0]))
