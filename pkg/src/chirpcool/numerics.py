"""Numerical kernels: fixed-step RK4 for small complex ODE systems and
cumulative trapezoid quadrature on uniform grids.

All rates are in units of the mechanical frequency and times in its
inverse, so every quantity here is dimensionless.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalAbortError

__all__ = ["TimeGrid", "rk4_integrate", "cumulative_trapezoid"]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid on [t_start, t_end] with step dt.

    n_steps is derived; t_end must sit on the grid to within a small
    rounding slack (the step count is rounded to the nearest integer).
    """

    t_start: float
    t_end: float
    dt: float
    n_steps: int = field(init=False)

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        n = int(round((self.t_end - self.t_start) / self.dt))
        if n < 1 or abs(self.t_start + n * self.dt - self.t_end) > 1e-9 * max(1.0, abs(self.t_end)):
            raise ValueError("grid span is not an integer number of steps")
        object.__setattr__(self, "n_steps", n)

    @property
    def times(self):
        """Grid nodes including both endpoints, length n_steps + 1."""
        return self.t_start + self.dt * np.arange(self.n_steps + 1)


def rk4_integrate(rhs, y0, grid):
    """Integrate dy/dt = rhs(t, y) with classical 4th-order Runge-Kutta.

    Parameters
    ----------
    rhs : callable
        rhs(t, y) -> array_like, same shape as y.
    y0 : array_like
        Initial state (complex or real vector).
    grid : TimeGrid

    Returns
    -------
    np.ndarray of shape (n_steps + 1, len(y0)) with y at every grid node.

    Raises
    ------
    NumericalAbortError if the state goes non-finite, reporting the time
    at which it happened.
    """
    y0 = np.atleast_1d(np.asarray(y0))
    dt = grid.dt
    out = np.empty((grid.n_steps + 1,) + y0.shape, dtype=y0.dtype)
    out[0] = y0
    y = y0
    for k in range(grid.n_steps):
        t = grid.t_start + k * dt
        k1 = np.asarray(rhs(t, y))
        k2 = np.asarray(rhs(t + 0.5 * dt, y + 0.5 * dt * k1))
        k3 = np.asarray(rhs(t + 0.5 * dt, y + 0.5 * dt * k2))
        k4 = np.asarray(rhs(t + dt, y + dt * k3))
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y.view(np.float64) if np.iscomplexobj(y) else y)):
            raise NumericalAbortError(
                f"non-finite state at t = {t + dt:.6g}", t_fail=t + dt
            )
        out[k + 1] = y
    return out


def cumulative_trapezoid(samples, dt):
    """Cumulative trapezoid integral of uniformly sampled data.

    out[0] = 0 and out[k] = out[k-1] + dt*(s[k-1] + s[k])/2.
    """
    s = np.asarray(samples, dtype=float)
    if s.ndim != 1 or s.size < 2:
        raise ValueError("need at least two samples")
    out = np.empty_like(s)
    out[0] = 0.0
    np.cumsum(0.5 * dt * (s[1:] + s[:-1]), out=out[1:])
    return out
