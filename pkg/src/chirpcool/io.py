"""CSV emission and ingestion for time series and sweep results.

Output is deterministic: identical inputs yield byte-identical files,
so runs can be diffed and archived next to their config.
"""

import numpy as np

from .covariance import observables_series
from .errors import ConfigError
from .experiments import SweepResult

__all__ = ["emit_timeseries", "emit_sweep", "load_sweep", "emit_bloch"]

TIMESERIES_COLUMNS = ("t", "re_a_mean", "im_a_mean", "re_b_mean", "im_b_mean",
                      "re_omega", "im_omega", "phonon", "photon")


def _g9(x):
    # 9 significant digits
    return f"{x:.9g}"


def _open_out(path):
    try:
        return open(path, "w", newline="\n")
    except OSError as exc:
        raise ConfigError(f"cannot write '{path}': {exc}") from exc


def emit_timeseries(traj, Rseq, path, stride=1):
    """Write the mean-field and covariance time series as CSV.

    One row per grid node (or every stride-th node; the final node is
    always included), floats at 9 significant digits.
    """
    t = traj.grid.times
    if Rseq.shape[0] != t.size:
        raise ValueError("trajectory and covariance grids are not aligned")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    phonon, photon = observables_series(Rseq)
    idx = np.arange(t.size)[::stride]
    if idx[-1] != t.size - 1:
        idx = np.append(idx, t.size - 1)
    with _open_out(path) as fh:
        fh.write(",".join(TIMESERIES_COLUMNS) + "\n")
        for k in idx:
            row = (t[k],
                   traj.a_mean[k].real, traj.a_mean[k].imag,
                   traj.b_mean[k].real, traj.b_mean[k].imag,
                   traj.omega_drive[k].real, traj.omega_drive[k].imag,
                   phonon[k], photon[k])
            fh.write(",".join(_g9(x) for x in row) + "\n")


def emit_bloch(times, uvw, phonon, path, stride=1):
    """Write a Bloch-vector time series (t, u, v, w, phonon) as CSV."""
    idx = np.arange(times.size)[::stride]
    if idx[-1] != times.size - 1:
        idx = np.append(idx, times.size - 1)
    with _open_out(path) as fh:
        fh.write("t,u,v,w,phonon\n")
        for k in idx:
            fh.write(",".join(_g9(x) for x in
                              (times[k], *uvw[k], phonon[k])) + "\n")


def emit_sweep(result, path):
    """Write a SweepResult as CSV with the full parameter record echoed
    as '#' comment lines.  Values are written with round-trip precision
    so load_sweep reproduces the result exactly."""
    with _open_out(path) as fh:
        fh.write(f"# axis_name = {result.axis_name}\n")
        for key in sorted(result.metadata):
            fh.write(f"# {key} = {result.metadata[key]!r}\n")
        fh.write("axis_value,final_phonon,final_photon\n")
        for x, ph, pt in zip(result.axis_values, result.final_phonon,
                             result.final_photon):
            fh.write(f"{float(x)!r},{float(ph)!r},{float(pt)!r}\n")


def _parse_meta_value(raw):
    raw = raw.strip()
    if raw in ("True", "False"):
        return raw == "True"
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        return raw.strip("'\"")


def load_sweep(path):
    """Read back a CSV written by emit_sweep."""
    metadata = {}
    axis_name = "axis"
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, raw = line[1:].partition("=")
                key = key.strip()
                if key == "axis_name":
                    axis_name = raw.strip()
                else:
                    metadata[key] = _parse_meta_value(raw)
            elif not line.startswith("axis_value"):
                rows.append([float(tok) for tok in line.split(",")])
    data = np.asarray(rows, dtype=float).reshape(-1, 3)
    return SweepResult(axis_name, data[:, 0], data[:, 1], data[:, 2], metadata)
