"""Command-line surface.

    chirpcool <mode> --config run.ini [--out data.csv] [--rwa] [--stride N]

with mode one of simulate, oracle, drive, sweep-beta, sweep-detuning,
sweep-delta, optimize, tail.  Exit codes: 0 success, 2 config error,
3 numerical abort.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import experiments
from .bloch import bloch_integrate
from .config import MODES, parse_config
from .covariance import propagate_covariance
from .errors import ConfigError, NumericalAbortError
from .io import emit_bloch, emit_sweep, emit_timeseries
from .model import chirp_amplitude, chirp_phase_rate, mean_field_solve

__all__ = ["main"]


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="chirpcool",
        description="Pulsed cooling of a mirror via a chirped coupling: "
                    "simulations, sweeps and drive reconstruction.")
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        sp = sub.add_parser(mode)
        sp.add_argument("--config", required=True, help="INI config file")
        sp.add_argument("--out", default=None, help="output CSV path")
        sp.add_argument("--rwa", action="store_true",
                        help="drop the counter-rotating drift entries")
        sp.add_argument("--stride", type=int, default=None,
                        help="emit every N-th grid node")
    return parser


def _out_path(cfg, args, default_name):
    if args.out:
        return Path(args.out)
    if cfg.output_path:
        return Path(cfg.output_path)
    return Path(default_name)


def _run_simulate(cfg, args):
    traj = mean_field_solve(cfg.system, cfg.pulse, cfg.grid)
    Rseq = propagate_covariance(cfg.system, cfg.pulse, cfg.grid, rwa=cfg.rwa)
    path = _out_path(cfg, args, "timeseries.csv")
    emit_timeseries(traj, Rseq, path, stride=cfg.stride)
    phonon = Rseq[-1, 3, 1].real
    photon = Rseq[-1, 2, 0].real
    print(f"final phonon = {phonon:.6g}, final photon = {photon:.6g} "
          f"at t = {cfg.grid.t_end:g}")
    print(f"resolved-sideband reference (gamma_c/4)^2 = "
          f"{experiments.sideband_limit(cfg.system):.6g}")
    print(f"wrote {path}")


def _run_oracle(cfg, args):
    uvw = bloch_integrate(cfg.pulse, cfg.system.n_bar_m, cfg.grid)
    # quasi-phonon from the Bloch vector: photon + phonon = n_bar_m and
    # w = photon - phonon, so phonon = (n_bar_m - w)/2
    phonon = 0.5 * (cfg.system.n_bar_m - uvw[:, 2])
    path = _out_path(cfg, args, "oracle.csv")
    emit_bloch(cfg.grid.times, uvw, phonon, path, stride=cfg.stride)
    print(f"final quasi-phonon (Bloch) = {phonon[-1]:.6g}")
    print(f"wrote {path}")


def _run_drive(cfg, args):
    traj = mean_field_solve(cfg.system, cfg.pulse, cfg.grid)
    path = _out_path(cfg, args, "drive.csv")
    t = cfg.grid.times
    chi = chirp_amplitude(t, cfg.pulse)
    theta = chirp_phase_rate(t, cfg.pulse)
    idx = np.arange(t.size)[::cfg.stride]
    if idx[-1] != t.size - 1:
        idx = np.append(idx, t.size - 1)
    with open(path, "w", newline="\n") as fh:
        fh.write("t,chi,phase_rate,re_omega,im_omega\n")
        for k in idx:
            row = (t[k], chi[k], theta[k],
                   traj.omega_drive[k].real, traj.omega_drive[k].imag)
            fh.write(",".join(f"{x:.9g}" for x in row) + "\n")
    peak = np.argmax(np.abs(traj.omega_drive))
    print(f"peak |Omega| = {np.abs(traj.omega_drive[peak]):.6g} "
          f"at t = {t[peak]:g}")
    print(f"wrote {path}")


def _run_sweep_beta(cfg, args):
    betas = np.linspace(cfg.beta_min, cfg.beta_max, cfg.n_points)
    base = _out_path(cfg, args, "sweep_beta.csv")
    for dc in cfg.detunings:
        sp = replace(cfg.system, delta_c=dc)
        result = experiments.sweep_beta(sp, cfg.pulse, betas,
                                        lock_chi0=cfg.lock_chi0,
                                        rwa=cfg.rwa, dt=cfg.grid.dt)
        if len(cfg.detunings) > 1:
            path = base.with_name(f"{base.stem}_dc{dc:g}{base.suffix}")
        else:
            path = base
        emit_sweep(result, path)
        print(f"wrote {path} (delta_c = {dc:g}, "
              f"min phonon = {result.final_phonon.min():.6g})")


def _run_sweep_detuning(cfg, args):
    result = experiments.sweep_detuning(cfg.system, cfg.pulse, cfg.detunings,
                                        rwa=cfg.rwa, dt=cfg.grid.dt)
    path = _out_path(cfg, args, "sweep_detuning.csv")
    emit_sweep(result, path)
    print(f"wrote {path} (min phonon = {result.final_phonon.min():.6g})")


def _run_sweep_delta(cfg, args):
    result = experiments.sweep_area_deviation(cfg.system, cfg.pulse, cfg.deltas,
                                              rwa=cfg.rwa, dt=cfg.grid.dt)
    path = _out_path(cfg, args, "sweep_delta.csv")
    emit_sweep(result, path)
    print(f"wrote {path} (min phonon = {result.final_phonon.min():.6g})")


def _run_optimize(cfg, args):
    beta_opt, phonon_opt = experiments.optimize_beta(
        cfg.system, cfg.pulse, (cfg.beta_min, cfg.beta_max),
        rwa=cfg.rwa, dt=cfg.grid.dt, n_coarse=cfg.n_points)
    print(f"beta_opt = {beta_opt:.6g}, phonon_opt = {phonon_opt:.6g}")
    if args.out or cfg.output_path:
        path = _out_path(cfg, args, "optimize.csv")
        with open(path, "w", newline="\n") as fh:
            fh.write("beta_opt,phonon_opt\n")
            fh.write(f"{beta_opt!r},{phonon_opt!r}\n")
        print(f"wrote {path}")


def _run_tail(cfg, args):
    start, end = experiments.heating_tail(cfg.system, cfg.pulse,
                                          cfg.grid.t_end, rwa=cfg.rwa,
                                          dt=cfg.grid.dt)
    print(f"phonon at t = 2 t0: {start:.6g}")
    print(f"phonon at t = {cfg.grid.t_end:g}: {end:.6g}")
    print(f"bath reheating: {end - start:+.6g}")


_RUNNERS = {
    "simulate": _run_simulate,
    "oracle": _run_oracle,
    "drive": _run_drive,
    "sweep-beta": _run_sweep_beta,
    "sweep-detuning": _run_sweep_detuning,
    "sweep-delta": _run_sweep_delta,
    "optimize": _run_optimize,
    "tail": _run_tail,
}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        cfg = parse_config(text)
        cfg = replace(cfg, mode=args.mode)
        if args.rwa:
            cfg = replace(cfg, rwa=True)
        if args.stride is not None:
            if args.stride < 1:
                raise ConfigError("stride must be >= 1")
            cfg = replace(cfg, stride=args.stride)
        _RUNNERS[cfg.mode](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalAbortError as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
