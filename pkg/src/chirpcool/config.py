"""Run configuration: an INI-style document with [system], [pulse],
[grid] and [run] sections, archivable next to the CSVs it produces.

Rates are given either dimensionless in units of the mechanical
frequency (g, gamma_c, ...) or in Hz (g_hz, gamma_c_hz, ... together
with omega_m_hz); the Hz form is converted on ingestion.  Mixing the
two forms for the same quantity is an error.
"""

import configparser
from dataclasses import dataclass, field

from .errors import ConfigError
from .model import PulseParams, SystemParams
from .numerics import TimeGrid

__all__ = ["RunConfig", "parse_config", "dump_config", "MODES"]

MODES = ("simulate", "oracle", "drive", "sweep-beta", "sweep-detuning",
         "sweep-delta", "optimize", "tail")

_SYSTEM_KEYS = {"g", "gamma_c", "gamma_m", "n_bar_m", "delta_c", "omega_m"}
_SYSTEM_HZ_KEYS = {"g_hz", "gamma_c_hz", "gamma_m_hz", "delta_c_hz", "omega_m_hz"}
_PULSE_KEYS = {"alpha", "beta", "t0", "chi0", "delta_dev"}
_GRID_KEYS = {"dt", "t_start", "t_end"}
_RUN_KEYS = {"mode", "rwa", "output", "stride", "beta_min", "beta_max",
             "n_points", "lock_chi0", "detunings", "deltas"}


@dataclass(frozen=True)
class RunConfig:
    system: SystemParams
    pulse: PulseParams
    grid: TimeGrid
    mode: str = "simulate"
    rwa: bool = False
    output_path: str | None = None
    stride: int = 1
    beta_min: float = -0.4
    beta_max: float = 0.4
    n_points: int = 41
    lock_chi0: bool = True
    detunings: tuple = (1.0,)
    deltas: tuple = (-0.1, 0.0, 0.1)


def _check_keys(section, present, allowed):
    for key in present:
        if key not in allowed:
            raise ConfigError(f"unknown key '{key}' in section [{section}]")


def _get_float(sec, key, default=None, required=False):
    if key in sec:
        try:
            return float(sec[key])
        except ValueError as exc:
            raise ConfigError(f"key '{key}': not a number ({sec[key]!r})") from exc
    if required:
        raise ConfigError(f"missing required key '{key}'")
    return default


def _get_floats(sec, key, default):
    if key not in sec:
        return default
    try:
        return tuple(float(tok) for tok in sec[key].split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(f"key '{key}': not a number list ({sec[key]!r})") from exc


def _get_bool(sec, key, default):
    if key not in sec:
        return default
    raw = sec[key].strip().lower()
    if raw in ("1", "true", "yes", "on"):
        return True
    if raw in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"key '{key}': not a boolean ({sec[key]!r})")


def _system_from(sec):
    present = set(sec)
    _check_keys("system", present, _SYSTEM_KEYS | _SYSTEM_HZ_KEYS | {"n_bar_m"})
    hz_present = present & _SYSTEM_HZ_KEYS
    if hz_present:
        clash = {k[:-3] for k in hz_present} & present
        if clash:
            raise ConfigError(
                f"both Hz and dimensionless forms given for: {sorted(clash)}")
        omega_m_hz = _get_float(sec, "omega_m_hz", required=True)
        if not omega_m_hz > 0:
            raise ConfigError("omega_m_hz must be positive")

        def scaled(key, default):
            # the 2*pi factor to angular frequency cancels in the ratio
            v = _get_float(sec, key + "_hz")
            return v / omega_m_hz if v is not None else default

        kwargs = {
            "g": scaled("g", None),
            "gamma_c": scaled("gamma_c", 0.0),
            "gamma_m": scaled("gamma_m", 0.0),
            "delta_c": scaled("delta_c", 1.0),
            "omega_m": 1.0,
        }
        if kwargs["g"] is None:
            raise ConfigError("missing required key 'g_hz'")
    else:
        kwargs = {
            "g": _get_float(sec, "g", required=True),
            "gamma_c": _get_float(sec, "gamma_c", 0.0),
            "gamma_m": _get_float(sec, "gamma_m", 0.0),
            "delta_c": _get_float(sec, "delta_c", 1.0),
            "omega_m": _get_float(sec, "omega_m", 1.0),
        }
    kwargs["n_bar_m"] = _get_float(sec, "n_bar_m", 0.0)
    for key in ("gamma_c", "gamma_m", "n_bar_m"):
        if kwargs[key] < 0:
            raise ConfigError(f"negative rate '{key}' = {kwargs[key]:g}")
    try:
        return SystemParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _pulse_from(sec):
    _check_keys("pulse", set(sec), _PULSE_KEYS)
    try:
        return PulseParams(
            alpha=_get_float(sec, "alpha", required=True),
            beta=_get_float(sec, "beta", 0.0),
            t0=_get_float(sec, "t0", required=True),
            chi0=_get_float(sec, "chi0"),
            delta_dev=_get_float(sec, "delta_dev", 0.0),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def parse_config(text):
    """Parse an INI document into a validated RunConfig.

    Defaults: dt = 1e-3, horizon [0, 2 t0], rwa off, delta_c = omega_m,
    chi0 auto-filled with the optimal value when omitted.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    for section in parser.sections():
        if section not in ("system", "pulse", "grid", "run"):
            raise ConfigError(f"unknown section [{section}]")
    for required in ("system", "pulse"):
        if not parser.has_section(required):
            raise ConfigError(f"missing section [{required}]")

    system = _system_from(parser["system"])
    pulse = _pulse_from(parser["pulse"])

    grid_sec = parser["grid"] if parser.has_section("grid") else {}
    _check_keys("grid", set(grid_sec), _GRID_KEYS)
    dt = _get_float(grid_sec, "dt", 1e-3)
    t_start = _get_float(grid_sec, "t_start", 0.0)
    t_end = _get_float(grid_sec, "t_end", 2.0 * pulse.t0)
    try:
        grid = TimeGrid(t_start, t_end, dt)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    run_sec = parser["run"] if parser.has_section("run") else {}
    _check_keys("run", set(run_sec), _RUN_KEYS)
    mode = run_sec.get("mode", "simulate") if run_sec else "simulate"
    if mode not in MODES:
        raise ConfigError(f"unknown mode '{mode}' (choose from {', '.join(MODES)})")
    stride = int(_get_float(run_sec, "stride", 1))
    if stride < 1:
        raise ConfigError("stride must be >= 1")
    n_points = int(_get_float(run_sec, "n_points", 41))
    if n_points < 1:
        raise ConfigError("n_points must be >= 1")

    return RunConfig(
        system=system,
        pulse=pulse,
        grid=grid,
        mode=mode,
        rwa=_get_bool(run_sec, "rwa", False),
        output_path=run_sec.get("output") if run_sec else None,
        stride=stride,
        beta_min=_get_float(run_sec, "beta_min", -0.4),
        beta_max=_get_float(run_sec, "beta_max", 0.4),
        n_points=n_points,
        lock_chi0=_get_bool(run_sec, "lock_chi0", True),
        detunings=_get_floats(run_sec, "detunings", (system.delta_c,)),
        deltas=_get_floats(run_sec, "deltas", (-0.1, 0.0, 0.1)),
    )


def dump_config(cfg):
    """Serialize a RunConfig back to INI text; parse_config(dump_config(c))
    round-trips."""
    sp, p, g = cfg.system, cfg.pulse, cfg.grid
    lines = [
        "[system]",
        f"g = {sp.g!r}",
        f"gamma_c = {sp.gamma_c!r}",
        f"gamma_m = {sp.gamma_m!r}",
        f"n_bar_m = {sp.n_bar_m!r}",
        f"delta_c = {sp.delta_c!r}",
        f"omega_m = {sp.omega_m!r}",
        "",
        "[pulse]",
        f"alpha = {p.alpha!r}",
        f"beta = {p.beta!r}",
        f"t0 = {p.t0!r}",
        f"chi0 = {p.chi0!r}",
        f"delta_dev = {p.delta_dev!r}",
        "",
        "[grid]",
        f"dt = {g.dt!r}",
        f"t_start = {g.t_start!r}",
        f"t_end = {g.t_end!r}",
        "",
        "[run]",
        f"mode = {cfg.mode}",
        f"rwa = {str(cfg.rwa).lower()}",
        f"stride = {cfg.stride}",
        f"beta_min = {cfg.beta_min!r}",
        f"beta_max = {cfg.beta_max!r}",
        f"n_points = {cfg.n_points}",
        f"lock_chi0 = {str(cfg.lock_chi0).lower()}",
        f"detunings = {', '.join(repr(x) for x in cfg.detunings)}",
        f"deltas = {', '.join(repr(x) for x in cfg.deltas)}",
    ]
    if cfg.output_path is not None:
        lines.append(f"output = {cfg.output_path}")
    return "\n".join(lines) + "\n"
