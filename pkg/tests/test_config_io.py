import numpy as np
import pytest

from chirpcool import (PulseParams, SystemParams, SweepResult, TimeGrid,
                       dump_config, emit_sweep, emit_timeseries, load_sweep,
                       mean_field_solve, parse_config, propagate_covariance)
from chirpcool.errors import ConfigError
from chirpcool.experiments import sweep_beta

MINIMAL = """\
[system]
g = 1.147e-5
gamma_c = 0.0435
gamma_m = 1.768e-5
n_bar_m = 1000

[pulse]
alpha = 0.14
beta = 0.04
t0 = 40
"""

HZ_FORM = """\
[system]
omega_m_hz = 73.5e6
g_hz = 843.1
gamma_c_hz = 3.2e6
gamma_m_hz = 1.3e3
n_bar_m = 1000

[pulse]
alpha = 0.14
beta = 0.04
t0 = 40
"""


class TestParseConfig:
    def test_minimal_defaults(self):
        cfg = parse_config(MINIMAL)
        assert cfg.system.delta_c == 1.0
        assert cfg.system.n_bar_m == 1000.0
        assert cfg.pulse.chi0 == pytest.approx(0.0728011, abs=1e-7)
        assert cfg.grid.dt == 1e-3
        assert cfg.grid.t_end == pytest.approx(80.0)
        assert cfg.mode == "simulate"
        assert cfg.rwa is False

    def test_hz_conversion(self):
        cfg = parse_config(HZ_FORM)
        ref = parse_config(MINIMAL)
        assert cfg.system.gamma_c == pytest.approx(ref.system.gamma_c, rel=5e-3)
        assert cfg.system.gamma_m == pytest.approx(ref.system.gamma_m, rel=5e-3)
        assert cfg.system.g == pytest.approx(ref.system.g, rel=5e-3)
        assert cfg.system.omega_m == 1.0

    def test_mixed_unit_forms_rejected(self):
        bad = HZ_FORM.replace("n_bar_m = 1000", "n_bar_m = 1000\ngamma_c = 0.04")
        with pytest.raises(ConfigError, match="both"):
            parse_config(bad)

    def test_unknown_key_named(self):
        bad = MINIMAL + "\n[run]\nfrobnicate = 1\n"
        with pytest.raises(ConfigError, match="frobnicate"):
            parse_config(bad)

    def test_missing_required_key(self):
        bad = MINIMAL.replace("g = 1.147e-5\n", "")
        with pytest.raises(ConfigError, match="'g'"):
            parse_config(bad)

    def test_negative_rate_rejected(self):
        bad = MINIMAL.replace("gamma_c = 0.0435", "gamma_c = -0.1")
        with pytest.raises(ConfigError, match="gamma_c"):
            parse_config(bad)

    def test_unknown_mode_rejected(self):
        bad = MINIMAL + "\n[run]\nmode = frobnicate\n"
        with pytest.raises(ConfigError, match="mode"):
            parse_config(bad)

    def test_run_section_lists(self):
        cfg = parse_config(MINIMAL + "\n[run]\ndetunings = 1.0, 1.02\n"
                           "deltas = -0.1, 0, 0.1\nn_points = 21\n")
        assert cfg.detunings == (1.0, 1.02)
        assert cfg.deltas == (-0.1, 0.0, 0.1)
        assert cfg.n_points == 21

    def test_dump_round_trip(self):
        cfg = parse_config(MINIMAL + "\n[run]\nmode = sweep-beta\nrwa = true\n")
        again = parse_config(dump_config(cfg))
        assert again == cfg


class TestEmitTimeseries:
    @pytest.fixture
    def small_run(self):
        sp = SystemParams(g=1e-5, gamma_c=0.02, gamma_m=1e-5, n_bar_m=10.0)
        p = PulseParams(alpha=0.4, beta=0.1, t0=10.0)
        grid = TimeGrid(0.0, 20.0, 1e-2)
        return mean_field_solve(sp, p, grid), propagate_covariance(sp, p, grid)

    def test_columns_and_rows(self, small_run, tmp_path):
        traj, Rseq = small_run
        path = tmp_path / "ts.csv"
        emit_timeseries(traj, Rseq, path)
        lines = path.read_text().splitlines()
        assert lines[0] == ("t,re_a_mean,im_a_mean,re_b_mean,im_b_mean,"
                            "re_omega,im_omega,phonon,photon")
        assert len(lines) == 1 + traj.grid.n_steps + 1
        first = lines[1].split(",")
        assert float(first[0]) == 0.0
        assert float(first[7]) == 10.0  # initial phonon = n_bar_m

    def test_stride_keeps_last_row(self, small_run, tmp_path):
        traj, Rseq = small_run
        path = tmp_path / "ts.csv"
        emit_timeseries(traj, Rseq, path, stride=7)
        lines = path.read_text().splitlines()
        assert float(lines[-1].split(",")[0]) == pytest.approx(20.0)

    def test_deterministic_bytes(self, small_run, tmp_path):
        traj, Rseq = small_run
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_timeseries(traj, Rseq, a)
        emit_timeseries(traj, Rseq, b)
        assert a.read_bytes() == b.read_bytes()

    def test_zero_pulse_constant_phonon(self, tmp_path):
        sp = SystemParams(g=1e-5, n_bar_m=7.0)
        p = PulseParams(alpha=0.4, beta=0.0, t0=10.0, chi0=0.0)
        grid = TimeGrid(0.0, 20.0, 1e-1)
        traj = mean_field_solve(sp, p, grid)
        Rseq = propagate_covariance(sp, p, grid)
        path = tmp_path / "ts.csv"
        emit_timeseries(traj, Rseq, path)
        phonons = {line.split(",")[7] for line in
                   path.read_text().splitlines()[1:]}
        assert phonons == {"7"}

    def test_unwritable_path(self, small_run):
        traj, Rseq = small_run
        with pytest.raises(ConfigError):
            emit_timeseries(traj, Rseq, "/nonexistent-dir/x.csv")


class TestEmitSweep:
    def test_round_trip(self, tmp_path):
        sp = SystemParams(g=1e-5, gamma_c=0.02, n_bar_m=10.0)
        p = PulseParams(alpha=0.4, beta=0.1, t0=10.0)
        result = sweep_beta(sp, p, [0.0, 0.1], dt=1e-2)
        path = tmp_path / "sweep.csv"
        emit_sweep(result, path)
        loaded = load_sweep(path)
        assert loaded.axis_name == result.axis_name
        assert np.array_equal(loaded.axis_values, result.axis_values)
        assert np.array_equal(loaded.final_phonon, result.final_phonon)
        assert np.array_equal(loaded.final_photon, result.final_photon)
        assert loaded.metadata == result.metadata

    def test_metadata_comments(self, tmp_path):
        result = SweepResult("beta", np.array([0.0]), np.array([1.0]),
                             np.array([2.0]), {"g": 1e-5, "rwa": False})
        path = tmp_path / "sweep.csv"
        emit_sweep(result, path)
        text = path.read_text()
        assert "# axis_name = beta" in text
        assert "# g = 1e-05" in text
        assert "# rwa = False" in text
        assert text.strip().splitlines()[-1].startswith("0.0,")
