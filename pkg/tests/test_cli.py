import numpy as np
import pytest

from chirpcool.cli import main

FAST = """\
[system]
g = 1e-5
gamma_c = 0.02
gamma_m = 1e-5
n_bar_m = 10

[pulse]
alpha = 0.4
beta = 0.1
t0 = 10

[grid]
dt = 0.01
"""


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(FAST)
    return path


def test_simulate(config_path, tmp_path, capsys):
    out = tmp_path / "ts.csv"
    assert main(["simulate", "--config", str(config_path),
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("t,re_a_mean")
    assert len(lines) == 2002
    assert "final phonon" in capsys.readouterr().out


def test_simulate_stride(config_path, tmp_path):
    out = tmp_path / "ts.csv"
    assert main(["simulate", "--config", str(config_path), "--out", str(out),
                 "--stride", "100"]) == 0
    assert len(out.read_text().splitlines()) == 22


def test_simulate_deterministic(config_path, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["simulate", "--config", str(config_path), "--out", str(a)])
    main(["simulate", "--config", str(config_path), "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_oracle(config_path, tmp_path):
    out = tmp_path / "oracle.csv"
    assert main(["oracle", "--config", str(config_path),
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,u,v,w,phonon"
    first = lines[1].split(",")
    assert float(first[3]) == -10.0    # w(0) = -n_bar_m
    assert float(first[4]) == 10.0


def test_drive(config_path, tmp_path):
    out = tmp_path / "drive.csv"
    assert main(["drive", "--config", str(config_path),
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,chi,phase_rate,re_omega,im_omega"
    data = np.array([line.split(",") for line in lines[1:]], dtype=float)
    k_peak = np.argmax(data[:, 1])
    assert data[k_peak, 0] == pytest.approx(10.0, abs=0.1)


def test_sweep_beta_two_detunings(config_path, tmp_path):
    cfg = tmp_path / "sweep.ini"
    cfg.write_text(FAST + "\n[run]\nbeta_min = -0.1\nbeta_max = 0.1\n"
                   "n_points = 3\ndetunings = 1.0, 1.02\n")
    out = tmp_path / "sweep.csv"
    assert main(["sweep-beta", "--config", str(cfg), "--out", str(out)]) == 0
    f1 = tmp_path / "sweep_dc1.csv"
    f2 = tmp_path / "sweep_dc1.02.csv"
    assert f1.exists() and f2.exists()
    ax1 = [line.split(",")[0] for line in f1.read_text().splitlines()
           if not line.startswith(("#", "axis_value"))]
    ax2 = [line.split(",")[0] for line in f2.read_text().splitlines()
           if not line.startswith(("#", "axis_value"))]
    assert ax1 == ax2


def test_sweep_delta(config_path, tmp_path):
    out = tmp_path / "deltas.csv"
    assert main(["sweep-delta", "--config", str(config_path),
                 "--out", str(out)]) == 0
    rows = [line for line in out.read_text().splitlines()
            if not line.startswith(("#", "axis_value"))]
    assert len(rows) == 3


@pytest.mark.filterwarnings("ignore:chi0")
def test_optimize(config_path, capsys):
    assert main(["optimize", "--config", str(config_path)]) == 0
    assert "beta_opt" in capsys.readouterr().out


def test_tail(tmp_path, capsys):
    cfg = tmp_path / "tail.ini"
    cfg.write_text(FAST.replace("dt = 0.01", "dt = 0.01\nt_end = 60"))
    assert main(["tail", "--config", str(cfg)]) == 0
    assert "reheating" in capsys.readouterr().out


def test_missing_config_is_config_error(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "nope.ini")]) == 2


def test_bad_config_exit_code(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text(FAST.replace("[system]", "[system]\nbogus_key = 1"))
    assert main(["simulate", "--config", str(path)]) == 2


def test_unwritable_output(config_path):
    assert main(["simulate", "--config", str(config_path),
                 "--out", "/nonexistent-dir/x.csv"]) == 2


def test_rwa_flag(config_path, tmp_path):
    a, b = tmp_path / "full.csv", tmp_path / "rwa.csv"
    main(["simulate", "--config", str(config_path), "--out", str(a)])
    main(["simulate", "--config", str(config_path), "--out", str(b), "--rwa"])
    assert a.read_bytes() != b.read_bytes()
