import numpy as np
import pytest

from chirpcool import (PulseParams, SystemParams, TimeGrid,
                       mean_field_solve, propagate_covariance)

# experimentally realistic rates, in units of the mechanical frequency
PAPER_G = 1.147e-5
PAPER_GAMMA_C = 0.0435
PAPER_GAMMA_M = 1.768e-5
PAPER_NBAR = 1000.0


@pytest.fixture(scope="session")
def paper_sp():
    return SystemParams(g=PAPER_G, gamma_c=PAPER_GAMMA_C,
                        gamma_m=PAPER_GAMMA_M, n_bar_m=PAPER_NBAR)


@pytest.fixture(scope="session")
def paper_pulse():
    return PulseParams(alpha=0.14, beta=0.04, t0=40.0)


@pytest.fixture(scope="session")
def pulse_grid():
    return TimeGrid(0.0, 80.0, 1e-3)


@pytest.fixture(scope="session")
def paper_run(paper_sp, paper_pulse, pulse_grid):
    """Full (non-RWA) dissipative covariance run at the reference
    parameters; shared across modules since it is the expensive piece."""
    return propagate_covariance(paper_sp, paper_pulse, pulse_grid)


@pytest.fixture(scope="session")
def paper_traj(paper_sp, paper_pulse, pulse_grid):
    return mean_field_solve(paper_sp, paper_pulse, pulse_grid)


@pytest.fixture(scope="session")
def ideal_rwa_run(paper_pulse, pulse_grid):
    """Lossless resonant RWA run used by the Bloch-oracle comparisons."""
    sp = SystemParams(g=PAPER_G, n_bar_m=PAPER_NBAR)
    return propagate_covariance(sp, paper_pulse, pulse_grid, rwa=True)
