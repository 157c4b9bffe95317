"""
Shared fixtures.

default_params   system defaults (10 Gbps line, 614.4 Mbps eCPRI)
scaled_params    scaled-down system used for exhaustive comparisons
hand_params      round numbers: one basic frame every 1 us
hand_plan        N=3, W=3 plan over hand_params with hand-computed delays
"""

from __future__ import annotations

import pytest

from ponplan.core import Core
from ponplan.model import SystemParams
from ponplan.slotting import CyclePlan


@pytest.fixture(autouse=True)
def quiet_log():
    level = Core.log_level
    Core.log_level = Core.LOG_OUTPUT
    yield
    Core.log_level = level


@pytest.fixture
def default_params():
    return SystemParams()


@pytest.fixture
def scaled_params():
    return SystemParams(r_e=1e9, r_c=200e6, d_b=50e-6, t_reg=20e-6, t_gap=1e-3)


@pytest.fixture
def hand_params():
    # alpha/R_C = 1 us; minimum slot for f frames (f <= 120) is (f + 4) * 0.1 us
    return SystemParams(r_e=1e9, r_c=1e8, d_b=10e-6, t_reg=12e-6, t_gap=30e-6,
                        g=0.2e-6, alpha=100, e_max=12000, l_hdr=200)


@pytest.fixture
def hand_plan():
    # T_cn = 6 us, T_cr = 5 us, window 15 us, gap 24 us
    return CyclePlan(N=3, W=3, f_n=8, f_r=4, k_n=4, k_r=3, t_sn=2e-6, t_sr=1e-6)
