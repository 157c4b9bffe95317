"""
System parameters.

 Group 1 - validation: positivity, R_C < R_E, alpha <= E_max
 Group 2 - records: byte keys, defaults for missing keys
 Group 3 - derived quantities: frame period, efficiency cycle
"""

from __future__ import annotations

import math

import pytest

from ponplan.model import ParamsError, SystemParams, Topology, TopologyError, efficiency_min_cycle, validate_params


# ── Group 1: validation ──────────────────────────────────────────────────────

def test_defaults_are_valid(default_params):
    params = validate_params(default_params)
    assert params == default_params
    assert params.alpha == 128
    assert params.e_max == 12000
    assert params.l_hdr == 208


def test_rate_order_violation():
    with pytest.raises(ParamsError) as error:
        validate_params(SystemParams(r_c=20e9))

    assert error.value.violations == ["R_C < R_E violated"]


def test_frame_larger_than_payload():
    with pytest.raises(ParamsError) as error:
        validate_params(SystemParams(alpha=20000))

    assert "alpha <= E_max violated" in error.value.violations


def test_every_violation_is_reported():
    with pytest.raises(ParamsError) as error:
        validate_params(SystemParams(d_b=-1.0, g=0.0, t_gap=math.inf))

    assert set(error.value.violations) == {"D_b must be strictly positive", "G must be strictly positive",
                                           "T_gap must be finite"}


def test_non_numeric_value():
    with pytest.raises(ParamsError) as error:
        validate_params(SystemParams(t_reg="soon"))

    assert error.value.violations == ["T_reg is not a number"]


def test_params_error_is_value_error():
    assert issubclass(ParamsError, ValueError)


def test_replace_validates(default_params):
    assert default_params.replace(d_b=100e-6).d_b == 100e-6

    with pytest.raises(ParamsError):
        default_params.replace(r_c=10e9)


# ── Group 2: records ─────────────────────────────────────────────────────────

def test_record_uses_bytes_for_sizes(default_params):
    record = default_params.to_record()

    assert record["alpha_bytes"] == 16
    assert record["e_max_bytes"] == 1500
    assert record["l_hdr_bytes"] == 26
    assert record["r_c_bps"] == 614.4e6
    assert SystemParams.from_record(record) == default_params


def test_record_missing_keys_take_defaults():
    params = SystemParams.from_record({"d_b_s": "100e-6", "alpha_bytes": "32", "unrelated": "x"})

    assert params.d_b == 100e-6
    assert params.alpha == 256
    assert params.r_e == 10e9


# ── Group 3: derived quantities ──────────────────────────────────────────────

def test_frame_period(default_params, hand_params):
    assert default_params.frame_period == pytest.approx(128 / 614.4e6)
    assert hand_params.frame_period == pytest.approx(1e-6)
    assert hand_params.frames_time(8) == pytest.approx(8e-6)


def test_efficiency_min_cycle(default_params):
    assert efficiency_min_cycle(14, default_params) == pytest.approx(14 * 1e-6 * 10e9 / (10e9 - 14 * 614.4e6))
    assert efficiency_min_cycle(17, default_params) == math.inf


def test_topology_onu_count():
    assert Topology(W=3, N=4).onu_count == 12


@pytest.mark.parametrize("W, N", [(1, 4), (0, 4), (3, 0)])
def test_topology_rejects(W, N):
    with pytest.raises(TopologyError):
        Topology(W=W, N=N)
