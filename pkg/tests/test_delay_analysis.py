"""
Per-ONU delay analysis on the hand-computed N=3, W=3 plan.

 Group 1 - inter-slot gaps
 Group 2 - backlog recurrences (clamped registration, signed non-registration)
 Group 3 - worst-case delays and the full per-cycle delay list
 Group 4 - check_plan verdicts and reason ordering
"""

from __future__ import annotations

import pytest

from ponplan.delay_analysis import (
    FeasibilityReport,
    backlog_trace,
    check_plan,
    delay_profile,
    delay_profiles,
    inter_slot_gaps,
    worst_delays,
)
from ponplan.redistribution import OnuId

US = 1e-6


def _us(values):
    return pytest.approx([value * US for value in values], abs=1e-12)


# ── Group 1: gaps ────────────────────────────────────────────────────────────

def test_gaps_second_slot_onu(hand_plan):
    # (lambda=0, i_n=1) sits in registration slot i_r=1
    gaps_reg, gaps_nr = inter_slot_gaps(OnuId(0, 1), hand_plan)

    assert gaps_reg == _us([5, 5, 5])
    assert gaps_nr == _us([6, 6, 6, 6])


def test_gaps_sum_to_both_cycles(hand_plan):
    for i_n in range(3):
        for lam in range(3):
            gaps_reg, gaps_nr = inter_slot_gaps(OnuId(lam, i_n), hand_plan)
            assert gaps_reg[0] + gaps_nr[0] == pytest.approx(hand_plan.t_cn + hand_plan.t_cr)


def test_gaps_explicit_slot(hand_plan):
    gaps_reg, gaps_nr = inter_slot_gaps(OnuId(0, 0), hand_plan, i_r=4)

    assert gaps_reg[0] == pytest.approx(10 * US)
    assert gaps_nr[0] == pytest.approx(1 * US)


# ── Group 2: backlog ─────────────────────────────────────────────────────────

def test_backlog_grows_when_registration_under_serves(hand_plan, hand_params):
    backlog_reg, backlog_nr = backlog_trace(OnuId(0, 1), hand_plan, hand_params)

    assert backlog_reg == _us([1, 2, 3])
    assert backlog_nr == _us([1, -1, -3, -5])


def test_backlog_clamped_when_registration_over_serves(hand_plan, hand_params):
    # 10 frames per registration slot against 5 us of arrivals per cycle
    backlog_reg, backlog_nr = backlog_trace(OnuId(2, 0), hand_plan.replace(f_r=10), hand_params)

    assert backlog_reg == [0.0, 0.0, 0.0]
    assert backlog_nr == _us([-4, -6, -8, -10])


# ── Group 3: delays ──────────────────────────────────────────────────────────

def test_delay_profile_lists_every_cycle(hand_plan, hand_params):
    profile = delay_profile(OnuId(2, 0), hand_plan, hand_params)

    assert profile.i_r == 1
    assert profile.d_all == _us([7, 8, 9, 9, 7, 6, 6])
    assert profile.d_reg_last == pytest.approx(9 * US)
    assert profile.d_nr_first == pytest.approx(9 * US)
    assert profile.d_max == pytest.approx(9 * US)
    assert profile.b_nr_last == pytest.approx(-5 * US)


@pytest.mark.parametrize("onu, d_reg_last", [(OnuId(0, 0), 8), (OnuId(0, 1), 7), (OnuId(2, 2), 8), (OnuId(1, 2), 7)])
def test_worst_delays(hand_plan, hand_params, onu, d_reg_last):
    d_reg, d_nr = worst_delays(onu, hand_plan, hand_params)

    assert d_reg == pytest.approx(d_reg_last * US)
    assert d_nr == pytest.approx(9 * US)


def test_single_registration_cycle(hand_plan, hand_params):
    profile = delay_profile(OnuId(0, 1), hand_plan.replace(k_r=1), hand_params)

    assert profile.d_reg_last == pytest.approx(5 * US)
    assert profile.d_nr_first == pytest.approx(7 * US)


def test_profiles_cover_every_onu(hand_plan, hand_params):
    profiles = delay_profiles(hand_plan, hand_params)

    assert len(profiles) == 9
    assert len({profile.onu for profile in profiles}) == 9
    for profile in profiles:
        assert profile == delay_profile(profile.onu, hand_plan, hand_params)


# ── Group 4: check_plan ──────────────────────────────────────────────────────

def test_hand_plan_feasible(hand_plan, hand_params):
    report = check_plan(hand_plan, hand_params)

    assert report.feasible
    assert report.verdict == "FEASIBLE"
    assert report.worst_delay == pytest.approx(9 * US)
    assert all(entry.verdict == "ok" for entry in report.onus)
    assert list(report.onus[0].to_record()) == ["lambda", "i_n", "i_r", "d_reg_last_s", "d_nr_first_s",
                                                "b_nr_last_s", "verdict"]


@pytest.mark.parametrize("overrides, verdict", [
    ({"d_b": 8.5e-6}, "INFEASIBLE(delay)"),
    ({"d_b": 5.5e-6}, "INFEASIBLE(cycle,delay)"),
    ({"t_reg": 16e-6}, "INFEASIBLE(window)"),
    ({"t_gap": 20e-6}, "INFEASIBLE(gap)"),
])
def test_parameter_violations(hand_plan, hand_params, overrides, verdict):
    assert check_plan(hand_plan, hand_params.replace(**overrides)).verdict == verdict


def test_undersized_non_registration_slots(hand_plan, hand_params):
    # f_n = 6 serves exactly one cycle of arrivals: capacity holds, backlog never drains
    report = check_plan(hand_plan.replace(f_n=6), hand_params)
    assert report.reasons == ("drain",)
    assert report.onus[0].b_nr_last == pytest.approx(3 * US)

    report = check_plan(hand_plan.replace(f_n=5), hand_params)
    assert report.reasons == ("capacity", "drain")


def test_disabled_checks(hand_plan, hand_params):
    params = hand_params.replace(t_reg=16e-6, t_gap=20e-6)

    assert check_plan(hand_plan, params).reasons == ("window", "gap")
    assert check_plan(hand_plan, params, check_window=False, check_gap=False).feasible


def test_exact_gap(hand_plan, hand_params):
    assert check_plan(hand_plan, hand_params.replace(t_gap=24e-6), exact_gap=True).feasible
    assert check_plan(hand_plan, hand_params, exact_gap=True).reasons == ("gap",)


def test_bound_all_cycles(hand_plan, hand_params):
    # Over-serving registration slots: the dominant pair stays at 6 us, the first registration slot waits 7 us
    plan = hand_plan.replace(f_r=10)
    params = hand_params.replace(d_b=6.5e-6)

    assert check_plan(plan, params).feasible
    assert check_plan(plan, params, bound_all_cycles=True).reasons == ("delay",)


def test_reason_order_is_fixed():
    assert FeasibilityReport.REASONS == ("capacity", "cycle", "window", "gap", "delay", "drain")
