#! /usr/bin/env python3

#
#   This file is part of ponplan
#
#   SPDX-FileCopyrightText: 2026  ponplan contributors
#
#   SPDX-License-Identifier: GPL-3.0-only WITH LicenseRef-ponplan-graphviz-linking-source-exception
#


import dataclasses
from ponplan.core import Core
from ponplan.redistribution import enumerate_assignments, map_reg_slot


@dataclasses.dataclass(frozen=True)
class DelayProfile:
    """ Analytic gaps, backlogs (time-equivalent) and delays of one ONU over a super-cycle """
    onu: object
    i_r: int
    gaps_reg: list
    gaps_nr: list
    backlog_reg: list
    backlog_nr: list
    d_reg_last: float
    d_nr_first: float
    d_all: list

    @property
    def b_nr_last(self):
        return self.backlog_nr[-1]

    @property
    def d_max(self):
        return max(self.d_all)


@dataclasses.dataclass(frozen=True)
class OnuVerdict:
    onu: object
    i_r: int
    d_reg_last: float
    d_nr_first: float
    b_nr_last: float
    d_max: float
    reasons: tuple

    @property
    def verdict(self):
        return "ok" if not self.reasons else ",".join(self.reasons)

    def to_record(self):
        return {"lambda": self.onu.lam, "i_n": self.onu.i_n, "i_r": self.i_r,
                "d_reg_last_s": self.d_reg_last, "d_nr_first_s": self.d_nr_first,
                "b_nr_last_s": self.b_nr_last, "verdict": self.verdict}


@dataclasses.dataclass(frozen=True)
class FeasibilityReport:
    """ Verdict of check_plan, with per-ONU detail """
    REASONS = ("capacity", "cycle", "window", "gap", "delay", "drain")

    plan: object
    onus: list
    reasons: tuple

    @property
    def feasible(self):
        return not self.reasons

    @property
    def verdict(self):
        if self.feasible:
            return "FEASIBLE"

        return "INFEASIBLE({})".format(",".join(self.reasons))

    @property
    def worst_delay(self):
        return max(max(entry.d_reg_last, entry.d_nr_first) for entry in self.onus)


def inter_slot_gaps(onu, plan, i_r=None):
    """ Gaps preceding each registration slot and each non-registration slot of the ONU """
    if i_r is None:
        i_r = map_reg_slot(onu, plan.N, plan.W).i_r

    gaps_reg = [(plan.N - onu.i_n) * plan.t_sn + i_r * plan.t_sr] + [plan.t_cr] * (plan.k_r - 1)
    gaps_nr = [onu.i_n * plan.t_sn + (plan.n_r - i_r) * plan.t_sr] + [plan.t_cn] * (plan.k_n - 1)

    return gaps_reg, gaps_nr


def backlog_trace(onu, plan, params, i_r=None):
    """ Residual backlog after each registration and non-registration slot """
    gaps_reg, gaps_nr = inter_slot_gaps(onu, plan, i_r)
    served_r = params.frames_time(plan.f_r)
    served_n = params.frames_time(plan.f_n)

    # Registration backlog never drops below an empty queue
    first = max(0.0, gaps_reg[0] - served_r)
    backlog_reg = [max(0.0, first + k * (plan.t_cr - served_r)) for k in range(plan.k_r)]

    # Negative values mean spare capacity and are kept
    first = backlog_reg[-1] + gaps_nr[0] - served_n
    backlog_nr = [first - k * (served_n - plan.t_cn) for k in range(plan.k_n)]

    return backlog_reg, backlog_nr


def delay_profile(onu, plan, params, i_r=None):
    """ Full DelayProfile of an ONU """
    if i_r is None:
        i_r = map_reg_slot(onu, plan.N, plan.W).i_r

    gaps_reg, gaps_nr = inter_slot_gaps(onu, plan, i_r)
    backlog_reg, backlog_nr = backlog_trace(onu, plan, params, i_r)

    # Each delay is the preceding gap plus the backlog left by the previous slot
    d_all = [gaps_reg[0]]
    d_all.extend(gaps_reg[k] + backlog_reg[k - 1] for k in range(1, plan.k_r))
    d_all.append(gaps_nr[0] + backlog_reg[-1])
    d_all.extend(gaps_nr[k] + max(0.0, backlog_nr[k - 1]) for k in range(1, plan.k_n))

    return DelayProfile(onu, i_r, gaps_reg, gaps_nr, backlog_reg, backlog_nr,
                        d_all[plan.k_r - 1], d_all[plan.k_r], d_all)


def worst_delays(onu, plan, params):
    """ (delay in the last registration cycle, delay in the first non-registration cycle) """
    profile = delay_profile(onu, plan, params)
    return profile.d_reg_last, profile.d_nr_first


def delay_profiles(plan, params):
    """ Profiles of all N*W ONUs; ONUs sharing (i_n, i_r) share one evaluation """
    cache = {}
    profiles = []

    for entry in enumerate_assignments(plan.N, plan.W):
        key = (entry.onu.i_n, entry.i_r)
        if key not in cache:
            cache[key] = delay_profile(entry.onu, plan, params, entry.i_r)

        profiles.append(dataclasses.replace(cache[key], onu=entry.onu))

    return profiles


def check_plan(plan, params, check_window=True, check_gap=True, exact_gap=False, bound_all_cycles=False):
    """ Evaluate every feasibility condition of a plan """
    reasons = set()

    # System-wide conditions
    if not Core.within(plan.t_cn, params.frames_time(plan.f_n)):
        reasons.add("capacity")
    if not Core.within(plan.t_cn, params.d_b):
        reasons.add("cycle")
    if check_window and not Core.within(params.t_reg, plan.window):
        reasons.add("window")
    if check_gap:
        if exact_gap and abs(plan.gap - params.t_gap) > 1e-9 * params.t_gap:
            reasons.add("gap")
        elif not Core.within(plan.gap, params.t_gap):
            reasons.add("gap")

    # Per-ONU conditions
    onus = []
    for profile in delay_profiles(plan, params):
        onu_reasons = []
        bound = profile.d_max if bound_all_cycles else max(profile.d_reg_last, profile.d_nr_first)

        if not Core.within(bound, params.d_b):
            onu_reasons.append("delay")
        if not Core.within(profile.b_nr_last, 0.0):
            onu_reasons.append("drain")

        reasons.update(onu_reasons)
        onus.append(OnuVerdict(profile.onu, profile.i_r, profile.d_reg_last, profile.d_nr_first,
                               profile.b_nr_last, profile.d_max, tuple(onu_reasons)))

    ordered = tuple(reason for reason in FeasibilityReport.REASONS if reason in reasons)
    Core.log("check_plan N={} W={} f_n={} f_r={} k_n={} k_r={}: {}".format(
        plan.N, plan.W, plan.f_n, plan.f_r, plan.k_n, plan.k_r, ordered or "feasible"), Core.LOG_TRACE)

    return FeasibilityReport(plan, onus, ordered)
