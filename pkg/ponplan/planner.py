#! /usr/bin/env python3

#
#   This file is part of ponplan
#
#   SPDX-FileCopyrightText: 2026  ponplan contributors
#
#   SPDX-License-Identifier: GPL-3.0-only WITH LicenseRef-ponplan-graphviz-linking-source-exception
#


import dataclasses
import math
from ponplan.core import Core
from ponplan.delay_analysis import check_plan
from ponplan.model import efficiency_min_cycle
from ponplan.redistribution import compute_nr, enumerate_assignments
from ponplan.slotting import CyclePlan, min_slot_duration

# Third party modules
import numpy as np


@dataclasses.dataclass(frozen=True)
class SearchLimits:
    """ Optional caps on the enumerated integers (None = natural bound) """
    f_max: int = None
    k_n_max: int = None
    k_r_max: int = None


@dataclasses.dataclass
class SearchStats:
    iterations: int = 0
    candidates: int = 0


@dataclasses.dataclass(frozen=True)
class PlanResult:
    """ Outcome of solve() for one wavelength count """
    W: int
    n_star: int
    plan: CyclePlan
    n_baseline: int
    total_proposed: int
    total_baseline: int
    gain_pct: float
    iterations: int
    candidates: int
    min_efficient_cycle: float

    @property
    def gain_defined(self):
        return self.gain_pct is not None

    def to_record(self):
        plan = self.plan
        return {
            "w": self.W,
            "n_star": self.n_star,
            "n_baseline": self.n_baseline,
            "total_proposed": self.total_proposed,
            "total_baseline": self.total_baseline,
            "gain_pct": self.gain_pct,
            "window_s": plan.window if plan else None,
            "gap_s": plan.gap if plan else None,
            "f_n": plan.f_n if plan else None,
            "f_r": plan.f_r if plan else None,
            "k_n": plan.k_n if plan else None,
            "k_r": plan.k_r if plan else None,
            "t_sn_s": plan.t_sn if plan else None,
            "t_sr_s": plan.t_sr if plan else None}


def n_max(params):
    """ Largest N any wavelength can carry: floor(R_E/R_C) """
    return math.floor(params.r_e / params.r_c)


def standard_epon_delay_bound(t_reg, t_c):
    """ Delay floor of standard registration: a full window plus one cycle """
    if t_reg < 0 or t_c < 0:
        raise ValueError("durations must be non-negative")

    return t_reg + t_c


def gain(total_proposed, total_baseline):
    """ Percentage gain over the baseline, None when the baseline is empty """
    if total_baseline == 0:
        return None

    return 100.0 * (total_proposed - total_baseline) / total_baseline


def _within(values, limits):
    """ Array form of Core.within """
    return values <= limits + Core.EPSILON * np.maximum(1.0, np.abs(limits))


class Planner:
    """ Descending-N feasibility search with an exact inner search over slot and cycle counts """
    VARIANT_MIN, VARIANT_STRETCHED = range(2)

    def __init__(self, params, check_window=True, check_gap=True, exact_gap=False,
                 bound_all_cycles=False, limits=None, host=-1):
        self.params = params
        self.check_window = check_window
        self.check_gap = check_gap
        self.exact_gap = exact_gap
        self.bound_all_cycles = bound_all_cycles
        self.limits = limits or SearchLimits()
        self.host = host
        self.stats = SearchStats()

        self._frames, self._durations = self._slot_table()

    def checks(self):
        """ check_plan keyword arguments matching this search """
        return {"check_window": self.check_window, "check_gap": self.check_gap,
                "exact_gap": self.exact_gap, "bound_all_cycles": self.bound_all_cycles}

    def _slot_table(self):
        """ Frame counts and minimum slot durations up to the largest count fitting in D_b """
        p = self.params
        count = int(p.d_b * p.r_e / p.alpha) + 1
        if self.limits.f_max is not None:
            count = min(count, self.limits.f_max)

        frames = np.arange(1, count + 1, dtype=np.int64)
        if float(p.alpha).is_integer() and float(p.e_max).is_integer():
            packets = -(-(frames * int(p.alpha)) // int(p.e_max))
        else:
            packets = np.ceil(frames * p.alpha / p.e_max)

        return frames, (frames * p.alpha + packets * p.l_hdr) / p.r_e + p.g

    def _cap(self, value, limit):
        return value if limit is None else min(value, limit)

    def _non_registration(self, N, t_sn_min):
        """ (T_sn, k_n) with the most non-registration cycles the gap admits, or (None, 0) """
        p = self.params

        if self.exact_gap:
            # Stretch T_sn so that k_n cycles fill T_gap exactly
            k_n = int(p.t_gap / (N * t_sn_min))
            while Core.within(t_sn_min, p.t_gap / ((k_n + 1) * N)):
                k_n += 1
            while k_n > 0 and not Core.within(t_sn_min, p.t_gap / (k_n * N)):
                k_n -= 1

            k_n = self._cap(k_n, self.limits.k_n_max)
            return (p.t_gap / (k_n * N), k_n) if k_n > 0 else (None, 0)

        t_cn = N * t_sn_min
        k_n = int(p.t_gap / t_cn)
        while Core.within((k_n + 1) * t_cn, p.t_gap):
            k_n += 1
        while k_n > 0 and not Core.within(k_n * t_cn, p.t_gap):
            k_n -= 1

        if k_n == 0:
            if self.check_gap:
                return None, 0
            k_n = 1

        return t_sn_min, self._cap(k_n, self.limits.k_n_max)

    def _assess(self, ctx, t_sr, served_r, k_r):
        """ Evaluate registration candidates (arrays over f_r) against one non-registration setting """
        p = self.params
        N, n_r, i_n, i_r = ctx["N"], ctx["n_r"], ctx["i_n"], ctx["i_r"]
        t_sn, t_cn, served_n, k_n = ctx["t_sn"], ctx["t_cn"], ctx["served_n"], ctx["k_n"]
        self.stats.candidates += len(t_sr)

        t_cr = n_r * t_sr
        gap_reg = (N - i_n)[None, :] * t_sn + i_r[None, :] * t_sr[:, None]
        gap_nr = i_n[None, :] * t_sn + (n_r - i_r)[None, :] * t_sr[:, None]

        # Registration backlog, clamped at an empty queue
        growth = (t_cr - served_r)[:, None]
        k = k_r[:, None]
        first = np.maximum(0.0, gap_reg - served_r[:, None])
        last = np.maximum(0.0, first + (k - 1) * growth)
        prev = np.where(k >= 2, np.maximum(0.0, first + (k - 2) * growth), 0.0)

        d_reg_last = np.where(k >= 2, t_cr[:, None] + prev, gap_reg)
        d_nr_first = gap_nr + last
        backlog_nr = last + gap_nr - served_n
        drain = backlog_nr - (k_n - 1) * (served_n - t_cn)

        delay_ok = _within(np.maximum(d_reg_last, d_nr_first), p.d_b)
        if self.bound_all_cycles:
            delay_ok &= _within(gap_reg, p.d_b)
            delay_ok &= (k < 2) | _within(t_cr[:, None] + first, p.d_b)
            if k_n >= 2:
                delay_ok &= _within(t_cn + np.maximum(0.0, backlog_nr), p.d_b)

        delay_ok = delay_ok.all(axis=1)
        drain_ok = _within(drain, 0.0).all(axis=1)
        window_ok = _within(p.t_reg, k_r * t_cr) if self.check_window else np.ones(len(t_sr), dtype=bool)

        return delay_ok & window_ok, delay_ok & window_ok & drain_ok

    def _k_r_bounds(self, ctx, t_sr, served_r):
        """ Smallest window-satisfying k_r and the k_r past which backlog is fully cleared """
        p = self.params
        t_cr = ctx["n_r"] * t_sr

        if self.check_window:
            k_min = np.maximum(1, np.ceil(p.t_reg / t_cr).astype(np.int64))
            k_min = np.where(_within(p.t_reg, (k_min - 1) * t_cr) & (k_min > 1), k_min - 1, k_min)
        else:
            k_min = np.ones(len(t_sr), dtype=np.int64)

        # Over-serving registration slots drain backlog; beyond clearance nothing changes
        growth = t_cr - served_r
        gap_reg = (ctx["N"] - ctx["i_n"])[None, :] * ctx["t_sn"] + ctx["i_r"][None, :] * t_sr[:, None]
        first = np.maximum(0.0, gap_reg - served_r[:, None]).max(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            clear = np.where(growth < 0, np.ceil(first / np.where(growth < 0, -growth, 1.0)), 0.0)
        k_lim = np.where(growth < 0, np.maximum(k_min, clear.astype(np.int64) + 2), k_min)

        if self.limits.k_r_max is not None:
            k_lim = np.minimum(k_lim, self.limits.k_r_max)

        return k_min, k_lim

    def _scan_f_n(self, ctx, f_r, t_sr_min, served_r):
        """ All feasible registration candidates for one f_n; (candidates, still possible) """
        p = self.params
        found = []
        cap = self.limits.k_r_max

        # Minimum registration slots: only the dominant k_r of each f_r matters
        k_min, k_lim = self._k_r_bounds(ctx, t_sr_min, served_r)
        usable = k_min <= (cap if cap is not None else k_min)
        possible = False

        for k_r, mask in ((k_min, usable), (k_lim, usable & (k_lim != k_min))):
            idx = np.flatnonzero(mask)
            if not len(idx):
                continue
            open_, ok = self._assess(ctx, t_sr_min[idx], served_r[idx], k_r[idx])
            possible |= bool(open_.any())

            for pos in np.flatnonzero(ok):
                found.append((int(idx[pos]), int(k_r[idx[pos]]), self.VARIANT_MIN))

        # Shortest window between the two for over-serving slots (feasibility is monotone there)
        at_min = set((index, k_r) for index, k_r, _ in found if k_r == k_min[index])
        for index, k_r, variant in list(found):
            if k_r == k_lim[index] and k_r > k_min[index] + 1 and (index, int(k_min[index])) not in at_min:
                low, high = int(k_min[index]), k_r
                while high - low > 1:
                    mid = (low + high) // 2
                    _, ok = self._assess(ctx, t_sr_min[index:index + 1], served_r[index:index + 1],
                                         np.array([mid], dtype=np.int64))
                    if ok[0]:
                        high = mid
                    else:
                        low = mid
                found.append((index, high, variant))

        # Stretched registration slots: window exactly T_reg
        k_r = 1
        while cap is None or k_r <= cap:
            stretched = p.t_reg / (k_r * ctx["n_r"])
            idx = np.flatnonzero(stretched > t_sr_min)
            if not len(idx):
                break

            t_sr = np.full(len(idx), stretched)
            open_, ok = self._assess(ctx, t_sr, served_r[idx], np.full(len(idx), k_r, dtype=np.int64))
            possible |= bool(open_.any())

            for pos in np.flatnonzero(ok):
                found.append((int(idx[pos]), k_r, self.VARIANT_STRETCHED))
            k_r += 1

        return found, possible

    def inner_feasible(self, N, W):
        """ A plan at (N, W) passing check_plan, or None """
        p = self.params
        self.stats.iterations += 1
        if N < 1 or N > n_max(p):
            return None

        n_r = compute_nr(N, W)
        pairs = sorted(set((entry.onu.i_n, entry.i_r) for entry in enumerate_assignments(N, W)))
        ctx = {"N": N, "n_r": n_r,
               "i_n": np.array([pair[0] for pair in pairs], dtype=float),
               "i_r": np.array([pair[1] for pair in pairs], dtype=float)}

        # ONU (0, 0) waits a whole registration cycle before its first non-registration slot
        usable = _within(n_r * self._durations, p.d_b)
        f_r = self._frames[usable]
        t_sr_min = self._durations[usable]
        served_r = f_r * p.alpha / p.r_c
        if not len(f_r):
            return None

        best = None
        for f_n, t_sn_min in zip(self._frames.tolist(), self._durations.tolist()):
            if not Core.within(N * t_sn_min, p.d_b):
                break

            t_sn, k_n = self._non_registration(N, t_sn_min)
            if t_sn is None or not Core.within(N * t_sn, p.d_b):
                break

            served_n = f_n * p.alpha / p.r_c
            if not Core.within(N * t_sn, served_n):
                continue

            ctx.update({"t_sn": t_sn, "t_cn": N * t_sn, "served_n": served_n, "k_n": k_n})
            found, possible = self._scan_f_n(ctx, f_r, t_sr_min, served_r)

            # Delays only grow with T_sn, so no larger f_n can succeed
            if not possible:
                break

            plans = []
            for index, k_r, variant in found:
                t_sr = t_sr_min[index] if variant == self.VARIANT_MIN else p.t_reg / (k_r * n_r)
                plan = CyclePlan(N, W, f_n, int(f_r[index]), k_n, k_r, t_sn, float(t_sr), self.host)
                plans.append(((round(plan.window, 15), t_sn), (index, k_r, variant), plan))

            for key, _, plan in sorted(plans, key=lambda entry: entry[:2]):
                if best is not None and key >= best[0]:
                    break
                if check_plan(plan, p, **self.checks()).feasible:
                    best = (key, plan)
                    break

                Core.log("Warning: candidate rejected on re-check ({})".format(plan), Core.LOG_DEBUG)

            if best is not None and self.check_window and Core.within(best[1].window, p.t_reg):
                break

        plan = best[1] if best else None
        Core.log("N={} W={}: {}".format(N, W, "feasible" if plan else "infeasible"), Core.LOG_DEBUG)
        return plan

    def solve(self, W):
        """ Largest feasible N for W, with baseline comparison """
        p = self.params
        self.stats = SearchStats()
        n_star, plan = 0, None

        for N in range(n_max(p), 0, -1):
            plan = self.inner_feasible(N, W)
            if plan:
                n_star = N
                break

        n_baseline = self.solve_baseline(W)
        total_proposed = n_star * W
        total_baseline = n_baseline * (W - 1)

        return PlanResult(W, n_star, plan, n_baseline, total_proposed, total_baseline,
                          gain(total_proposed, total_baseline), self.stats.iterations,
                          self.stats.candidates, efficiency_min_cycle(max(n_star, 1), p))

    def solve_baseline(self, W):
        """ Per-wavelength N when one wavelength is reserved for registration """
        p = self.params
        if W < 2:
            raise ValueError("W >= 2 required")

        served = self._frames * p.alpha / p.r_c
        for n in range(n_max(p), 0, -1):
            cycle = n * self._durations
            if (_within(cycle, p.d_b) & _within(cycle, served)).any():
                return n

        return 0


def inner_feasible(N, W, params, **options):
    return Planner(params, **options).inner_feasible(N, W)


def solve(W, params, **options):
    return Planner(params, **options).solve(W)


def solve_baseline(W, params, **options):
    return Planner(params, **options).solve_baseline(W)


def brute_force_feasible(N, W, params, limits, **checks):
    """ Exhaustive enumeration of the plan family; returns the first feasible plan or None """
    host = checks.pop("host", -1)

    for f_n in range(1, limits.f_max + 1):
        t_sn_min = min_slot_duration(f_n, params)
        for k_n in range(1, limits.k_n_max + 1):
            t_sn = t_sn_min
            if checks.get("exact_gap"):
                t_sn = params.t_gap / (k_n * N)
                if not Core.within(t_sn_min, t_sn):
                    continue

            for f_r in range(1, limits.f_max + 1):
                t_sr_min = min_slot_duration(f_r, params)
                for k_r in range(1, limits.k_r_max + 1):
                    options = [t_sr_min]
                    stretched = params.t_reg / (k_r * compute_nr(N, W))
                    if stretched > t_sr_min:
                        options.append(stretched)

                    for t_sr in options:
                        plan = CyclePlan(N, W, f_n, f_r, k_n, k_r, t_sn, t_sr, host)
                        if check_plan(plan, params, **checks).feasible:
                            return plan

    return None


def exhaustive_feasible(N, W, params, limits, check_window=True, check_gap=True):
    """ Array form of brute_force_feasible for large limits; returns the first feasible plan or None """
    p = params
    n_r = compute_nr(N, W)
    pairs = sorted(set((entry.onu.i_n, entry.i_r) for entry in enumerate_assignments(N, W)))
    i_n = np.array([pair[0] for pair in pairs], dtype=float)
    i_r = np.array([pair[1] for pair in pairs], dtype=float)

    frames = np.arange(1, limits.f_max + 1)
    durations = np.array([min_slot_duration(f, p) for f in frames.tolist()])
    served = frames * p.alpha / p.r_c

    # Registration candidates: every (f_r, k_r) with minimum and, when longer, window-filling slots
    index, k_r = (grid.ravel() for grid in np.meshgrid(np.arange(len(frames)), np.arange(1, limits.k_r_max + 1),
                                                       indexing="ij"))
    stretched = p.t_reg / (k_r * n_r)
    longer = stretched > durations[index]
    index = np.concatenate([index, index[longer]])
    k_r = np.concatenate([k_r, k_r[longer]])
    t_sr = np.concatenate([durations[index[:len(longer)]], stretched[longer]])

    # ONU (0, 0) waits n_r registration slots before its first non-registration slot
    keep = _within(n_r * t_sr, p.d_b)
    if check_window:
        keep &= _within(p.t_reg, k_r * (n_r * t_sr))
    index, k_r, t_sr = index[keep], k_r[keep], t_sr[keep]
    if not len(index):
        return None

    served_r = served[index][:, None]
    t_cr = (n_r * t_sr)[:, None]
    k = k_r[:, None]

    for f_n, t_sn, served_n in zip(frames.tolist(), durations.tolist(), served.tolist()):
        t_cn = N * t_sn
        if not (Core.within(t_cn, served_n) and Core.within(t_cn, p.d_b)):
            continue

        # With capacity met, drain only improves with more non-registration cycles
        k_n = limits.k_n_max
        if check_gap:
            while k_n > 0 and not Core.within(k_n * t_cn, p.t_gap):
                k_n -= 1
            if k_n == 0:
                continue

        gap_reg = (N - i_n) * t_sn + i_r * t_sr[:, None]
        gap_nr = i_n * t_sn + (n_r - i_r) * t_sr[:, None]
        first = np.maximum(0.0, gap_reg - served_r)
        growth = t_cr - served_r
        last = np.maximum(0.0, first + (k - 1) * growth)
        d_reg_last = np.where(k >= 2, t_cr + np.maximum(0.0, first + (k - 2) * growth), gap_reg)
        d_nr_first = gap_nr + last
        drain = last + gap_nr - served_n - (k_n - 1) * (served_n - t_cn)

        ok = (_within(d_reg_last, p.d_b) & _within(d_nr_first, p.d_b) & _within(drain, 0.0)).all(axis=1)
        if ok.any():
            c = int(np.flatnonzero(ok)[0])
            return CyclePlan(N, W, f_n, int(frames[index[c]]), k_n, int(k_r[c]), t_sn, float(t_sr[c]))

    return None


def minimality_probe(plan, params, **checks):
    """ Report for the same plan with one fewer non-registration cycle (None when k_n = 1) """
    if plan.k_n <= 1:
        return None

    shorter = plan.replace(k_n=plan.k_n - 1)
    if checks.get("exact_gap"):
        shorter = shorter.replace(t_sn=params.t_gap / (shorter.k_n * plan.N))

    return check_plan(shorter, params, **checks)
