#! /usr/bin/env python3

#
#   This file is part of ponplan
#
#   SPDX-FileCopyrightText: 2026  ponplan contributors
#
#   SPDX-License-Identifier: GPL-3.0-only WITH LicenseRef-ponplan-graphviz-linking-source-exception
#


import dataclasses
import multiprocessing
from ponplan.core import Core
from ponplan.delay_analysis import check_plan, delay_profiles
from ponplan.planner import Planner
from ponplan.simulator import compare_with_analysis, drain_check, simulate

SWEEP_COLUMNS = ("w", "variant_id", "n_star", "n_baseline", "total_proposed", "total_baseline", "gain_pct",
                 "window_s", "gap_s", "f_n", "f_r", "k_n", "k_r", "t_sn_s", "t_sr_s")

# Columns added to JSON-lines rows
SWEEP_EXTRA = ("verified", "error")

VERIFY_OFF, VERIFY_ANALYTIC, VERIFY_SIMULATE = "off", "analytic", "simulate"

W_LIMITS = (2, 32)

PANELS = {
    "default": [("default", {})],
    "a": [("r_c_307.2M", {"r_c": 307.2e6}),
          ("r_c_614.4M", {"r_c": 614.4e6}),
          ("r_c_1228.8M", {"r_c": 1228.8e6})],
    "b": [("d_b_100us", {"d_b": 100e-6, "t_reg": 150e-6}),
          ("d_b_150us", {"d_b": 150e-6, "t_reg": 150e-6})],
    "c": [("t_reg_250us", {"t_reg": 250e-6, "d_b": 150e-6}),
          ("t_reg_400us", {"t_reg": 400e-6, "d_b": 150e-6})]}


@dataclasses.dataclass(frozen=True)
class SweepSpec:
    """ Parameter variants swept over a range of wavelength counts """
    params: object
    variants: tuple = (("default", ()),)
    w_min: int = 2
    w_max: int = 8
    planner_options: tuple = ()
    verify: str = VERIFY_SIMULATE
    super_cycles: int = 3
    workers: int = 0

    @classmethod
    def panel(cls, name, params, **settings):
        """ Sweep over a named preset ('default', 'a', 'b', 'c') """
        variants = tuple((variant_id, tuple(sorted(overrides.items()))) for variant_id, overrides in PANELS[name])
        return cls(params, variants, **settings)

    def validate(self):
        """ Resolved variant parameters; raises ValueError or ParamsError when invalid """
        if not (W_LIMITS[0] <= self.w_min <= self.w_max <= W_LIMITS[1]):
            raise ValueError("W range must lie within [{}, {}]".format(*W_LIMITS))
        if self.verify not in (VERIFY_OFF, VERIFY_ANALYTIC, VERIFY_SIMULATE):
            raise ValueError("unknown verify mode '{}'".format(self.verify))

        return [(variant_id, self.params.replace(**dict(overrides))) for variant_id, overrides in self.variants]

    def points(self):
        """ (W, variant id, params) in output order """
        variants = self.validate()
        return [(W, variant_id, params) for variant_id, params in variants for W in range(self.w_min, self.w_max + 1)]


def verify_plan(plan, params, mode, super_cycles=3, **checks):
    """ None when the plan passes verification, otherwise the failure description """
    if mode == VERIFY_OFF:
        return None

    report = check_plan(plan, params, **checks)
    if not report.feasible:
        return "analytic check {}".format(report.verdict)

    if mode == VERIFY_SIMULATE:
        trace = simulate(plan, params, max(super_cycles, 2))
        comparison = compare_with_analysis(trace, delay_profiles(plan, params), params)
        if not comparison.passed:
            return "simulation mismatch ({} of {})".format(len(comparison.mismatches), comparison.checked)
        if any(drain_check(trace)[1:]):
            return "simulation not drained"

    return None


def run_point(point):
    """ Solve and verify one sweep point; failures are returned in-row """
    W, variant_id, params, options, verify, super_cycles = point
    row = {"w": W, "variant_id": variant_id, "verified": verify, "error": None}

    try:
        planner = Planner(params, **dict(options))
        result = planner.solve(W)
        row.update(result.to_record())

        if result.plan:
            row["error"] = verify_plan(result.plan, params, verify, super_cycles, **planner.checks())
    except Exception as error:
        row["error"] = "{}: {}".format(type(error).__name__, error)

    Core.log("W={} {}: N*={} baseline={} {}".format(W, variant_id, row.get("n_star"), row.get("n_baseline"),
                                                    row["error"] or "ok"), Core.LOG_INFO)
    return row


def run_sweep(spec):
    """ One row per (variant, W), in sweep order regardless of completion order """
    points = [(W, variant_id, params, spec.planner_options, spec.verify, spec.super_cycles)
              for W, variant_id, params in spec.points()]

    workers = spec.workers or multiprocessing.cpu_count()
    workers = min(workers, len(points))

    if workers <= 1:
        return [run_point(point) for point in points]

    with multiprocessing.Pool(workers) as pool:
        return pool.map(run_point, points)


def summarize(rows):
    """ Largest defined gain over the rows and where it occurred """
    defined = [row for row in rows if row.get("gain_pct") is not None and not row.get("error")]
    if not defined:
        return None

    return max(defined, key=lambda row: (row["gain_pct"], -row["w"]))
