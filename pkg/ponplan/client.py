#! /usr/bin/env python3

#
#   This file is part of ponplan
#
#   SPDX-FileCopyrightText: 2026  ponplan contributors
#
#   SPDX-License-Identifier: GPL-3.0-only WITH LicenseRef-ponplan-graphviz-linking-source-exception
#


import json
import sys
from ponplan.configuration import Configuration
from ponplan.core import Core
from ponplan.delay_analysis import check_plan, delay_profiles
from ponplan.planner import Planner, minimality_probe, standard_epon_delay_bound
from ponplan.redistribution import TopologyError, enumerate_assignments, vacant_slots
from ponplan.render.render_csv import RenderCSV
from ponplan.render.render_json import RenderJSON
from ponplan.simulator import TimelineError, compare_with_analysis, drain_check, simulate
from ponplan.slotting import CyclePlan, PlanError
from ponplan.sweep import PANELS, SWEEP_COLUMNS, SWEEP_EXTRA, SweepSpec, run_sweep, summarize, verify_plan

EXIT_OK, EXIT_CONFIG, EXIT_IO = range(3)

MAP_COLUMNS = ("lambda", "i_n", "i_r", "w_r")
ANALYZE_COLUMNS = ("lambda", "i_n", "i_r", "d_reg_last_s", "d_nr_first_s", "b_nr_last_s", "verdict")
TRACE_COLUMNS = ("t_start_s", "wavelength", "lambda", "i_n", "cycle_type", "frames_served",
                 "queue_after_frames", "max_delay_s")
SOLVE_EXTRA = ("iterations", "candidates", "min_efficient_cycle_s", "verified", "error")


def _renderer(arguments, columns):
    return RenderJSON(columns) if arguments.format == "json-lines" else RenderCSV(columns)


def _write(data, path):
    """ Write bytes to path, or stdout when path is empty; returns an exit status """
    if not path:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return EXIT_OK

    try:
        with open(path, "wb") as handle:
            handle.write(data)
    except OSError:
        Core.log("Error: unable to write {}".format(path), Core.LOG_OUTPUT)
        return EXIT_IO

    return EXIT_OK


def emit(rows, columns, arguments, extra=(), path=None):
    """ Render a table in the requested format to --out (or the given path) """
    data = _renderer(arguments, columns).render_bytes(rows, {"extra": extra})
    return _write(data, path if path is not None else arguments.out)


def load_plan(path):
    """ CyclePlan from a JSON object (one line or pretty-printed) or key=value text """
    with open(path, "r") as handle:
        text = handle.read().strip()

    if text.startswith("{"):
        try:
            # First object only; a json-lines file may carry more rows
            record, _ = json.JSONDecoder().raw_decode(text)
        except ValueError as error:
            raise PlanError("malformed plan file ({})".format(error))
    else:
        record = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue

            key, sep, value = line.partition("=")
            if not sep:
                raise PlanError("malformed plan line '{}'".format(line))
            record[key.strip()] = value.strip()

    return CyclePlan.from_record(record)


def save_plan(plan, path):
    data = RenderJSON([key for key, _, _ in CyclePlan.RECORD_FIELDS]).render_bytes([plan.to_record()])
    return _write(data, path)


def _read_plan(arguments, params):
    """ (plan, status); plan is None on failure """
    try:
        return load_plan(arguments.plan).validate(params), EXIT_OK
    except OSError:
        Core.log("Error: unable to read {}".format(arguments.plan), Core.LOG_OUTPUT)
        return None, EXIT_IO
    except (PlanError, TopologyError) as error:
        Core.log("Configuration error: {} ({})".format(error, arguments.plan), Core.LOG_OUTPUT)
        return None, EXIT_CONFIG


def generate(arguments, configuration):
    """ Write a configuration template """
    return EXIT_OK if Configuration.write_template(arguments.path) else EXIT_IO


def bound(arguments, configuration):
    """ Delay floor of standard registration against the budget """
    params = configuration.params()
    if not params:
        return EXIT_CONFIG

    value = standard_epon_delay_bound(params.t_reg, arguments.t_c)
    exceeds = not Core.within(value, params.d_b)
    lines = ["standard_epon_delay_bound_s={}".format(Core.format_float(value)),
             "d_b_s={}".format(Core.format_float(params.d_b)),
             "exceeds_d_b={}".format(exceeds)]

    if exceeds:
        lines.append("# registration window plus one cycle exceeds the delay budget")

    return _write("\n".join(lines).encode("utf-8") + b"\n", arguments.out)


def map_grid(arguments, configuration):
    """ Registration-cycle assignment grid """
    try:
        rows = [entry.to_record() for entry in sorted(enumerate_assignments(arguments.n, arguments.w),
                                                      key=lambda entry: (entry.i_r, entry.w_r))]
        rows.extend({"lambda": None, "i_n": None, "i_r": i_r, "w_r": w_r} for i_r, w_r in vacant_slots(arguments.n, arguments.w))
    except TopologyError as error:
        Core.log("Configuration error: {}".format(error), Core.LOG_OUTPUT)
        return EXIT_CONFIG

    if arguments.svg:
        from ponplan.render.render_graphviz import RenderGraphviz

        try:
            RenderGraphviz(arguments.n, arguments.w, configuration.values["host_wavelength"]).render_file(arguments.svg)
        except OSError:
            Core.log("Error: unable to write {}".format(arguments.svg), Core.LOG_OUTPUT)
            return EXIT_IO

    return emit(rows, MAP_COLUMNS, arguments)


def solve(arguments, configuration):
    """ Largest feasible N for one W """
    params = configuration.params()
    if not params:
        return EXIT_CONFIG

    planner = Planner(params, **configuration.planner_options())

    if arguments.baseline:
        try:
            n_baseline = planner.solve_baseline(arguments.w)
        except ValueError as error:
            Core.log("Configuration error: {}".format(error), Core.LOG_OUTPUT)
            return EXIT_CONFIG

        status = _write("w={}\nn_baseline={}\ntotal_baseline={}\n".format(
            arguments.w, n_baseline, n_baseline * (arguments.w - 1)).encode("utf-8"), arguments.out)
        return status if status or n_baseline else EXIT_CONFIG

    try:
        result = planner.solve(arguments.w)
    except (TopologyError, ValueError) as error:
        Core.log("Configuration error: {}".format(error), Core.LOG_OUTPUT)
        return EXIT_CONFIG

    record = result.to_record()
    record.update({"iterations": result.iterations, "candidates": result.candidates,
                   "min_efficient_cycle_s": result.min_efficient_cycle, "verified": arguments.verify, "error": None})

    if result.plan:
        record["error"] = verify_plan(result.plan, params, arguments.verify,
                                      configuration.values["super_cycles"], **planner.checks())

        probe = minimality_probe(result.plan, params, **planner.checks())
        if probe is not None:
            Core.log("k_n - 1 = {}: {}".format(result.plan.k_n - 1, probe.verdict), Core.LOG_INFO)

    if arguments.format == "json-lines":
        status = emit([record], SWEEP_COLUMNS[:1] + SWEEP_COLUMNS[2:], arguments, SOLVE_EXTRA)
    else:
        text = "".join("{}={}\n".format(key, Core.format_float(value) if not isinstance(value, str) else value)
                       for key, value in record.items())
        status = _write(text.encode("utf-8"), arguments.out)

    if status:
        return status

    if result.plan and arguments.save_plan:
        status = save_plan(result.plan, arguments.save_plan)
        if status:
            return status

    if arguments.export_miqp:
        from ponplan.miqp_export import export_miqp

        N = arguments.n or max(result.n_star, 1)
        try:
            export_miqp(N, arguments.w, params, arguments.export_miqp)
        except OSError:
            Core.log("Error: unable to write {}".format(arguments.export_miqp), Core.LOG_OUTPUT)
            return EXIT_IO

    if record["error"]:
        Core.log("Error: verification failed ({})".format(record["error"]), Core.LOG_OUTPUT)
        return EXIT_CONFIG

    return EXIT_OK if result.n_star >= 1 else EXIT_CONFIG


def analyze(arguments, configuration):
    """ Per-ONU analytic delays of a plan file """
    params = configuration.params()
    if not params:
        return EXIT_CONFIG

    plan, status = _read_plan(arguments, params)
    if not plan:
        return status

    options = configuration.planner_options()
    options.pop("host")
    report = check_plan(plan, params, **options)
    Core.log("{} (worst delay {} s)".format(report.verdict, Core.format_float(report.worst_delay)), Core.LOG_OUTPUT)

    return emit([entry.to_record() for entry in report.onus], ANALYZE_COLUMNS, arguments)


def simulate_plan(arguments, configuration):
    """ Frame-level replay of a plan file """
    params = configuration.params()
    if not params:
        return EXIT_CONFIG

    plan, status = _read_plan(arguments, params)
    if not plan:
        return status

    cycles = arguments.cycles or configuration.values["super_cycles"]
    try:
        trace = simulate(plan, params, cycles)
    except (TimelineError, ValueError) as error:
        Core.log("Configuration error: {}".format(error), Core.LOG_OUTPUT)
        return EXIT_CONFIG

    Core.log("max delay {} s, end queues {}".format(Core.format_float(trace.max_delay), drain_check(trace)), Core.LOG_OUTPUT)

    if arguments.verify != "off" and cycles >= 2:
        comparison = compare_with_analysis(trace, delay_profiles(plan, params), params)
        Core.log("analysis comparison: {} of {} within {} s".format(
            comparison.checked - len(comparison.mismatches), comparison.checked,
            Core.format_float(comparison.tolerance)), Core.LOG_OUTPUT)

    return emit(trace.to_rows(), TRACE_COLUMNS, arguments, path=arguments.trace or arguments.out)


def sweep(arguments, configuration):
    """ Gain over a range of W for a panel of parameter variants """
    params = configuration.params()
    if not params:
        return EXIT_CONFIG

    values = configuration.values
    options = tuple(sorted(configuration.planner_options().items()))
    workers = values["workers"] if arguments.workers is None else arguments.workers

    try:
        spec = SweepSpec.panel(arguments.panel, params, w_min=values["w_min"], w_max=values["w_max"],
                               planner_options=options, verify=arguments.verify,
                               super_cycles=values["super_cycles"], workers=workers)
        rows = run_sweep(spec)
    except ValueError as error:
        Core.log("Configuration error: {}".format(error), Core.LOG_OUTPUT)
        return EXIT_CONFIG

    best = summarize(rows)
    if best:
        Core.log("Largest gain {}% at W={} ({})".format(Core.format_float(best["gain_pct"]), best["w"],
                                                       best["variant_id"]), Core.LOG_INFO)

    return emit(rows, SWEEP_COLUMNS, arguments, SWEEP_EXTRA)


COMMANDS = {
    "generate": generate,
    "bound": bound,
    "map": map_grid,
    "solve": solve,
    "analyze": analyze,
    "simulate": simulate_plan,
    "sweep": sweep}

PANEL_NAMES = sorted(PANELS)
