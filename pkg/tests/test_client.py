"""
Command handlers, called the way the ponplan script calls them.

 Group 1 - generate, bound, map
 Group 2 - solve and plan files
 Group 3 - analyze, simulate
 Group 4 - sweep and output errors
"""

from __future__ import annotations

import argparse
import json

import pytest

from ponplan import client
from ponplan.configuration import Configuration

HAND_SETTINGS = ["r_e_bps=1e9", "r_c_bps=1e8", "d_b_s=10e-6", "t_reg_s=12e-6", "t_gap_s=30e-6", "g_s=0.2e-6",
                 "alpha_bytes=12.5", "e_max_bytes=1500", "l_hdr_bytes=25"]
SCALED_SETTINGS = ["r_e_bps=1e9", "r_c_bps=200e6", "d_b_s=50e-6", "t_reg_s=20e-6", "t_gap_s=1e-3"]


def _arguments(**values):
    base = {"format": "csv", "out": None, "verify": "analytic"}
    base.update(values)
    return argparse.Namespace(**base)


def _configuration(settings=()):
    configuration = Configuration()
    assert configuration.override(list(settings))
    return configuration


@pytest.fixture
def hand_plan_file(tmp_path):
    path = tmp_path / "plan.txt"
    path.write_text("# hand plan\nn=3\nw=3\nf_n=8\nf_r=4\nk_n=4\nk_r=3\nt_sn_s=2e-6\nt_sr_s=1e-6\n")
    return str(path)


# ── Group 1: generate, bound, map ────────────────────────────────────────────

def test_generate(tmp_path):
    path = tmp_path / "site.conf"

    assert client.generate(_arguments(path=str(path)), None) == client.EXIT_OK
    assert path.exists()
    assert client.generate(_arguments(path=str(path)), None) == client.EXIT_IO


def test_bound_reports_excess(tmp_path):
    out = tmp_path / "bound.txt"

    assert client.bound(_arguments(out=str(out), t_c=100e-6), _configuration()) == client.EXIT_OK
    assert out.read_text().splitlines()[:3] == ["standard_epon_delay_bound_s=0.00035", "d_b_s=0.00015",
                                                "exceeds_d_b=True"]


def test_map_lists_vacancies_last(tmp_path):
    out = tmp_path / "map.csv"

    assert client.map_grid(_arguments(out=str(out), n=3, w=3, svg=None), _configuration()) == client.EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "lambda,i_n,i_r,w_r"
    assert lines[1:3] == ["0,0,0,0", "1,0,0,1"]
    assert len(lines) == 11
    assert lines[-1] == ",,4,1"


def test_map_bad_topology(tmp_path):
    arguments = _arguments(out=str(tmp_path / "map.csv"), n=3, w=1, svg=None)
    assert client.map_grid(arguments, _configuration()) == client.EXIT_CONFIG


# ── Group 2: solve ───────────────────────────────────────────────────────────

def test_solve_baseline(tmp_path):
    out = tmp_path / "baseline.txt"
    arguments = _arguments(out=str(out), w=4, baseline=True, save_plan=None, export_miqp=None, n=None)

    assert client.solve(arguments, _configuration()) == client.EXIT_OK
    assert out.read_text() == "w=4\nn_baseline=14\ntotal_baseline=42\n"


def test_solve_saves_plan(tmp_path):
    out = tmp_path / "solve.txt"
    plan_path = tmp_path / "plan.json"
    arguments = _arguments(out=str(out), w=2, baseline=False, save_plan=str(plan_path), export_miqp=None, n=None)

    assert client.solve(arguments, _configuration(SCALED_SETTINGS)) == client.EXIT_OK

    values = dict(line.split("=", 1) for line in out.read_text().splitlines())
    plan = client.load_plan(str(plan_path))
    assert int(values["n_star"]) == plan.N >= 1
    assert values["verified"] == "analytic"
    assert values["error"] == ""
    assert json.loads(plan_path.read_text())["w"] == 2


def test_solve_json_record(tmp_path):
    out = tmp_path / "solve.jsonl"
    arguments = _arguments(out=str(out), format="json-lines", w=2, baseline=False, save_plan=None,
                           export_miqp=None, n=None)

    assert client.solve(arguments, _configuration(SCALED_SETTINGS)) == client.EXIT_OK
    record = json.loads(out.read_text())
    assert record["w"] == 2
    assert "variant_id" not in record
    assert record["iterations"] >= 1


def test_solve_infeasible_exit_status(tmp_path):
    arguments = _arguments(out=str(tmp_path / "solve.txt"), w=2, baseline=False, save_plan=None,
                           export_miqp=None, n=None)

    assert client.solve(arguments, _configuration(SCALED_SETTINGS + ["d_b_s=1.2e-6"])) == client.EXIT_CONFIG


def test_invalid_parameters_exit_status(tmp_path):
    arguments = _arguments(out=str(tmp_path / "solve.txt"), w=2, baseline=False, save_plan=None,
                           export_miqp=None, n=None)

    assert client.solve(arguments, _configuration(["r_c_bps=20e9"])) == client.EXIT_CONFIG


# ── Group 3: analyze, simulate ───────────────────────────────────────────────

def test_load_plan_formats(tmp_path, hand_plan, hand_plan_file):
    assert client.load_plan(hand_plan_file) == hand_plan

    json_path = tmp_path / "plan.json"
    assert client.save_plan(hand_plan, str(json_path)) == client.EXIT_OK
    assert client.load_plan(str(json_path)) == hand_plan


def test_load_pretty_printed_plan(tmp_path, hand_plan):
    path = tmp_path / "plan.json"
    path.write_text(json.dumps(hand_plan.to_record(), indent=2))

    assert client.load_plan(str(path)) == hand_plan


def test_analyze(tmp_path, hand_plan_file):
    out = tmp_path / "analyze.csv"

    assert client.analyze(_arguments(out=str(out), plan=hand_plan_file), _configuration(HAND_SETTINGS)) == client.EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "lambda,i_n,i_r,d_reg_last_s,d_nr_first_s,b_nr_last_s,verdict"
    assert len(lines) == 10
    assert all(line.endswith(",ok") for line in lines[1:])


def test_analyze_missing_plan(tmp_path):
    arguments = _arguments(out=str(tmp_path / "a.csv"), plan=str(tmp_path / "absent.txt"))
    assert client.analyze(arguments, _configuration(HAND_SETTINGS)) == client.EXIT_IO


def test_analyze_malformed_plan(tmp_path):
    path = tmp_path / "plan.txt"
    path.write_text("n=3\nw=3\n")

    arguments = _arguments(out=str(tmp_path / "a.csv"), plan=str(path))
    assert client.analyze(arguments, _configuration(HAND_SETTINGS)) == client.EXIT_CONFIG


def test_simulate_trace(tmp_path, hand_plan_file):
    trace = tmp_path / "trace.csv"
    arguments = _arguments(plan=hand_plan_file, cycles=2, trace=str(trace))

    assert client.simulate_plan(arguments, _configuration(HAND_SETTINGS)) == client.EXIT_OK
    lines = trace.read_text().splitlines()
    assert lines[0] == "t_start_s,wavelength,lambda,i_n,cycle_type,frames_served,queue_after_frames,max_delay_s"
    assert len(lines) == 1 + 2 * 64
    assert "0,2,,,registration,0,0," in lines[1:4]


# ── Group 4: sweep and output errors ─────────────────────────────────────────

def test_sweep(tmp_path):
    out = tmp_path / "sweep.csv"
    arguments = _arguments(out=str(out), verify="off", panel="default", workers=1)

    assert client.sweep(arguments, _configuration(SCALED_SETTINGS + ["w_max=3"])) == client.EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(client.SWEEP_COLUMNS)
    assert [line.split(",")[:2] for line in lines[1:]] == [["2", "default"], ["3", "default"]]


def test_sweep_invalid_range(tmp_path):
    arguments = _arguments(out=str(tmp_path / "sweep.csv"), verify="off", panel="default", workers=1)
    assert client.sweep(arguments, _configuration(["w_max=40"])) == client.EXIT_CONFIG


def test_unwritable_output(tmp_path):
    arguments = _arguments(out=str(tmp_path / "missing" / "map.csv"), n=2, w=2, svg=None)
    assert client.map_grid(arguments, _configuration()) == client.EXIT_IO
