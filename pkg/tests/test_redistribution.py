"""
Registration redistribution.

 Group 1 - registration cycle size N_r
 Group 2 - slot mapping: the N=4/W=3 and N=3/W=3 grids
 Group 3 - injectivity and coverage over N <= 64, W <= 16
 Group 4 - physical wavelength of a data ordinal
"""

from __future__ import annotations

import pytest

from ponplan.redistribution import (
    OnuId,
    TopologyError,
    assignment_grid,
    compute_nr,
    enumerate_assignments,
    map_reg_slot,
    physical_wavelength,
    vacant_slots,
)


# ── Group 1: N_r ─────────────────────────────────────────────────────────────

@pytest.mark.parametrize("N, W, expected", [(4, 3, 6), (3, 3, 5), (1, 2, 2), (14, 8, 16), (5, 16, 6)])
def test_compute_nr(N, W, expected):
    assert compute_nr(N, W) == expected


@pytest.mark.parametrize("N, W", [(3, 1), (0, 3), (-2, 4)])
def test_compute_nr_rejects_topology(N, W):
    with pytest.raises(TopologyError):
        compute_nr(N, W)


# ── Group 2: slot mapping ────────────────────────────────────────────────────

def test_full_grid_four_per_wavelength():
    assignments = enumerate_assignments(4, 3)

    assert len(assignments) == 12
    assert vacant_slots(4, 3) == []
    assert {(entry.i_r, entry.w_r) for entry in assignments} == {(i_r, w_r) for i_r in range(6) for w_r in range(2)}


def test_grid_with_one_vacancy():
    assert len(enumerate_assignments(3, 3)) == 9
    assert vacant_slots(3, 3) == [(4, 1)]

    grid = assignment_grid(3, 3)
    assert len(grid) == 5
    assert grid[0][0].onu == OnuId(0, 0)
    assert grid[0][1].onu == OnuId(1, 0)
    assert grid[1][0].onu == OnuId(2, 0)
    assert grid[4][0].onu == OnuId(2, 2)
    assert grid[4][1] is None


def test_map_reg_slot_row_wise():
    entry = map_reg_slot(OnuId(2, 1), 4, 3)

    assert (entry.i_r, entry.w_r) == (2, 1)
    assert entry.to_record() == {"lambda": 2, "i_n": 1, "i_r": 2, "w_r": 1}


def test_enumeration_order():
    onus = [entry.onu for entry in enumerate_assignments(2, 3)]
    assert onus == [OnuId(0, 0), OnuId(1, 0), OnuId(2, 0), OnuId(0, 1), OnuId(1, 1), OnuId(2, 1)]


@pytest.mark.parametrize("onu", [OnuId(3, 0), OnuId(0, 4), OnuId(-1, 0)])
def test_map_reg_slot_rejects_out_of_range(onu):
    with pytest.raises(TopologyError):
        map_reg_slot(onu, 4, 3)


# ── Group 3: injectivity ─────────────────────────────────────────────────────

def test_injective_and_within_grid():
    for W in range(2, 17):
        for N in range(1, 65):
            n_r = compute_nr(N, W)
            cells = [(entry.i_r, entry.w_r) for entry in enumerate_assignments(N, W)]

            assert len(set(cells)) == N * W
            assert all(0 <= i_r < n_r and 0 <= w_r < W - 1 for i_r, w_r in cells)
            assert len(vacant_slots(N, W)) == n_r * (W - 1) - N * W


# ── Group 4: physical wavelengths ────────────────────────────────────────────

@pytest.mark.parametrize("host, expected", [(2, [0, 1]), (0, [1, 2]), (1, [0, 2])])
def test_physical_wavelength_skips_host(host, expected):
    assert [physical_wavelength(w_r, host, 3) for w_r in range(2)] == expected


def test_physical_wavelength_range():
    with pytest.raises(TopologyError):
        physical_wavelength(2, 2, 3)
    with pytest.raises(TopologyError):
        physical_wavelength(0, 3, 3)
