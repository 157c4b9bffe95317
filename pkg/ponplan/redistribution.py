#! /usr/bin/env python3

#
#   This file is part of ponplan
#
#   SPDX-FileCopyrightText: 2026  ponplan contributors
#
#   SPDX-License-Identifier: GPL-3.0-only WITH LicenseRef-ponplan-graphviz-linking-source-exception
#


import dataclasses
import functools
from ponplan.model import Topology, TopologyError


@dataclasses.dataclass(frozen=True, order=True)
class OnuId:
    """ ONU identity: wavelength lambda, non-registration slot i_n """
    lam: int
    i_n: int


@dataclasses.dataclass(frozen=True)
class RegSlotAssignment:
    """ Registration-cycle slot i_r on data wavelength ordinal w_r """
    onu: OnuId
    i_r: int
    w_r: int

    def to_record(self):
        return {"lambda": self.onu.lam, "i_n": self.onu.i_n, "i_r": self.i_r, "w_r": self.w_r}


def compute_nr(N, W):
    """ ONUs per data wavelength during registration cycles """
    topology = Topology(W, N)
    return -(-topology.onu_count // (W - 1))


def map_reg_slot(onu, N, W):
    """ Registration-cycle slot of an ONU (row-wise round-robin over data wavelengths) """
    Topology(W, N)
    if not (0 <= onu.lam < W and 0 <= onu.i_n < N):
        raise TopologyError("ONU ({}, {}) outside N={}, W={}".format(onu.lam, onu.i_n, N, W))

    order = W * onu.i_n + onu.lam
    return RegSlotAssignment(onu, order // (W - 1), order % (W - 1))


@functools.lru_cache(maxsize=256)
def _assignments(N, W):
    return tuple(map_reg_slot(OnuId(lam, i_n), N, W) for i_n in range(N) for lam in range(W))


def enumerate_assignments(N, W):
    """ All N*W assignments, in (i_n, lambda) order """
    Topology(W, N)
    return list(_assignments(N, W))


def vacant_slots(N, W):
    """ (i_r, w_r) cells of the registration grid holding no ONU """
    taken = set((entry.i_r, entry.w_r) for entry in enumerate_assignments(N, W))
    return [(i_r, w_r) for i_r in range(compute_nr(N, W)) for w_r in range(W - 1) if (i_r, w_r) not in taken]


def assignment_grid(N, W):
    """ Rows of the registration grid: grid[i_r][w_r] -> RegSlotAssignment or None """
    grid = [[None] * (W - 1) for _ in range(compute_nr(N, W))]
    for entry in enumerate_assignments(N, W):
        grid[entry.i_r][entry.w_r] = entry

    return grid


def physical_wavelength(w_r, host, W):
    """ Physical wavelength of data ordinal w_r when registration is hosted on `host` """
    if not (0 <= host < W):
        raise TopologyError("host wavelength {} outside W={}".format(host, W))
    if not (0 <= w_r < W - 1):
        raise TopologyError("data ordinal {} outside W={}".format(w_r, W))

    return w_r if w_r < host else w_r + 1
