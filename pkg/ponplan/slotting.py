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
from ponplan.model import Topology, TopologyError
from ponplan.redistribution import compute_nr


class PlanError(ValueError):
    """ Structurally invalid cycle plan """


def _ceil_ratio(numerator, denominator):
    """ Ceiling of a ratio, exact for integral bit counts """
    if float(numerator).is_integer() and float(denominator).is_integer():
        return -(-int(numerator) // int(denominator))

    return math.ceil(numerator / denominator)


def packets_per_slot(f, params):
    """ Ethernet packets needed to carry f basic frames """
    return _ceil_ratio(f * params.alpha, params.e_max)


def min_slot_duration(f, params):
    """ Shortest slot carrying f frames: payload and headers at R_E plus one guard band """
    bits = f * params.alpha + packets_per_slot(f, params) * params.l_hdr
    return bits / params.r_e + params.g


def slot_utilization(f, t_s, params):
    """ Fraction of a slot carrying frame payload """
    return f * params.alpha / (t_s * params.r_e)


@dataclasses.dataclass(frozen=True)
class SlotSpec:
    f: int
    p: int
    t_s: float

    @classmethod
    def minimal(cls, f, params):
        return cls(f, packets_per_slot(f, params), min_slot_duration(f, params))


@dataclasses.dataclass(frozen=True)
class CyclePlan:
    """ Complete candidate schedule for one topology """
    N: int
    W: int
    f_n: int
    f_r: int
    k_n: int
    k_r: int
    t_sn: float
    t_sr: float
    host: int = -1

    RECORD_FIELDS = (("n", "N", int), ("w", "W", int), ("f_n", "f_n", int), ("f_r", "f_r", int),
                     ("k_n", "k_n", int), ("k_r", "k_r", int), ("t_sn_s", "t_sn", float),
                     ("t_sr_s", "t_sr", float), ("host", "host", int))

    @property
    def n_r(self):
        return compute_nr(self.N, self.W)

    @property
    def t_cn(self):
        return self.N * self.t_sn

    @property
    def t_cr(self):
        return self.n_r * self.t_sr

    @property
    def window(self):
        return self.k_r * self.t_cr

    @property
    def gap(self):
        return self.k_n * self.t_cn

    @property
    def super_cycle(self):
        return self.window + self.gap

    @property
    def host_wavelength(self):
        """ Physical wavelength hosting registration (default W-1) """
        return self.W - 1 if self.host < 0 else self.host

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def validate(self, params):
        """ Raise PlanError unless counts are positive and slots meet their minimum duration """
        problems = []
        for name in ("f_n", "f_r", "k_n", "k_r"):
            if getattr(self, name) < 1:
                problems.append("{} >= 1 required".format(name))

        try:
            Topology(self.W, self.N)
        except TopologyError as error:
            problems.append(str(error))
        if not (-1 <= self.host < self.W):
            problems.append("host wavelength {} outside W={}".format(self.host, self.W))

        if not problems:
            if not Core.within(min_slot_duration(self.f_n, params), self.t_sn):
                problems.append("T_sn below minimum for f_n={}".format(self.f_n))
            if not Core.within(min_slot_duration(self.f_r, params), self.t_sr):
                problems.append("T_sr below minimum for f_r={}".format(self.f_r))

        if problems:
            raise PlanError("; ".join(problems))

        return self

    def to_record(self):
        return {key: getattr(self, attribute) for key, attribute, _ in self.RECORD_FIELDS}

    @classmethod
    def from_record(cls, record):
        values = {}
        for key, attribute, cast in cls.RECORD_FIELDS:
            if key in record:
                values[attribute] = cast(record[key])
            elif attribute != "host":
                raise PlanError("plan record missing '{}'".format(key))

        return cls(**values)

    @classmethod
    def minimal(cls, N, W, f_n, f_r, k_n, k_r, params, host=-1):
        """ Plan with both slot durations pinned to their minimum """
        return cls(N, W, f_n, f_r, k_n, k_r, min_slot_duration(f_n, params), min_slot_duration(f_r, params), host)


def cycle_durations(plan):
    """ (T_cn, T_cr) """
    return plan.t_cn, plan.t_cr


def window_and_gap(plan):
    """ (registration window, gap between windows) """
    return plan.window, plan.gap
