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

BITS_PER_BYTE = 8


class ParamsError(ValueError):
    """ One or more system parameter invariants violated """
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid parameters: {}".format("; ".join(self.violations)))


@dataclasses.dataclass(frozen=True)
class SystemParams:
    """ Physical and protocol constants (seconds, bits, bits/second) """
    r_e: float = 10e9
    r_c: float = 614.4e6
    d_b: float = 150e-6
    t_reg: float = 250e-6
    t_gap: float = 100e-3
    g: float = 1e-6
    alpha: float = 16 * BITS_PER_BYTE
    e_max: float = 1500 * BITS_PER_BYTE
    l_hdr: float = 26 * BITS_PER_BYTE

    # record key -> (attribute, scale from record units)
    RECORD_KEYS = {
        "r_e_bps": ("r_e", 1),
        "r_c_bps": ("r_c", 1),
        "d_b_s": ("d_b", 1),
        "t_reg_s": ("t_reg", 1),
        "t_gap_s": ("t_gap", 1),
        "g_s": ("g", 1),
        "alpha_bytes": ("alpha", BITS_PER_BYTE),
        "e_max_bytes": ("e_max", BITS_PER_BYTE),
        "l_hdr_bytes": ("l_hdr", BITS_PER_BYTE)}

    @property
    def frame_period(self):
        """ Inter-arrival time of basic frames (alpha / R_C) """
        return self.alpha / self.r_c

    def frames_time(self, count):
        """ Time-equivalent of count frames at rate R_C """
        return count * self.alpha / self.r_c

    def replace(self, **overrides):
        """ Validated copy with overridden fields """
        return validate_params(dataclasses.replace(self, **overrides))

    def to_record(self):
        record = {}
        for key, (attribute, scale) in self.RECORD_KEYS.items():
            value = getattr(self, attribute) / scale
            record[key] = int(value) if float(value).is_integer() and scale != 1 else value

        return record

    @classmethod
    def from_record(cls, record):
        """ Build from a flat record; unknown keys ignored, missing keys default """
        fields = {}
        for key, (attribute, scale) in cls.RECORD_KEYS.items():
            if key in record and record[key] not in (None, ""):
                fields[attribute] = float(record[key]) * scale

        return validate_params(cls(**fields))


class TopologyError(ValueError):
    """ Topology or ONU index out of range """


@dataclasses.dataclass(frozen=True)
class Topology:
    """ W upstream wavelengths, N ONUs per wavelength in non-registration cycles """
    W: int
    N: int

    def __post_init__(self):
        if self.W < 2:
            raise TopologyError("W >= 2 required (got {})".format(self.W))
        if self.N < 1:
            raise TopologyError("N >= 1 required (got {})".format(self.N))

    @property
    def onu_count(self):
        return self.N * self.W


# Field name -> symbol used when reporting violations
PARAM_SYMBOLS = {
    "r_e": "R_E", "r_c": "R_C", "d_b": "D_b", "t_reg": "T_reg", "t_gap": "T_gap",
    "g": "G", "alpha": "alpha", "e_max": "E_max", "l_hdr": "L_hdr"}


def validate_params(params):
    """ Return params with every value as a float, or raise ParamsError naming each violation """
    violations = []
    values = {}

    for field in dataclasses.fields(SystemParams):
        symbol = PARAM_SYMBOLS[field.name]
        raw = getattr(params, field.name)

        try:
            value = float(raw)
        except (TypeError, ValueError):
            violations.append("{} is not a number".format(symbol))
            continue

        if not math.isfinite(value):
            violations.append("{} must be finite".format(symbol))
        elif value <= 0:
            violations.append("{} must be strictly positive".format(symbol))

        values[field.name] = value

    if not violations:
        if values["r_c"] >= values["r_e"]:
            violations.append("R_C < R_E violated")
        if values["alpha"] > values["e_max"]:
            violations.append("alpha <= E_max violated")

    if violations:
        raise ParamsError(violations)

    return SystemParams(**values)


def efficiency_min_cycle(N, params):
    """ Shortest cycle T with (T - N*G)/T >= N*R_C/R_E """
    spare = params.r_e - N * params.r_c
    if spare <= 0:
        return math.inf

    return N * params.g * params.r_e / spare
