#! /usr/bin/env python3

#
#   This file is part of ponplan
#
#   SPDX-FileCopyrightText: 2026  ponplan contributors
#
#   SPDX-License-Identifier: GPL-3.0-only WITH LicenseRef-ponplan-graphviz-linking-source-exception
#


import os
import re
from ponplan.core import Core
from ponplan.model import ParamsError, SystemParams


class Configuration:
    """ System parameters and solver settings from file and command line """

    # Casts must be defined before CONFIG_FIELDS
    def cast_bool(val):
        """ Boolean cast """
        return Core.cast_bool(val)

    FIELD_MODE = 0
    FIELD_DEF = 1
    FIELD_TYPE = 2
    FIELD_DESC = 3

    MODE_PARAM, MODE_SETTING = range(2)

    CONFIG_FILE = "ponplan.conf"

    CONFIG_FIELDS = {
        "r_e_bps": (MODE_PARAM, "10e9", float, "line rate per wavelength (bits/s)"),
        "r_c_bps": (MODE_PARAM, "614.4e6", float, "eCPRI traffic rate per ONU (bits/s)"),
        "d_b_s": (MODE_PARAM, "150e-6", float, "scheduling delay budget (s)"),
        "t_reg_s": (MODE_PARAM, "250e-6", float, "required registration window (s)"),
        "t_gap_s": (MODE_PARAM, "100e-3", float, "maximum gap between registration windows (s)"),
        "g_s": (MODE_PARAM, "1e-6", float, "guard band per slot (s)"),
        "alpha_bytes": (MODE_PARAM, "16", float, "eCPRI basic frame size (bytes)"),
        "e_max_bytes": (MODE_PARAM, "1500", float, "maximum Ethernet payload (bytes)"),
        "l_hdr_bytes": (MODE_PARAM, "26", float, "Ethernet header size (bytes)"),
        "check_window": (MODE_SETTING, "True", cast_bool, "require window >= T_reg"),
        "check_gap": (MODE_SETTING, "True", cast_bool, "require gap <= T_gap"),
        "exact_gap": (MODE_SETTING, "False", cast_bool, "stretch non-registration slots so that gap = T_gap"),
        "bound_all_cycles": (MODE_SETTING, "False", cast_bool, "bound the delay of every cycle, not only the dominant pair"),
        "host_wavelength": (MODE_SETTING, "-1", int, "wavelength hosting registration (-1 = W-1)"),
        "super_cycles": (MODE_SETTING, "3", int, "super-cycles replayed by the simulator"),
        "workers": (MODE_SETTING, "0", int, "sweep worker processes (0 = CPU count)"),
        "w_min": (MODE_SETTING, "2", int, "smallest W in a sweep"),
        "w_max": (MODE_SETTING, "8", int, "largest W in a sweep")}

    @classmethod
    def write_template(cls, path):
        """ Write template configuration to path (directory or file) """
        config_path = os.path.join(path, cls.CONFIG_FILE) if os.path.isdir(path) else path

        # Do not overwrite an existing file
        if os.path.isfile(config_path):
            Core.log("Error: configuration file already exists", Core.LOG_OUTPUT)
            return False

        with open(config_path, "w") as handle:
            handle.write("# ponplan configuration template\n\n")

            for field, spec in cls.CONFIG_FIELDS.items():
                handle.write("## {0}\n#{1}={2}\n\n".format(spec[cls.FIELD_DESC], field, spec[cls.FIELD_DEF]))

        Core.log("Configuration created: {0}".format(config_path), Core.LOG_OUTPUT)
        return True

    def __init__(self, path=None):
        self.values = dict()
        self.path = path
        self.valid = self._add_entry({}) is None

        if path:
            self.valid = self.read_config(path)

    def _add_entry(self, values):
        """ Cast values over defaults; returns an error string or None """
        merged = {field: spec[self.FIELD_DEF] for field, spec in self.CONFIG_FIELDS.items()}
        merged.update(self.values)
        merged.update(values)

        cast = {}
        for field, value in merged.items():
            try:
                cast[field] = self.CONFIG_FIELDS[field][self.FIELD_TYPE](value)
            except (TypeError, ValueError) as error:
                return "invalid value for '{0}' ({1})".format(field, error)

        self.values = cast
        return None

    # Read configuration
    def read_config(self, path):
        values = {}
        line_num = 0

        try:
            with open(path, "r") as handle:
                for line in handle:
                    line = line.rstrip()
                    line_num += 1

                    # Skip comments
                    if re.match(r"^[ \t]*(#.*)*$", line): continue

                    # Check field validity
                    match = re.search(r"^[ \t]*([^= \t]+)[ \t]*=[ \t]*([^#]+?)[ \t]*(#.*)*$", line)

                    if not match or match.group(1) not in self.CONFIG_FIELDS:
                        Core.log("Configuration warning: Invalid line in configuration ({0})".format(line_num), Core.LOG_OUTPUT)
                        continue

                    values[match.group(1)] = match.group(2)

        except IOError:
            Core.log("Error: configuration file not found at location `{}`.  Please run 'ponplan generate' to create a new configuration.".format(path), Core.LOG_OUTPUT)
            return False

        # Check for errors
        error = self._add_entry(values)
        if error:
            Core.log("Configuration error: {0} ({1})".format(error, path), Core.LOG_OUTPUT)
            return False

        return True

    def override(self, assignments):
        """ Apply key=value overrides from the command line """
        values = {}
        for assignment in assignments or []:
            key, sep, value = assignment.partition("=")
            key = key.strip()

            if not sep or key not in self.CONFIG_FIELDS:
                Core.log("Configuration error: unknown override '{0}'".format(assignment), Core.LOG_OUTPUT)
                return False

            values[key] = value.strip()

        error = self._add_entry(values)
        if error:
            Core.log("Configuration error: {0} (command line)".format(error), Core.LOG_OUTPUT)
            return False

        return True

    def params(self):
        """ Validated SystemParams, or None after reporting each violation """
        record = {field: self.values[field] for field, spec in self.CONFIG_FIELDS.items() if spec[self.FIELD_MODE] == self.MODE_PARAM}

        try:
            return SystemParams.from_record(record)
        except ParamsError as error:
            for violation in error.violations:
                Core.log("Configuration error: {0}".format(violation), Core.LOG_OUTPUT)
            return None

    def planner_options(self):
        """ Planner keyword arguments """
        return {"check_window": self.values["check_window"],
                "check_gap": self.values["check_gap"],
                "exact_gap": self.values["exact_gap"],
                "bound_all_cycles": self.values["bound_all_cycles"],
                "host": self.values["host_wavelength"]}
