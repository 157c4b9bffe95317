#! /usr/bin/env python3

#
#   This file is part of ponplan
#
#   SPDX-FileCopyrightText: 2026  ponplan contributors
#
#   SPDX-License-Identifier: GPL-3.0-only WITH LicenseRef-ponplan-graphviz-linking-source-exception
#


import math
import sys
import threading


class Core:
    """ Shared logging, formatting and casts """
    LOG_OUTPUT, LOG_INFO, LOG_DEBUG, LOG_TRACE = range(4)
    VERSION = "0.3.0"

    # Relative slack for floating comparisons against budgets
    EPSILON = 1e-12

    log_lock = threading.RLock()
    log_level = LOG_OUTPUT

    @staticmethod
    def cast_bool(val):
        """ Boolean cast """
        if isinstance(val, bool):
            return val

        return str(val).strip().lower() in ("true", "yes", "1", "on")

    @staticmethod
    def format_float(val):
        """ Fixed 9 significant digit rendering """
        if val is None:
            return ""
        if isinstance(val, bool) or isinstance(val, int):
            return str(int(val))
        if math.isinf(val):
            return "inf" if val > 0 else "-inf"
        if math.isnan(val):
            return "nan"

        return "{:.9g}".format(val)

    @staticmethod
    def within(value, limit):
        """ value <= limit, tolerating rounding in the last bits """
        return value <= limit + Core.EPSILON * max(1.0, abs(limit))

    @classmethod
    def set_verbosity(cls, count):
        cls.log_level = min(cls.LOG_OUTPUT + count, cls.LOG_TRACE)

    @classmethod
    def log(cls, message, level, end="\n", file=sys.stderr):
        """ Conditionally print output """
        if level <= cls.log_level:
            with cls.log_lock:
                print(message, end=end, file=file)
