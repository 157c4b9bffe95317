#! /usr/bin/env python3

#
#   This file is part of ponplan
#
#   SPDX-FileCopyrightText: 2026  ponplan contributors
#
#   SPDX-License-Identifier: GPL-3.0-only WITH LicenseRef-ponplan-graphviz-linking-source-exception
#


import json
import math
from ponplan.render.render_base import RenderBase


class RenderJSON(RenderBase):
    """ Render rows as JSON lines (one object per row) """
    def _value(self, value):
        # Same digits as CSV cells; non-finite floats become null
        if isinstance(value, float):
            return float(self._cell(value)) if math.isfinite(value) else None

        return value

    def virt_render(self, rows, handle, options=None):
        extra = (options or {}).get("extra", ())

        for row in rows:
            record = {column: self._value(row.get(column)) for column in self.columns}
            for column in extra:
                if column in row:
                    record[column] = self._value(row[column])

            handle.write(json.dumps(record).encode("utf8"))
            handle.write(b"\n")
