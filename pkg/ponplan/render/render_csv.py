#! /usr/bin/env python3

#
#   This file is part of ponplan
#
#   SPDX-FileCopyrightText: 2026  ponplan contributors
#
#   SPDX-License-Identifier: GPL-3.0-only WITH LicenseRef-ponplan-graphviz-linking-source-exception
#


import csv
import io
from ponplan.render.render_base import RenderBase


class RenderCSV(RenderBase):
    """ Render rows as CSV with a header row """
    def virt_render(self, rows, handle, options=None):
        text = io.StringIO()
        writer = csv.writer(text, lineterminator="\n")
        writer.writerow(self.columns)

        for row in rows:
            writer.writerow([self._cell(row.get(column)) for column in self.columns])

        handle.write(text.getvalue().encode("utf-8"))
