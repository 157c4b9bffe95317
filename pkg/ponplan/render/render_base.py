#! /usr/bin/env python3

#
#   This file is part of ponplan
#
#   SPDX-FileCopyrightText: 2026  ponplan contributors
#
#   SPDX-License-Identifier: GPL-3.0-only WITH LicenseRef-ponplan-graphviz-linking-source-exception
#


import io
from ponplan.core import Core


class RenderBase:
    """ Render tabular results """
    def __init__(self, columns):
        self.columns = list(columns)

    def _cell(self, value):
        """ Text form of one value """
        if value is None:
            return ""
        if isinstance(value, float):
            return Core.format_float(value)

        return str(value)

    def virt_render(self, rows, handle, options=None):
        """ Write rows to a binary handle; each format overrides this """
        raise NotImplementedError("{} does not render tables".format(type(self).__name__))

    def render_bytes(self, rows, options=None):
        """ Get render as bytes """
        handle = io.BytesIO()
        self.virt_render(rows, handle, options)

        return handle.getvalue()

    def render_file(self, rows, path, options=None):
        """ Write render to path """
        with open(path, "wb") as handle:
            self.virt_render(rows, handle, options)
