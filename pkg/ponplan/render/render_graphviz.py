#! /usr/bin/env python3

#
#   This file is part of ponplan
#
#   SPDX-FileCopyrightText: 2026  ponplan contributors
#
#   SPDX-License-Identifier: GPL-3.0-only WITH LicenseRef-ponplan-graphviz-linking-source-exception
#


import io
from ponplan.redistribution import assignment_grid, compute_nr, physical_wavelength

# Third party modules
import pygraphviz


class RenderGraphviz:
    """ Render the registration-cycle assignment grid as Graphviz SVG """
    STYLES = {
        "onu": {"color": "black", "fillcolor": "lightblue:white", "style": "filled", "gradientangle": "270", "shape": "box", "fontsize": "12"},
        "vacant": {"color": "gray", "fontcolor": "gray", "style": "dashed", "shape": "box", "fontsize": "12"},
        "wavelength": {"color": "black", "fillcolor": "green:white", "style": "filled", "gradientangle": "270", "shape": "note", "fontsize": "14"},
        "host": {"color": "black", "fillcolor": "red:white", "style": "filled", "gradientangle": "270", "shape": "note", "fontsize": "14"},
        "order": {"style": "invis"}
    }

    def __init__(self, N, W, host=-1):
        self.N = N
        self.W = W
        self.host = W - 1 if host < 0 else host

    def _add_wavelength(self, svg, w_r, column):
        """ Add one data wavelength and its registration slots """
        physical = physical_wavelength(w_r, self.host, self.W)
        head = "wl{}".format(physical)
        svg.add_node(head, label="wavelength {}".format(physical), **self.STYLES["wavelength"])

        previous = head
        for i_r, entry in enumerate(column):
            node_id = "slot{}_{}".format(physical, i_r)
            if entry:
                svg.add_node(node_id, label="N({}, {})\ni_r={}".format(entry.onu.lam, entry.onu.i_n, i_r), **self.STYLES["onu"])
            else:
                svg.add_node(node_id, label="vacant\ni_r={}".format(i_r), **self.STYLES["vacant"])

            svg.add_edge(previous, node_id, **self.STYLES["order"])
            previous = node_id

    def build(self):
        """ AGraph with one column per data wavelength """
        grid = assignment_grid(self.N, self.W)
        svg = pygraphviz.AGraph(directed=True, rankdir="TB", nodesep=".3", ranksep=".3", fontsize="16", pad="0.5",
                                label="Registration cycle: N={}, W={}, N_r={}".format(self.N, self.W, compute_nr(self.N, self.W)))

        svg.add_node("host", label="wavelength {}\nregistration window".format(self.host), **self.STYLES["host"])
        for w_r in range(self.W - 1):
            self._add_wavelength(svg, w_r, [row[w_r] for row in grid])

        # Keep wavelength headers on one rank
        svg.add_subgraph(["host"] + ["wl{}".format(physical_wavelength(w_r, self.host, self.W)) for w_r in range(self.W - 1)], rank="same")

        return svg

    def render_bytes(self):
        """ SVG as bytes """
        svg = self.build()
        svg.layout(prog="dot")
        handle = io.BytesIO()
        svg.draw(path=handle, format="svg")

        return handle.getvalue()

    def render_file(self, path):
        with open(path, "wb") as handle:
            handle.write(self.render_bytes())
