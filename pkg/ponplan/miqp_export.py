#! /usr/bin/env python3

#
#   This file is part of ponplan
#
#   SPDX-FileCopyrightText: 2026  ponplan contributors
#
#   SPDX-License-Identifier: GPL-3.0-only WITH LicenseRef-ponplan-graphviz-linking-source-exception
#


import math
import os
from ponplan.core import Core
from ponplan.delay_analysis import backlog_trace
from ponplan.redistribution import OnuId, compute_nr, enumerate_assignments
from ponplan.slotting import packets_per_slot

# Third party modules
from pyomo.environ import (
    ConcreteModel, Set, Var, Constraint, Objective, NonNegativeReals, PositiveIntegers, Binary, minimize, value
)


def _pairs(N, W):
    """ Distinct (i_n, i_r) pairs; ONUs sharing a pair share every constraint """
    return sorted(set((entry.onu.i_n, entry.i_r) for entry in enumerate_assignments(N, W)))


class MIQPExport:
    """ Mixed-integer quadratic model of one descending-N iteration, for external solvers """
    EPSILON = 1e-6
    FORMATS = {".lp": "lp", ".mps": "mps"}

    # Constraint components mirroring the check_plan reasons
    REASONS = {"capacity": "capacity", "cycle": "cycle", "window": "window", "gap": "gap",
               "delay_reg_first": "delay", "delay_reg": "delay", "delay_nr": "delay", "drain": "drain"}

    def __init__(self, params):
        self.params = params
        self.big_m = 10 * params.t_gap

    def build(self, N, W):
        """ ConcreteModel minimizing the registration window at fixed (N, W) """
        p = self.params
        n_r = compute_nr(N, W)
        a = p.alpha / p.r_c
        pairs = _pairs(N, W)

        f_bound = int(p.d_b * p.r_e / p.alpha) + 1
        k_n_bound = max(1, int(p.t_gap / (N * p.g)))
        k_r_bound = math.ceil(p.t_reg / (n_r * p.g)) + 1

        m = ConcreteModel(name="ponplan_N{}_W{}".format(N, W))
        m.ONU = Set(initialize=range(len(pairs)), ordered=True)

        m.f_n = Var(domain=PositiveIntegers, bounds=(1, f_bound))
        m.f_r = Var(domain=PositiveIntegers, bounds=(1, f_bound))
        m.p_n = Var(domain=PositiveIntegers, bounds=(1, f_bound))
        m.p_r = Var(domain=PositiveIntegers, bounds=(1, f_bound))
        m.k_n = Var(domain=PositiveIntegers, bounds=(1, k_n_bound))
        m.k_r = Var(domain=PositiveIntegers, bounds=(1, k_r_bound))
        m.t_sn = Var(domain=NonNegativeReals, bounds=(p.g, p.d_b))
        m.t_sr = Var(domain=NonNegativeReals, bounds=(p.g, p.d_b))
        m.multi_reg = Var(domain=Binary)

        # Clamped registration backlogs after the first, second-to-last and last registration slot
        m.b_reg = Var(m.ONU, domain=NonNegativeReals)
        m.b_prev = Var(m.ONU, domain=NonNegativeReals)
        m.b_last = Var(m.ONU, domain=NonNegativeReals)
        m.delta = Var(m.ONU, domain=Binary)
        m.delta_prev = Var(m.ONU, domain=Binary)
        m.delta_last = Var(m.ONU, domain=Binary)

        # Packet counts: p = ceil(f*alpha/E_max)
        m.ceil_n_lo = Constraint(expr=m.p_n >= m.f_n * p.alpha / p.e_max)
        m.ceil_n_hi = Constraint(expr=m.p_n <= m.f_n * p.alpha / p.e_max + 1 - self.EPSILON)
        m.ceil_r_lo = Constraint(expr=m.p_r >= m.f_r * p.alpha / p.e_max)
        m.ceil_r_hi = Constraint(expr=m.p_r <= m.f_r * p.alpha / p.e_max + 1 - self.EPSILON)

        # Slot sizes
        m.slot_n = Constraint(expr=m.t_sn >= (m.f_n * p.alpha + m.p_n * p.l_hdr) / p.r_e + p.g)
        m.slot_r = Constraint(expr=m.t_sr >= (m.f_r * p.alpha + m.p_r * p.l_hdr) / p.r_e + p.g)

        # Capacity, cycle, window and gap
        m.capacity = Constraint(expr=m.f_n * a >= N * m.t_sn)
        m.cycle = Constraint(expr=N * m.t_sn <= p.d_b)
        m.window = Constraint(expr=m.k_r * n_r * m.t_sr >= p.t_reg)
        m.gap = Constraint(expr=m.k_n * N * m.t_sn <= p.t_gap)

        # multi_reg = 1 exactly when k_r >= 2
        m.multi_lo = Constraint(expr=m.k_r >= 1 + m.multi_reg)
        m.multi_hi = Constraint(expr=m.k_r <= 1 + (k_r_bound - 1) * m.multi_reg)

        def gap_reg(o):
            i_n, i_r = pairs[o]
            return (N - i_n) * m.t_sn + i_r * m.t_sr

        def gap_nr(o):
            i_n, i_r = pairs[o]
            return i_n * m.t_sn + (n_r - i_r) * m.t_sr

        growth = n_r * m.t_sr - m.f_r * a
        raw = {
            "": lambda o: gap_reg(o) - m.f_r * a,
            # Equals b_reg when k_r = 1; only read through delay_reg, which is then relaxed
            "_prev": lambda o: m.b_reg[o] + (m.k_r - 1 - m.multi_reg) * growth,
            "_last": lambda o: m.b_reg[o] + (m.k_r - 1) * growth,
        }

        for suffix, rule in raw.items():
            self._clamp(m, suffix, rule)

        # Worst-case delays: first registration gap alone when k_r = 1, else T_cr plus the previous backlog
        m.delay_reg_first = Constraint(m.ONU, rule=lambda m, o: gap_reg(o) <= p.d_b + self.big_m * m.multi_reg)
        m.delay_reg = Constraint(m.ONU, rule=lambda m, o: n_r * m.t_sr + m.b_prev[o] <= p.d_b + self.big_m * (1 - m.multi_reg))
        m.delay_nr = Constraint(m.ONU, rule=lambda m, o: gap_nr(o) + m.b_last[o] <= p.d_b)
        m.drain = Constraint(m.ONU, rule=lambda m, o: m.b_last[o] + gap_nr(o) - m.f_n * a - (m.k_n - 1) * (m.f_n * a - N * m.t_sn) <= 0)

        m.objective = Objective(expr=m.k_r * n_r * m.t_sr, sense=minimize)

        return m

    def _clamp(self, m, suffix, rule):
        """ b = max{0, rule} through Big-M """
        b = getattr(m, "b_reg" if not suffix else "b" + suffix)
        d = getattr(m, "delta" + suffix)

        setattr(m, "clamp{}_lo".format(suffix), Constraint(m.ONU, rule=lambda m, o: b[o] >= rule(o)))
        setattr(m, "clamp{}_hi".format(suffix),
                Constraint(m.ONU, rule=lambda m, o: b[o] <= rule(o) + self.big_m * (1 - d[o])))
        setattr(m, "clamp{}_zero".format(suffix), Constraint(m.ONU, rule=lambda m, o: b[o] <= self.big_m * d[o]))

    def assign(self, model, plan):
        """ Load a plan's values, and the backlogs check_plan derives from it, into a built model """
        p = self.params
        a = p.alpha / p.r_c

        for name in ("f_n", "f_r", "k_n", "k_r", "t_sn", "t_sr"):
            getattr(model, name).set_value(getattr(plan, name))
        model.p_n.set_value(packets_per_slot(plan.f_n, p))
        model.p_r.set_value(packets_per_slot(plan.f_r, p))
        model.multi_reg.set_value(int(plan.k_r >= 2))

        growth = plan.t_cr - plan.f_r * a
        for o, (i_n, i_r) in enumerate(_pairs(plan.N, plan.W)):
            gaps_reg = (plan.N - i_n) * plan.t_sn + i_r * plan.t_sr
            backlog_reg, _ = backlog_trace(OnuId(0, i_n), plan, p, i_r)
            prev = backlog_reg[-2] if plan.k_r >= 2 else backlog_reg[0]
            raws = (gaps_reg - plan.f_r * a,
                    backlog_reg[0] + max(0, plan.k_r - 2) * growth,
                    backlog_reg[0] + (plan.k_r - 1) * growth)

            for suffix, backlog, x in zip(("", "_prev", "_last"), (backlog_reg[0], prev, backlog_reg[-1]), raws):
                getattr(model, "b_reg" if not suffix else "b" + suffix)[o].set_value(backlog)
                getattr(model, "delta" + suffix)[o].set_value(int(x > 0))

        return model

    @staticmethod
    def violations(model, tolerance=1e-9):
        """ Names of constraint components violated at the model's current values (absolute tolerance) """
        names = []
        for constraint in model.component_objects(Constraint, active=True):
            for index in constraint:
                data = constraint[index]
                body = value(data.body)
                if (data.lb is not None and body < data.lb - tolerance) or \
                   (data.ub is not None and body > data.ub + tolerance):
                    names.append(constraint.local_name)
                    break

        return names

    def write(self, N, W, path):
        """ Write the model; format follows the file extension (.lp default) """
        extension = os.path.splitext(path)[1].lower()
        file_format = self.FORMATS.get(extension, "lp")

        model = self.build(N, W)
        model.write(path, format=file_format, io_options={"symbolic_solver_labels": True})
        Core.log("MIQP model written: {}".format(path), Core.LOG_INFO)

        return path


def export_miqp(N, W, params, path):
    return MIQPExport(params).write(N, W, path)
