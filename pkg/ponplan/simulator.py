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
from ponplan.redistribution import enumerate_assignments, physical_wavelength

# Third party modules
import simpy


class TimelineError(RuntimeError):
    """ Two transmissions overlap on one wavelength """


@dataclasses.dataclass(frozen=True)
class SlotEvent:
    t_start: float
    wavelength: int
    onu: object
    cycle_type: str
    super_cycle: int
    cycle: int
    frames_served: int
    queue_after: int
    max_delay: float

    def to_record(self):
        return {"t_start_s": self.t_start,
                "wavelength": self.wavelength,
                "lambda": self.onu.lam if self.onu else None,
                "i_n": self.onu.i_n if self.onu else None,
                "cycle_type": self.cycle_type,
                "frames_served": self.frames_served,
                "queue_after_frames": self.queue_after,
                "max_delay_s": self.max_delay}


class SimTrace:
    """ Slot events of a replay, indexed per ONU """
    def __init__(self, plan, params, super_cycles, events):
        self.plan = plan
        self.params = params
        self.super_cycles = super_cycles
        self.events = sorted(events, key=lambda event: (event.t_start, event.wavelength))
        self._index = {}

        for event in self.events:
            if event.onu is not None:
                self._index.setdefault((event.onu, event.super_cycle, event.cycle_type), []).append(event)

    def slots(self, onu, super_cycle, cycle_type):
        """ Events of one ONU in one super-cycle and cycle type, in cycle order """
        return self._index.get((onu, super_cycle, cycle_type), [])

    @property
    def worst_slot(self):
        served = [event for event in self.events if event.max_delay is not None]
        return max(served, key=lambda event: event.max_delay) if served else None

    @property
    def max_delay(self):
        worst = self.worst_slot
        return worst.max_delay if worst else 0.0

    def max_delay_from(self, super_cycle):
        """ Largest frame delay from the given super-cycle onward """
        delays = [event.max_delay for event in self.events
                  if event.max_delay is not None and event.super_cycle >= super_cycle]
        return max(delays, default=0.0)

    @property
    def end_queues(self):
        """ Per super-cycle: ONU -> frames queued after its last non-registration slot """
        queues = []
        for super_cycle in range(self.super_cycles):
            ends = {}
            for entry in enumerate_assignments(self.plan.N, self.plan.W):
                events = self.slots(entry.onu, super_cycle, Simulator.CYCLE_NR)
                ends[entry.onu] = events[-1].queue_after if events else 0
            queues.append(ends)

        return queues

    def to_rows(self):
        return [event.to_record() for event in self.events]


class Simulator:
    """ Frame-granular replay of a cycle plan over whole super-cycles """
    CYCLE_WINDOW, CYCLE_REG, CYCLE_NR = "registration", "reg", "nonreg"

    def __init__(self, plan, params, super_cycles=3):
        if super_cycles < 1:
            raise ValueError("super_cycles >= 1 required")

        self.plan = plan.validate(params)
        self.params = params
        self.super_cycles = super_cycles
        self.period = params.frame_period
        self.served = {}
        self.events = []

    def _arrived(self, t):
        """ Frames whose arrival completed strictly before t """
        # A frame landing on t within rounding counts as arriving at t
        return max(0, math.ceil(t / self.period * (1 - Core.EPSILON)) - 1)

    def _timeline(self):
        """ Per physical wavelength: (start, duration, cycle type, onu, super-cycle, cycle) in start order """
        plan = self.plan
        host = plan.host_wavelength
        timeline = {wavelength: [] for wavelength in range(plan.W)}
        assignments = enumerate_assignments(plan.N, plan.W)

        for super_cycle in range(self.super_cycles):
            origin = super_cycle * plan.super_cycle
            timeline[host].append((origin, plan.window, self.CYCLE_WINDOW, None, super_cycle, 0))

            for cycle in range(plan.k_r):
                start = origin + cycle * plan.t_cr
                for entry in assignments:
                    wavelength = physical_wavelength(entry.w_r, host, plan.W)
                    timeline[wavelength].append((start + entry.i_r * plan.t_sr, plan.t_sr, self.CYCLE_REG,
                                                 entry.onu, super_cycle, cycle))

            for cycle in range(plan.k_n):
                start = origin + plan.window + cycle * plan.t_cn
                for entry in assignments:
                    timeline[entry.onu.lam].append((start + entry.onu.i_n * plan.t_sn, plan.t_sn, self.CYCLE_NR,
                                                    entry.onu, super_cycle, cycle))

        for slots in timeline.values():
            slots.sort(key=lambda slot: slot[0])

        return timeline

    def _serve(self, start, wavelength, cycle_type, onu, super_cycle, cycle):
        """ Transmit up to f oldest frames at slot start """
        if onu is None:
            self.events.append(SlotEvent(start, wavelength, None, cycle_type, super_cycle, cycle, 0, 0, None))
            return

        capacity = self.plan.f_r if cycle_type == self.CYCLE_REG else self.plan.f_n
        served = self.served.get(onu, 0)
        queue = self._arrived(start) - served
        count = min(capacity, queue)

        # Oldest waiting frame sets the slot's delay
        delay = start - (served + 1) * self.period if count > 0 else None
        self.served[onu] = served + count
        self.events.append(SlotEvent(start, wavelength, onu, cycle_type, super_cycle, cycle,
                                     count, queue - count, delay))

    def _wavelength_run(self, env, wavelength, slots):
        busy_until = 0.0
        for start, duration, cycle_type, onu, super_cycle, cycle in slots:
            if not Core.within(busy_until, start):
                raise TimelineError("overlap on wavelength {} at t={}".format(wavelength, Core.format_float(start)))

            yield env.timeout(max(0.0, start - env.now))
            busy_until = start + duration
            self._serve(start, wavelength, cycle_type, onu, super_cycle, cycle)

    def run(self):
        """ Replay the plan; returns a SimTrace """
        env = simpy.Environment()
        self.served = {}
        self.events = []

        for wavelength, slots in self._timeline().items():
            env.process(self._wavelength_run(env, wavelength, slots))

        env.run()
        Core.log("Simulated {} slot events over {} super-cycles".format(len(self.events), self.super_cycles), Core.LOG_DEBUG)

        return SimTrace(self.plan, self.params, self.super_cycles, self.events)


def simulate(plan, params, super_cycles=3):
    return Simulator(plan, params, super_cycles).run()


@dataclasses.dataclass(frozen=True)
class Mismatch:
    onu: object
    super_cycle: int
    cycle_type: str
    cycle: int
    quantity: str
    simulated: float
    analytic: float

    def __str__(self):
        return "ONU ({}, {}) super-cycle {} {} cycle {}: {} simulated {} analytic {}".format(
            self.onu.lam, self.onu.i_n, self.super_cycle, self.cycle_type, self.cycle, self.quantity,
            Core.format_float(self.simulated), Core.format_float(self.analytic))


@dataclasses.dataclass(frozen=True)
class ComparisonReport:
    tolerance: float
    checked: int
    max_error: float
    mismatches: list

    @property
    def passed(self):
        return not self.mismatches


def compare_with_analysis(trace, profiles, params):
    """ Check simulated delays and queues against analytic profiles, skipping the warm-up super-cycle """
    if trace.super_cycles < 2:
        raise ValueError("comparison needs at least two super-cycles")

    tolerance = 2 * params.frame_period
    period = params.frame_period
    mismatches = []
    checked = 0
    max_error = 0.0

    for profile in profiles:
        for super_cycle in range(1, trace.super_cycles):
            reg = trace.slots(profile.onu, super_cycle, Simulator.CYCLE_REG)
            nonreg = trace.slots(profile.onu, super_cycle, Simulator.CYCLE_NR)

            expected = []
            if reg and reg[-1].max_delay is not None:
                expected.append((reg[-1], "d_reg_last", reg[-1].max_delay, profile.d_reg_last))
            if nonreg and nonreg[0].max_delay is not None:
                expected.append((nonreg[0], "d_nr_first", nonreg[0].max_delay, profile.d_nr_first))

            # Negative analytic backlog is an empty queue
            for event, backlog in zip(reg, profile.backlog_reg):
                expected.append((event, "backlog_reg", event.queue_after * period, max(0.0, backlog)))
            for event, backlog in zip(nonreg, profile.backlog_nr):
                expected.append((event, "backlog_nr", event.queue_after * period, max(0.0, backlog)))

            for event, quantity, simulated, analytic in expected:
                checked += 1
                error = abs(simulated - analytic)
                max_error = max(max_error, error)

                if not Core.within(error, tolerance):
                    mismatches.append(Mismatch(profile.onu, super_cycle, event.cycle_type, event.cycle,
                                               quantity, simulated, analytic))

    for mismatch in mismatches[:20]:
        Core.log("Mismatch: {}".format(mismatch), Core.LOG_INFO)

    return ComparisonReport(tolerance, checked, max_error, mismatches)


def drain_check(trace):
    """ Total frames left queued at the end of each super-cycle """
    return [sum(ends.values()) for ends in trace.end_queues]
