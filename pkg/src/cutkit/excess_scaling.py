"""Geometric unit scaling over repeated Unit-Flow calls (the local flow
procedure).

Supply is tracked in raw (unit-1) quantities with per-origin ledgers; each
phase works in units of mu (a power of two, halved between phases), routes
with Unit-Flow, discards excess supply descending by origin id, and exits
early when a returned cut has volume beating the termination threshold.
Every run is resumable one phase at a time so callers can interleave many
runs in deterministic lockstep.
"""

import math
from dataclasses import dataclass
from typing import Optional

from .errors import FlowError, InternalError
from .multigraph import CutResult, MultiGraph
from .unit_flow import (COARSE, CUT, Counters, OriginLedger, SourceFunction,
                        unit_flow)

ROUTED = "routed"
CUT_FOUND = "cut"
RUNNING = "running"


def _lnln_floor(m: int) -> float:
    if m < 3:
        return 1.0
    return max(1.0, math.log(math.log(m)))


class ExcessScalingRun:
    """Resumable excess-scaling execution; `step()` advances one phase."""

    def __init__(self, g: MultiGraph, delta: SourceFunction, tau: float,
                 U: int, h: int, w_phase: int = 3, sweep_mode: str = COARSE,
                 m_prime: Optional[int] = None,
                 counters: Optional[Counters] = None):
        if not (0 < tau < 1):
            raise FlowError(f"tau must lie in (0,1), got {tau}")
        if g.m < 1:
            raise FlowError("graph must have at least one edge")
        if delta.total > 2 * g.m:
            raise FlowError(
                f"|delta| = {delta.total} exceeds 2m = {2 * g.m}")
        if h < math.log(g.m):
            raise FlowError(f"h = {h} below ln m")
        if w_phase < 3:
            # w = 3 absorbs the <= 2 units/vertex remainder-carry slack
            raise FlowError("w_phase must be >= 3 under remainder carry")
        self.g = g
        self.delta = delta
        self.tau = tau
        self.U = U
        self.h = h
        self.w_phase = w_phase
        self.sweep_mode = sweep_mode
        self.m_prime = m_prime
        self.counters = counters if counters is not None else Counters()

        self.raw: dict = {}          # v -> OriginLedger of raw supply
        self.raw_total: dict = {}    # v -> int
        for v, per in delta.entries.items():
            if g.deg[v] == 0:
                raise FlowError(f"supply on isolated vertex {v} cannot route")
            led = OriginLedger()
            for o in sorted(per):
                led.add(o, per[o])
            self.raw[v] = led
            self.raw_total[v] = sum(per.values())

        self.F = 1
        for v, tot in self.raw_total.items():
            while tot > 2 * g.deg[v] * self.F:
                self.F *= 2
        self.mu = self.F
        self.j = 0
        self.cum_flows: dict = {}    # (u, v) u < v -> per-slot unit-1 totals
        self.discarded: dict = {}    # origin -> supply
        self.status = RUNNING
        self.cut: Optional[CutResult] = None
        self.routed: dict = {}       # origin -> supply (set at finish)
        self.leftover: dict = {}     # origin -> supply still in excess
        self.routed_by_vertex: dict = {}   # v -> list of (origin, supply)

        if self._all_within_sinks():
            self._finish(ROUTED)

    # -- helpers -----------------------------------------------------------

    def _all_within_sinks(self) -> bool:
        deg = self.g.deg
        return all(tot <= deg[v] for v, tot in self.raw_total.items())

    def _phase_source(self) -> SourceFunction:
        """Withdraw floor(raw/mu) units per vertex, assigning units to origins
        ascending by cumulative flooring so the split is exact and integral."""
        mu = self.mu
        entries = {}
        for v in sorted(self.raw_total):
            tot = self.raw_total[v]
            units = tot // mu
            if units <= 0:
                continue
            led = self.raw[v]
            acc = 0
            per = {}
            for o, amt in led.items_ascending():
                take = (acc + amt) // mu - acc // mu
                acc += amt
                if take > 0:
                    per[o] = take
                    led.remove(o, take * mu)
            if sum(per.values()) != units:
                raise InternalError("unitization lost supply")
            self.raw_total[v] = tot - units * mu
            entries[v] = per
        return SourceFunction(entries)

    def _merge_back(self, state) -> None:
        mu = self.mu
        for v, led in state.ledgers.items():
            items = led.items_ascending()
            if not items:
                continue
            mine = self.raw.get(v)
            if mine is None:
                mine = OriginLedger()
                self.raw[v] = mine
            add = 0
            for o, units in items:
                mine.add(o, units * mu)
                add += units * mu
            self.raw_total[v] = self.raw_total.get(v, 0) + add

    def _discard_excess(self, state) -> None:
        mu = self.mu
        deg = self.g.deg
        for v in sorted(state.ledgers):
            ex_units = state.fv[v] - deg[v]
            if ex_units <= 0:
                continue
            amount = ex_units * mu
            for o, amt in self.raw[v].take_descending(amount):
                self.discarded[o] = self.discarded.get(o, 0) + amt
            self.raw_total[v] -= amount

    def _accumulate_flow(self, state) -> None:
        mu = self.mu
        for key, slots in state.flows.items():
            cur = self.cum_flows.get(key)
            if cur is None:
                self.cum_flows[key] = [f * mu for f in slots]
            else:
                for t, f in enumerate(slots):
                    cur[t] += f * mu

    def _finish(self, status: str, cut: Optional[CutResult] = None) -> None:
        deg = self.g.deg
        for v in sorted(self.raw_total):
            tot = self.raw_total[v]
            if tot <= 0:
                continue
            room = min(tot, deg[v])
            absorbed = []
            for o, amt in self.raw[v].items_ascending():
                if room > 0:
                    grab = amt if amt <= room else room
                    absorbed.append((o, grab))
                    self.routed[o] = self.routed.get(o, 0) + grab
                    room -= grab
                    amt -= grab
                if amt > 0:
                    self.leftover[o] = self.leftover.get(o, 0) + amt
            if absorbed:
                self.routed_by_vertex[v] = absorbed
        total = (sum(self.routed.values()) + sum(self.discarded.values())
                 + sum(self.leftover.values()))
        if total != self.delta.total:
            raise InternalError(
                f"supply accounting mismatch: {total} != {self.delta.total}")
        cap = 2 * self.U * self.F
        for slots in self.cum_flows.values():
            for f in slots:
                if abs(f) > cap:
                    raise InternalError(
                        f"cumulative edge flow {f} exceeds 2UF = {cap}")
        self.status = status
        self.cut = cut

    # -- public stepping -----------------------------------------------------

    def step(self) -> str:
        """Advance one Unit-Flow phase; returns the run status afterwards."""
        if self.status != RUNNING:
            return self.status
        phase_delta = self._phase_source()
        out = unit_flow(self.g, phase_delta, self.U, self.h, self.w_phase,
                        self.sweep_mode, self.m_prime, counters=self.counters)
        self.counters.phases += 1
        self._accumulate_flow(out.state)
        self._merge_back(out.state)
        self._discard_excess(out.state)

        if out.case == CUT:
            vol_a = self.g.volume(out.cut.side)
            threshold = (self.tau * self.delta.total
                         / (10.0 * self.mu * math.log(2 * self.mu + _TINY)
                            * _lnln_floor(self.g.m)))
            if vol_a >= threshold:
                side = out.cut.side
                if vol_a > 2 * self.g.m - vol_a:
                    side = frozenset(range(self.g.n)) - side
                self._finish(CUT_FOUND, self.g.cut_stats(side))
                return self.status

        if self._all_within_sinks():
            self._finish(ROUTED)
            return self.status

        if self.mu <= 1:
            raise InternalError("scaling reached mu = 1 without terminating")
        self.mu //= 2
        self.j += 1
        return self.status

    def run(self) -> "ScalingOutcome":
        while self.status == RUNNING:
            self.step()
        return ScalingOutcome(self.status, self.cut, self)

    # -- reporting -------------------------------------------------------------

    def residue_total(self) -> int:
        """Supply still parked at vertices beyond their sink capacity."""
        return sum(self.leftover.values())

    def arc_flows(self) -> dict:
        out = {}
        for (u, v), slots in self.cum_flows.items():
            for t, f in enumerate(slots):
                if f != 0:
                    out[(u, v, t)] = f
                    out[(v, u, t)] = -f
        return out

    def flow_ending_supply(self) -> dict:
        """Supply per the pre-flow identity (includes discarded supply):
        f(v) = delta(v) + inflow(v)."""
        inflow = {}
        for (u, v), slots in self.cum_flows.items():
            s = sum(slots)
            inflow[v] = inflow.get(v, 0) + s
            inflow[u] = inflow.get(u, 0) - s
        out = {}
        for v in range(self.g.n):
            val = self.delta.vertex_total(v) + inflow.get(v, 0)
            if val:
                out[v] = val
        return out


_TINY = 1e-12


@dataclass
class ScalingOutcome:
    case: str                      # ROUTED or CUT_FOUND
    cut: Optional[CutResult]
    state: ExcessScalingRun

    @property
    def routed_total(self) -> int:
        return sum(self.state.routed.values())


def excess_scaling(g: MultiGraph, delta: SourceFunction, tau: float, U: int,
                   h: int, w_phase: int = 3, sweep_mode: str = COARSE,
                   m_prime: Optional[int] = None,
                   counters: Optional[Counters] = None) -> ScalingOutcome:
    """Run the scaling procedure to completion."""
    return ExcessScalingRun(g, delta, tau, U, h, w_phase, sweep_mode,
                            m_prime, counters).run()


def routed_per_origin(run: ExcessScalingRun) -> SourceFunction:
    """Per-vertex, per-origin supply routed to sinks (the delta' function)."""
    if run.status == RUNNING:
        raise FlowError("run not finished")
    return SourceFunction(
        {v: dict(items) for v, items in run.routed_by_vertex.items()})
