"""Bounded-height push-relabel routing of unit supply ("Unit-Flow").

Each vertex is a sink of capacity d(v); labels are capped at h; the active
vertex with the lowest label is discharged first (FIFO within a label).
Every unit of supply carries an origin id, moved between per-vertex ledgers
in ascending-origin order so that per-origin routing totals are exact.

Termination lands in exactly one of three cases: all supply absorbed, all
sinks saturated, or a low-conductance level-set cut extracted by a sweep
over the final labels.
"""

import heapq
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import FlowError, InternalError
from .multigraph import CutResult, MultiGraph

FEASIBLE = "feasible"
ALL_SATURATED = "all_saturated"
CUT = "cut"

COARSE = "coarse"
FINE = "fine"

_EPS = 1e-9


class SourceFunction:
    """Non-negative integer supply per vertex, split by origin id."""

    def __init__(self, entries: dict):
        self.entries = {}
        total = 0
        for v, per_origin in entries.items():
            cleaned = {}
            for o, units in per_origin.items():
                if units < 0:
                    raise FlowError(f"negative supply at vertex {v}")
                if units > 0:
                    cleaned[o] = units
                    total += units
            if cleaned:
                self.entries[v] = cleaned
        self.total = total

    @classmethod
    def from_totals(cls, totals: dict, origin=None) -> "SourceFunction":
        """One origin per vertex (default: the vertex id itself)."""
        return cls({v: {v if origin is None else origin: u}
                    for v, u in totals.items()})

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple]) -> "SourceFunction":
        """Build from (vertex, units, origin) triples, summing duplicates."""
        entries: dict = {}
        for v, units, origin in pairs:
            per = entries.setdefault(v, {})
            per[origin] = per.get(origin, 0) + units
        return cls(entries)

    def vertex_total(self, v: int) -> int:
        return sum(self.entries.get(v, {}).values())

    def vertex_totals(self) -> dict:
        return {v: sum(per.values()) for v, per in self.entries.items()}

    def per_origin_totals(self) -> dict:
        out: dict = {}
        for per in self.entries.values():
            for o, units in per.items():
                out[o] = out.get(o, 0) + units
        return out

    def origins(self):
        return sorted(self.per_origin_totals())

    def __len__(self):
        return len(self.entries)


class OriginLedger:
    """Per-vertex multiset of (origin, units); supports ascending-origin
    withdrawal (pushes, absorption) and descending-origin removal (discards).
    """

    __slots__ = ("cnt", "heap")

    def __init__(self):
        self.cnt = {}
        self.heap = []

    def add(self, origin: int, units: int) -> None:
        if units <= 0:
            return
        if origin not in self.cnt:
            heapq.heappush(self.heap, origin)
            self.cnt[origin] = units
        else:
            self.cnt[origin] += units

    def take_ascending(self, units: int):
        out = []
        cnt, heap = self.cnt, self.heap
        while units > 0:
            o = heap[0]
            have = cnt.get(o, 0)
            if have == 0:
                heapq.heappop(heap)
                continue
            grab = have if have <= units else units
            if grab == have:
                del cnt[o]
                heapq.heappop(heap)
            else:
                cnt[o] = have - grab
            out.append((o, grab))
            units -= grab
        return out

    def remove(self, origin: int, units: int) -> None:
        have = self.cnt.get(origin, 0)
        if have < units:
            raise InternalError("ledger underflow on removal")
        if have == units:
            del self.cnt[origin]
        else:
            self.cnt[origin] = have - units

    def take_descending(self, units: int):
        out = []
        for o in sorted(self.cnt, reverse=True):
            if units <= 0:
                break
            have = self.cnt[o]
            grab = have if have <= units else units
            if grab == have:
                del self.cnt[o]
            else:
                self.cnt[o] = have - grab
            out.append((o, grab))
            units -= grab
        if units > 0:
            raise InternalError("ledger underflow on discard")
        return out

    def items_ascending(self):
        return sorted((o, u) for o, u in self.cnt.items() if u > 0)

    def total(self) -> int:
        return sum(self.cnt.values())


@dataclass
class Counters:
    pushes: int = 0
    relabels: int = 0
    relabel_work: int = 0
    units_moved: int = 0
    phases: int = 0
    unit_flow_calls: int = 0

    @property
    def work(self) -> int:
        """The operation-count the runtime lemma envelopes: pushes plus the
        degree-cost of every relabel."""
        return self.pushes + self.relabel_work

    def add(self, other: "Counters") -> None:
        self.pushes += other.pushes
        self.relabels += other.relabels
        self.relabel_work += other.relabel_work
        self.units_moved += other.units_moved
        self.phases += other.phases
        self.unit_flow_calls += other.unit_flow_calls

    def as_dict(self) -> dict:
        return {"pushes": self.pushes, "relabels": self.relabels,
                "relabel_work": self.relabel_work,
                "units_moved": self.units_moved, "phases": self.phases,
                "unit_flow_calls": self.unit_flow_calls, "work": self.work}


class PreflowState:
    """Flows, labels, per-origin supply and counters of one Unit-Flow run."""

    def __init__(self, g: MultiGraph, delta: SourceFunction, U: int, h: int,
                 w: int):
        self.g = g
        self.delta = delta
        self.U = U
        self.h = h
        self.w = w
        self.labels = [0] * g.n
        self.fv = [0] * g.n
        self.ledgers: dict = {}
        self.flows: dict = {}       # (u, v) u < v -> per-slot unit list
        self.counters = Counters()
        for v, per in delta.entries.items():
            led = OriginLedger()
            for o in sorted(per):
                led.add(o, per[o])
            self.ledgers[v] = led
            self.fv[v] = sum(per.values())

    def excess(self, v: int) -> int:
        e = self.fv[v] - self.g.deg[v]
        return e if e > 0 else 0

    def total_excess(self) -> int:
        return sum(self.excess(v) for v in range(self.g.n))

    def total_absorbed(self) -> int:
        return sum(min(self.fv[v], self.g.deg[v]) for v in range(self.g.n))

    def arc_flows(self) -> dict:
        """Signed per-slot flows in both directions, for the verifier."""
        out = {}
        for (u, v), slots in self.flows.items():
            for t, f in enumerate(slots):
                if f != 0:
                    out[(u, v, t)] = f
                    out[(v, u, t)] = -f
        return out

    def supply_items(self, v: int):
        led = self.ledgers.get(v)
        return led.items_ascending() if led is not None else []

    def absorbed_by_origin(self, v: int):
        """Attribute min(f(v), d(v)) to origins in ascending-origin order."""
        room = min(self.fv[v], self.g.deg[v])
        out = []
        for o, units in self.supply_items(v):
            if room <= 0:
                break
            grab = units if units <= room else room
            out.append((o, grab))
            room -= grab
        return out


@dataclass
class UnitFlowOutcome:
    case: str
    state: PreflowState
    cut: Optional[CutResult] = None


def fine_mode_divisor(h: int, m: int, m_prime: int) -> int:
    """Divisor of the fine-grained conductance bound that the label budget h
    can guarantee; the region-growing argument needs h >= 16 ln m' lnln m."""
    lnmp = math.log(max(m_prime, 2))
    level_term = max(1.0, math.log(math.log(max(m, 3)) + 2))
    return int(h / (16.0 * lnmp * level_term))


def conductance_bound(mode: str, m: int, h: int, w: int, U: int,
                      m_prime: Optional[int] = None,
                      vol_small: Optional[int] = None) -> float:
    if mode == COARSE:
        return 20.0 * math.log(2 * m) / h + w / U
    lnm = math.log(max(m, 2))
    lnmp = math.log(max(m_prime, 2))
    divisor = fine_mode_divisor(h, m, m_prime)
    numer = lnm + 1.0 - math.ceil(math.log(max(vol_small, 1)))
    return max(numer, 0.0) / (divisor * lnmp) + w / U


def _check_preconditions(g, delta, U, h, w, sweep_mode, m_prime):
    if g.m < 1:
        raise FlowError("graph must have at least one edge")
    if w < 2:
        raise FlowError(f"w must be >= 2, got {w}")
    if U < 1:
        raise FlowError(f"U must be >= 1, got {U}")
    for v, per in delta.entries.items():
        tot = sum(per.values())
        if tot > w * g.deg[v]:
            raise FlowError(
                f"supply too concentrated at {v}: {tot} > w*d = {w * g.deg[v]}")
    if sweep_mode == COARSE:
        if h < math.log(g.m):
            raise FlowError(f"h = {h} below ln m = {math.log(g.m):.3f}")
    elif sweep_mode == FINE:
        if m_prime is None or m_prime < g.m:
            raise FlowError("fine mode needs m_prime >= m")
        if fine_mode_divisor(h, g.m, m_prime) < 1:
            raise FlowError(
                f"h = {h} too small for the fine-mode guarantee on m' = "
                f"{m_prime}")
    else:
        raise FlowError(f"unknown sweep mode {sweep_mode!r}")


def unit_flow(g: MultiGraph, delta: SourceFunction, U: int, h: int, w: int,
              sweep_mode: str = COARSE, m_prime: Optional[int] = None,
              counters: Optional[Counters] = None) -> UnitFlowOutcome:
    """Run the capped-label push-relabel routine and classify the outcome."""
    _check_preconditions(g, delta, U, h, w, sweep_mode, m_prime)
    state = PreflowState(g, delta, U, h, w)
    _discharge_loop(state)
    state.counters.unit_flow_calls = 1
    if counters is not None:
        counters.add(state.counters)

    deg = g.deg
    fv = state.fv
    if all(fv[v] <= deg[v] for v in range(g.n)):
        return UnitFlowOutcome(FEASIBLE, state)
    if all(fv[v] >= deg[v] for v in range(g.n)):
        return UnitFlowOutcome(ALL_SATURATED, state)
    cut = sweep_cut(state, g, sweep_mode, m_prime)
    return UnitFlowOutcome(CUT, state, cut)


def _slot_residual(flows, U, a, b, t):
    if a < b:
        slots = flows.get((a, b))
        return U if slots is None else U - slots[t]
    slots = flows.get((b, a))
    return U if slots is None else U + slots[t]


def _discharge_loop(state: PreflowState) -> None:
    g = state.g
    n, deg = g.n, g.deg
    adj_nbr, adj_mult = g.adj_nbr, g.adj_mult
    U, h, w = state.U, state.h, state.w
    labels = state.labels
    fv = state.fv
    ledgers = state.ledgers
    flows = state.flows
    ctr = state.counters

    pointer_pos = [0] * n
    pointer_slot = [0] * n
    buckets = [deque() for _ in range(h)]
    in_q = [False] * n
    active = 0
    for v in range(n):
        if fv[v] > deg[v]:
            buckets[0].append(v)
            in_q[v] = True
            active += 1
    lowest = 0

    while active > 0:
        while lowest < h and not buckets[lowest]:
            lowest += 1
        if lowest >= h:
            raise InternalError("active count out of sync with buckets")
        lv = lowest
        v = buckets[lv][0]

        if lv == 0:
            # No arc can be eligible from label 0; the pointer walk would
            # visit all d(v) slots and wrap, so relabel directly at the same
            # counted cost and with the same final pointer position.
            ctr.relabels += 1
            ctr.relabel_work += deg[v]
            labels[v] = 1
            pointer_pos[v] = 0
            pointer_slot[v] = 0
            buckets[0].popleft()
            if 1 < h:
                buckets[1].append(v)
            else:
                in_q[v] = False
                active -= 1
            continue

        row_n = adj_nbr[v]
        row_m = adj_mult[v]
        pos = pointer_pos[v]
        slot = pointer_slot[v]
        nedges = len(row_n)
        target = lv - 1
        acted = False
        while pos < nedges:
            u = row_n[pos]
            if labels[u] == target:
                r = _slot_residual(flows, U, v, u, slot)
                if r > 0:
                    headroom = w * deg[u] - fv[u]
                    if headroom <= 0:
                        raise InternalError(
                            "push assertion failed: receiver already full")
                    ex = fv[v] - deg[v]
                    psi = ex if ex < r else r
                    if headroom < psi:
                        psi = headroom
                    key = (v, u) if v < u else (u, v)
                    slots_list = flows.get(key)
                    if slots_list is None:
                        slots_list = [0] * row_m[pos]
                        flows[key] = slots_list
                    if v < u:
                        slots_list[slot] += psi
                    else:
                        slots_list[slot] -= psi
                    fv[v] -= psi
                    fv[u] += psi
                    led_u = ledgers.get(u)
                    if led_u is None:
                        led_u = OriginLedger()
                        ledgers[u] = led_u
                    for o, amt in ledgers[v].take_ascending(psi):
                        led_u.add(o, amt)
                    ctr.pushes += 1
                    ctr.units_moved += psi
                    if fv[u] > deg[u] and not in_q[u]:
                        # u sits strictly below l(v), hence below h
                        buckets[target].append(u)
                        in_q[u] = True
                        active += 1
                        if target < lowest:
                            lowest = target
                    if fv[v] <= deg[v]:
                        buckets[lv].popleft()
                        in_q[v] = False
                        active -= 1
                    pointer_pos[v] = pos
                    pointer_slot[v] = slot
                    acted = True
                    break
            slot += 1
            if slot >= row_m[pos]:
                pos += 1
                slot = 0
        if acted:
            continue
        # pointer wrapped without an eligible arc: relabel and reset
        ctr.relabels += 1
        ctr.relabel_work += deg[v]
        labels[v] = lv + 1
        pointer_pos[v] = 0
        pointer_slot[v] = 0
        buckets[lv].popleft()
        if lv + 1 < h:
            buckets[lv + 1].append(v)
        else:
            in_q[v] = False
            active -= 1


def sweep_cut(state: PreflowState, g: MultiGraph, mode: str = COARSE,
              m_prime: Optional[int] = None) -> CutResult:
    """Extract the first level set S_i meeting the mode's conductance bound.

    Scans i = h..floor(h/2) when vol(S_floor(h/2)) <= m, else i = 1 up to
    floor(h/2), mirroring the region-growing proof.
    """
    h = state.h
    labels = state.labels
    m = g.m
    two_m = 2 * m
    if not any(labels[v] >= h for v in range(g.n)):
        raise FlowError("sweep requires a label-h vertex")
    if not any(labels[v] == 0 for v in range(g.n)):
        raise FlowError("sweep requires a label-0 vertex")

    vol_at_level = [0] * (h + 2)
    for v in range(g.n):
        vol_at_level[labels[v]] += g.deg[v]
    suffix_vol = [0] * (h + 2)
    for i in range(h, -1, -1):
        suffix_vol[i] = suffix_vol[i + 1] + vol_at_level[i]

    diff = [0] * (h + 2)
    for u, v, mult in g.edges():
        lo, hi = labels[u], labels[v]
        if lo > hi:
            lo, hi = hi, lo
        if lo < hi:
            diff[lo + 1] += mult
            diff[hi + 1] -= mult
    boundary = [0] * (h + 1)
    run = 0
    for i in range(1, h + 1):
        run += diff[i]
        boundary[i] = run

    half = h // 2
    if suffix_vol[max(half, 1)] <= m:
        order = range(h, max(half, 1) - 1, -1)
    else:
        order = range(1, max(half, 1) + 1)

    for i in order:
        vol_s = suffix_vol[i]
        if vol_s == 0 or vol_s == two_m:
            continue
        mn = min(vol_s, two_m - vol_s)
        if mn == 0:
            continue
        bound = conductance_bound(mode, m, h, state.w, state.U,
                                  m_prime=m_prime, vol_small=mn)
        if boundary[i] / mn <= bound + _EPS:
            side = frozenset(v for v in range(g.n) if labels[v] >= i)
            cut = g.cut_stats(side)
            if cut.boundary != boundary[i]:
                raise InternalError("sweep boundary bookkeeping mismatch")
            return cut
    raise InternalError(
        "sweep found no qualifying level; contradicts the region-growing "
        "argument")
