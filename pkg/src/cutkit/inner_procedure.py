"""Edge-bundle inner procedure: drive a component's certified strength down
or find a local low-conductance cut.

Builds an edge-disjoint, in-degree-bounded set of bundles, spreads supply
from their centers, runs one excess-scaling problem per bundle group in
deterministic round-robin lockstep, harvests bundles whose supply routed,
recombines the absorbed supply into a new source function, and settles the
component with one final Unit-Flow.
"""

import heapq
import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import FlowError, InternalError, ParameterError
from .excess_scaling import CUT_FOUND, ROUTED, RUNNING, ExcessScalingRun
from .multigraph import SUPERVERTEX, CutResult, MultiGraph
from .profiles import Profile
from .unit_flow import (ALL_SATURATED, CUT, FEASIBLE, FINE, Counters,
                        SourceFunction, unit_flow)

LOCAL_CUT = "local_cut"
STRONG_SUBSET = "strong_subset"
WHOLE_STRONG = "whole_strong"


@dataclass(frozen=True)
class EdgeBundle:
    """Z edges sharing the center vertex; edges held as (neighbor, count)."""
    index: int
    center: int
    edges: tuple

    @property
    def size(self) -> int:
        return sum(c for _, c in self.edges)


@dataclass
class BundleSet:
    bundles: list
    alpha: int          # the gamma of (alpha, Z)-sparsity
    Z: int

    def __len__(self):
        return len(self.bundles)

    def validate(self, g: MultiGraph) -> None:
        """Recount both sparsity invariants directly against the graph."""
        used = {}
        indeg = {}
        for b in self.bundles:
            total = 0
            for u, cnt in b.edges:
                if cnt <= 0:
                    raise InternalError("bundle holds an empty edge entry")
                key = (b.center, u) if b.center < u else (u, b.center)
                used[key] = used.get(key, 0) + cnt
                indeg[u] = indeg.get(u, 0) + cnt
                total += cnt
            if total != self.Z:
                raise InternalError(
                    f"bundle {b.index} has {total} edges, expected {self.Z}")
        for (a, c), cnt in used.items():
            if cnt > g.multiplicity(a, c):
                raise InternalError(
                    f"bundles overuse edge ({a},{c}): {cnt} > "
                    f"{g.multiplicity(a, c)}")
        for u, cnt in indeg.items():
            if cnt * self.alpha > g.deg[u]:
                raise InternalError(
                    f"expansion in-degree bound broken at {u}: "
                    f"{cnt} * {self.alpha} > {g.deg[u]}")


@dataclass
class InnerOutcome:
    case: str
    cut: Optional[CutResult] = None          # local ids of the component
    strong_set: Optional[frozenset] = None   # certified 0.6s-strong set
    new_strength: Optional[int] = None
    stats: dict = field(default_factory=dict)


def build_sparse_bundles(g: MultiGraph, count: int, gamma: int,
                         Z: int) -> BundleSet:
    """Greedy live/dead construction of `count` disjoint bundles of exactly
    Z edges with expansion in-degree at most degree/gamma."""
    if 2 * count * Z * gamma > g.m:
        raise ParameterError(
            f"bundle budget violated: 2*{count}*{Z}*{gamma} > m = {g.m}")
    n = g.n
    rem = [row[:] for row in g.adj_mult]
    rem_deg = g.deg[:]
    is_super = [g.kinds[v] == SUPERVERTEX for v in range(n)]
    threshold = [gamma * Z if is_super[v] else Z for v in range(n)]
    live = [True] * n
    live_deg = rem_deg[:]

    def kill_cascade(seed):
        stack = [seed]
        while stack:
            v = stack.pop()
            if not live[v] or live_deg[v] >= threshold[v]:
                continue
            live[v] = False
            row_n = g.adj_nbr[v]
            row_r = rem[v]
            for i, u in enumerate(row_n):
                x = row_r[i]
                if x > 0:
                    row_r[i] = 0
                    rem[u][g.nbr_index(u)[v]] = 0
                    rem_deg[v] -= x
                    rem_deg[u] -= x
                    if live[u]:
                        live_deg[u] -= x
                        stack.append(u)

    for v in range(n):
        kill_cascade(v)

    super_heap = [v for v in range(n) if live[v] and is_super[v]]
    regular_heap = [v for v in range(n) if live[v] and not is_super[v]]
    heapq.heapify(super_heap)
    heapq.heapify(regular_heap)

    def pop_center():
        for heap in (super_heap, regular_heap):
            while heap:
                v = heap[0]
                if live[v]:
                    return v
                heapq.heappop(heap)
        return None

    def remove_edge_units(a, b, x):
        ia = g.nbr_index(a)[b]
        ib = g.nbr_index(b)[a]
        rem[a][ia] -= x
        rem[b][ib] -= x
        rem_deg[a] -= x
        rem_deg[b] -= x
        if live[b]:
            if live[a]:
                live_deg[a] -= x
        if live[a]:
            if live[b]:
                live_deg[b] -= x

    bundles = []
    for idx in range(count):
        v = pop_center()
        if v is None:
            raise InternalError(
                "ran out of live vertices inside the feasibility budget")
        picked = []
        need = Z
        for i, u in enumerate(g.adj_nbr[v]):
            if need == 0:
                break
            if not live[u]:
                continue
            avail = rem[v][i]
            if avail <= 0:
                continue
            cap = min(avail, live_deg[u] // gamma if gamma > 1 else avail)
            take = min(cap, need)
            if take > 0:
                picked.append((u, take))
                need -= take
        if need > 0:
            raise InternalError(
                f"live vertex {v} could not supply {Z} bundle edges")
        bundles.append(EdgeBundle(len(bundles), v, tuple(picked)))
        touched = [v]
        for u, take in picked:
            remove_edge_units(v, u, take)
            touched.append(u)
            extra = (gamma - 1) * take
            for j, x in enumerate(rem[u]):
                if extra == 0:
                    break
                if x > 0:
                    t = min(x, extra)
                    other = g.adj_nbr[u][j]
                    remove_edge_units(u, other, t)
                    touched.append(other)
                    extra -= t
            # a live vertex always has enough incident edges to pay; if not,
            # it simply goes dead and the cascade settles the rest
        for t in touched:
            kill_cascade(t)
    out = BundleSet(bundles, gamma, Z)
    out.validate(g)
    return out


def initial_spreadout(bundles, sigma: int) -> SourceFunction:
    """Push sigma supply from each bundle center uniformly along its edges."""
    entries: dict = {}
    items = bundles.bundles if isinstance(bundles, BundleSet) else bundles
    for b in items:
        if sigma % b.size:
            raise FlowError(
                f"sigma = {sigma} not divisible by bundle size {b.size}")
        share = sigma // b.size
        for u, cnt in b.edges:
            per = entries.setdefault(u, {})
            per[b.index] = per.get(b.index, 0) + share * cnt
    return SourceFunction(entries)


def combine_preflows(runs, scale_divisor: int) -> SourceFunction:
    """Merge routed supply of kept origins across runs, flooring per origin.

    `runs` is a list of (ExcessScalingRun, kept_origin_set); every run must
    have finished in the routed case.
    """
    entries: dict = {}
    for run, kept in runs:
        if run.status != ROUTED:
            raise FlowError("combine_preflows needs routed runs only")
        for v, items in run.routed_by_vertex.items():
            for o, amt in items:
                if o in kept:
                    q = amt // scale_divisor
                    if q > 0:
                        per = entries.setdefault(v, {})
                        per[o] = per.get(o, 0) + q
    return SourceFunction(entries)


def inner_procedure(g: MultiGraph, s: int, profile: Profile, m_g: int,
                    delta: int,
                    counters: Optional[Counters] = None) -> InnerOutcome:
    """One invocation on a trimmed component (as a standalone graph).

    `s` is the certified strength (s0 <= s <= m_C), `m_g` the original
    graph's edge count, `delta` the framework's minimum-degree parameter.
    """
    ctr = counters if counters is not None else Counters()
    m_c = g.m
    s0 = profile.s0(delta, m_g)
    if not (s0 <= s <= m_c):
        raise ParameterError(
            f"strength {s} outside the operative range [{s0}, {m_c}]")

    gamma = profile.gamma(m_g)
    Z = profile.bundle_size(delta, s, m_g)
    k = profile.k_groups
    count = max(1, m_c // s)
    budget = g.m // (2 * Z * gamma * k)
    reduced = False
    if count > budget:
        count = max(1, budget)
        reduced = True
    if 2 * (k * count) * Z * gamma > g.m:
        raise ParameterError(
            f"bundle construction infeasible: need 2*{k * count}*{Z}*{gamma} "
            f"<= m = {g.m}")

    sigma = min(2 * s, (2 * m_c) // count)
    sigma = max(Z, (sigma // Z) * Z)
    keep_threshold = math.ceil(profile.keep_fraction * sigma)

    bundle_set = build_sparse_bundles(g, k * count, gamma, Z)
    groups = [bundle_set.bundles[i * count:(i + 1) * count] for i in range(k)]

    u_excess = profile.u_excess(m_g)
    h = profile.h(m_g)
    runs = [ExcessScalingRun(g, initial_spreadout(grp, sigma), profile.tau,
                             u_excess, h, profile.w_phase, FINE, m_g, ctr)
            for grp in groups]

    stats = {"k": k, "count_per_group": count, "sigma": sigma, "Z": Z,
             "gamma": gamma, "h": h, "u_excess": u_excess,
             "budget_reduced": reduced, "keep_threshold": keep_threshold}

    # deterministic round-robin lockstep; first cut aborts everything
    while True:
        progressed = False
        for i, run in enumerate(runs):
            if run.status != RUNNING:
                continue
            progressed = True
            if run.step() == CUT_FOUND:
                cut = run.cut
                if g.volume(cut.side) > m_c:
                    raise InternalError("local cut exceeds component volume")
                stats["winner"] = i
                return InnerOutcome(LOCAL_CUT, cut=cut, stats=stats)
        if not progressed:
            break

    kept_sets = []
    kept_total = 0
    for grp, run in zip(groups, runs):
        kept = {b.index for b in grp
                if run.routed.get(b.index, 0) >= keep_threshold}
        kept_sets.append(kept)
        kept_total += len(kept)
    stats["kept_bundles"] = kept_total

    delta_x = combine_preflows(list(zip(runs, kept_sets)),
                               profile.scale_divisor)
    w_final = profile.w_final
    for v, per in delta_x.entries.items():
        if sum(per.values()) > w_final * g.deg[v]:
            raise InternalError("combined supply exceeds w_final * degree")
    stats["delta_x_total"] = delta_x.total
    upper = k * 2 * m_c // profile.scale_divisor
    if delta_x.total > upper:
        raise InternalError("combined supply exceeds the k*2m/scale bound")
    if delta_x.total <= 2 * m_c:
        raise InternalError(
            f"combined supply {delta_x.total} not above 2m = {2 * m_c}; "
            "the keep-threshold mass argument failed")

    u_final = profile.u_final(s, delta)
    out = unit_flow(g, delta_x, u_final, h, w_final, FINE, m_g, counters=ctr)
    stats["u_final"] = u_final
    new_strength = max(math.ceil(0.6 * s), s0)
    if out.case == ALL_SATURATED:
        return InnerOutcome(WHOLE_STRONG, strong_set=frozenset(range(g.n)),
                            new_strength=new_strength, stats=stats)
    if out.case == CUT:
        side = out.cut.side
        lower = (delta_x.total - 2 * m_c) / (w_final - 1)
        if g.volume(side) < lower:
            raise InternalError("strong subset volume below the excess bound")
        return InnerOutcome(STRONG_SUBSET, cut=out.cut,
                            strong_set=side, new_strength=new_strength,
                            stats=stats)
    raise InternalError(
        "final Unit-Flow absorbed more supply than the sinks can hold")
