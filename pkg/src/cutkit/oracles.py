"""Independent brute-force and max-flow verifiers.

Everything here is deliberately simple and shares no code with the
algorithms it checks: augmenting-path max-flow, Gray-code subset
enumeration, and direct recounts of the definitional predicates.
"""

from collections import deque
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import VerificationError
from .multigraph import SUPERVERTEX, CutResult, MultiGraph

CONDUCTANCE_LIMIT = 22   # 2^n enumeration refusal threshold
CUT_ENUM_LIMIT = 20


# -- max-flow reduction ------------------------------------------------------

def _incidence(g: MultiGraph):
    """Edge arrays for the residual network: forward/backward cap pair per
    undirected edge (slots 2k and 2k+1), capacity = multiplicity."""
    caps = []
    inc = [[] for _ in range(g.n)]
    k = 0
    for u, v, mult in g.edges():
        caps.append(mult)   # u -> v  at slot 2k
        caps.append(mult)   # v -> u  at slot 2k+1
        inc[u].append((v, 2 * k))
        inc[v].append((u, 2 * k + 1))
        k += 1
    return inc, caps


def _maxflow(inc, base_caps, n, s, t, cutoff=None):
    """BFS augmenting-path max flow; stops early once `cutoff` is matched.

    Returns (flow, residual_caps).
    """
    caps = base_caps.copy()
    flow = 0
    while cutoff is None or flow < cutoff:
        prev_vertex = [-1] * n
        prev_slot = [-1] * n
        prev_vertex[s] = s
        q = deque([s])
        reached = False
        while q:
            v = q.popleft()
            if v == t:
                reached = True
                break
            for u, slot in inc[v]:
                if prev_vertex[u] == -1 and caps[slot] > 0:
                    prev_vertex[u] = v
                    prev_slot[u] = slot
                    q.append(u)
        if not reached:
            break
        bottleneck = None
        v = t
        while v != s:
            c = caps[prev_slot[v]]
            if bottleneck is None or c < bottleneck:
                bottleneck = c
            v = prev_vertex[v]
        v = t
        while v != s:
            slot = prev_slot[v]
            caps[slot] -= bottleneck
            caps[slot ^ 1] += bottleneck
            v = prev_vertex[v]
        flow += bottleneck
    return flow, caps


def exact_edge_connectivity(g: MultiGraph):
    """Exact lambda via min over t of maxflow(0, t); unit-per-multiplicity
    capacities.  Returns (value, witness side containing vertex 0)."""
    if g.n < 2:
        raise VerificationError("need at least two vertices")
    comps = g.connected_components()
    if len(comps) > 1:
        return 0, frozenset(comps[0])
    inc, base = _incidence(g)
    best = None
    best_t = None
    for t in range(1, g.n):
        f, _ = _maxflow(inc, base, g.n, 0, t, cutoff=best)
        if best is None or f < best:
            best, best_t = f, t
    _, residual = _maxflow(inc, base, g.n, 0, best_t)
    seen = [False] * g.n
    seen[0] = True
    q = deque([0])
    while q:
        v = q.popleft()
        for u, slot in inc[v]:
            if not seen[u] and residual[slot] > 0:
                seen[u] = True
                q.append(u)
    witness = frozenset(v for v in range(g.n) if seen[v])
    return best, witness


# -- Gray-code subset enumeration --------------------------------------------

def _gray_scan(g: MultiGraph, visit):
    """Enumerate all subsets S of V\\{0} (Gray order), maintaining boundary
    and volume incrementally; call visit(S_list_mask, boundary, vol) per step.

    `visit` receives the live membership bool list; it must copy if keeping.
    """
    n = g.n
    member = [False] * n
    cross = [0] * n    # edges from x to current S
    boundary = 0
    vol = 0
    total = 1 << (n - 1)
    for step in range(1, total):
        low = step & -step
        v = low.bit_length()      # flip vertex v in 1..n-1
        if member[v]:
            for u, mult in zip(g.adj_nbr[v], g.adj_mult[v]):
                cross[u] -= mult
            boundary -= g.deg[v] - 2 * cross[v]
            vol -= g.deg[v]
            member[v] = False
        else:
            boundary += g.deg[v] - 2 * cross[v]
            vol += g.deg[v]
            member[v] = True
            for u, mult in zip(g.adj_nbr[v], g.adj_mult[v]):
                cross[u] += mult
        visit(member, boundary, vol)


def brute_min_conductance(g: MultiGraph) -> CutResult:
    """Exact conductance minimizer over all nonempty proper subsets."""
    if g.n > CONDUCTANCE_LIMIT:
        raise VerificationError(
            f"n={g.n} exceeds enumeration limit {CONDUCTANCE_LIMIT}")
    if g.n < 2:
        raise VerificationError("need at least two vertices")
    two_m = 2 * g.m
    best = None   # (num, den, side tuple)

    def visit(member, boundary, vol):
        nonlocal best
        mn = min(vol, two_m - vol)
        if mn <= 0:
            return
        if best is None or boundary * best[1] < best[0] * mn:
            side = tuple(v for v in range(1, g.n) if member[v])
            best = (boundary, mn, side)

    _gray_scan(g, visit)
    side = frozenset(best[2])
    return g.cut_stats(side)


def brute_edge_connectivity(g: MultiGraph) -> int:
    """Min boundary over every proper subset; subset-enumeration cross-check
    for exact_edge_connectivity on tiny graphs."""
    if g.n > CONDUCTANCE_LIMIT:
        raise VerificationError("too large for subset enumeration")
    best = [None]

    def visit(member, boundary, vol):
        if best[0] is None or boundary < best[0]:
            best[0] = boundary

    _gray_scan(g, visit)
    return best[0]


def enumerate_small_cuts(g: MultiGraph, max_boundary: int):
    """All cuts (as the side not containing vertex 0) with boundary <= bound."""
    if g.n > CUT_ENUM_LIMIT:
        raise VerificationError(
            f"n={g.n} exceeds enumeration limit {CUT_ENUM_LIMIT}")
    out = []

    def visit(member, boundary, vol):
        if boundary <= max_boundary:
            out.append((frozenset(v for v in range(1, g.n) if member[v]),
                        boundary))

    _gray_scan(g, visit)
    return out


def enumerate_min_cuts(g: MultiGraph, value: int, nontrivial: bool = True):
    """All cuts of exactly the given boundary; optionally only non-trivial."""
    cuts = [s for s, b in enumerate_small_cuts(g, value) if b == value]
    if nontrivial:
        cuts = [s for s in cuts if 2 <= len(s) <= g.n - 2]
    return cuts


# -- flow feasibility ---------------------------------------------------------

def verify_preflow(g: MultiGraph, delta: Mapping[int, int], cap_per_edge: int,
                   arc_flows: Mapping[tuple, int],
                   claimed_supply: Mapping[int, int]):
    """Check a pre-flow against the source/capacity feasibility definitions.

    `arc_flows` maps (u, v, slot) -> signed units; both directions must be
    present and antisymmetric.  Returns a list of violation strings (empty
    means pass).
    """
    bad = []
    inflow = {}
    for (u, v, slot), f in arc_flows.items():
        rev = arc_flows.get((v, u, slot))
        if rev is None:
            bad.append(f"missing reverse arc for ({u},{v},{slot})")
            continue
        if rev != -f:
            bad.append(f"antisymmetry broken on ({u},{v},{slot}): {f} vs {rev}")
        mult = g.multiplicity(u, v)
        if mult == 0:
            bad.append(f"flow on non-edge ({u},{v})")
            continue
        if slot < 0 or slot >= mult:
            bad.append(f"slot {slot} out of range for ({u},{v}) mult {mult}")
        if abs(f) > cap_per_edge:
            bad.append(f"capacity exceeded on ({u},{v},{slot}): |{f}| > "
                       f"{cap_per_edge}")
        inflow[v] = inflow.get(v, 0) + f
    total = 0
    total_delta = sum(delta.values())
    for v in range(g.n):
        fv = delta.get(v, 0) + inflow.get(v, 0)
        if fv < 0:
            bad.append(f"negative supply at {v}: {fv}")
        claimed = claimed_supply.get(v, 0)
        if fv != claimed:
            bad.append(f"supply mismatch at {v}: recomputed {fv}, "
                       f"claimed {claimed}")
        total += fv
    if total != total_delta:
        bad.append(f"conservation broken: sum f(v) = {total}, "
                   f"|delta| = {total_delta}")
    return bad


# -- strength and cluster predicates ------------------------------------------

def _internal_degrees(g: MultiGraph, cset) -> dict:
    return {v: sum(mult for u, mult in zip(g.adj_nbr[v], g.adj_mult[v])
                   if u in cset)
            for v in cset}


def verify_strong(gbar: MultiGraph, component: Iterable[int], s: int,
                  delta: int, s0: int,
                  cuts: Optional[list] = None) -> bool:
    """Strength predicate: every cut of `gbar` with boundary <= delta has
    min(vol_C(S cap C), vol_C(Sbar cap C)) <= s, volumes internal to C.

    `gbar` must be the graph whose edges defined the component at
    certification time (the alive subgraph H).  Cuts whose smaller C-side
    volume is below s0 are excused (the s0-restricted reading of the lemma;
    irrelevant for claims with s >= s0).  `cuts` may carry a precomputed
    enumerate_small_cuts(gbar, delta) result.
    """
    cset = frozenset(component)
    dC = _internal_degrees(gbar, cset)
    vol_c_total = sum(dC.values())
    if cuts is None:
        cuts = enumerate_small_cuts(gbar, delta)
    for side, _b in cuts:
        a = sum(dC[v] for v in side & cset)
        mn = min(a, vol_c_total - a)
        if mn > s and mn >= s0:
            return False
    return True


def verify_cluster(gbar: MultiGraph, component: Iterable[int], delta: int,
                   cuts: Optional[list] = None) -> bool:
    """Cluster predicate: each small cut of gbar leaves, on one side, at most
    two regular vertices and no supervertex of the component."""
    cset = frozenset(component)
    if cuts is None:
        cuts = enumerate_small_cuts(gbar, delta)
    regs = {v for v in cset if gbar.kinds[v] != SUPERVERTEX}
    supers = cset - regs
    for side, _b in cuts:
        for part in (side, frozenset(range(gbar.n)) - side):
            if len(part & regs) <= 2 and not (part & supers):
                break
        else:
            return False
    return True


def conductance(boundary: int, vol_side: int, vol_rest: int) -> Fraction:
    return Fraction(boundary, min(vol_side, vol_rest))
