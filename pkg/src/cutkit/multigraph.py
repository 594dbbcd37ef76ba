"""Undirected multigraph with supervertices, contraction, and cut statistics.

Parallel edges are stored as per-adjacency-entry multiplicities.  Vertex ids
are dense (0..n-1); contraction renumbers densely, with every contracted set
represented at the position of its smallest old id.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

from .errors import GraphError

REGULAR = "regular"
SUPERVERTEX = "supervertex"


class VertexInfo(NamedTuple):
    kind: str
    members: frozenset


@dataclass(frozen=True)
class CutResult:
    """One side of a cut with its boundary size, volumes, and conductance."""

    side: frozenset
    boundary: int
    vol_side: int
    vol_rest: int
    conductance: Fraction

    @property
    def min_volume(self) -> int:
        return min(self.vol_side, self.vol_rest)


class MultiGraph:
    """Simple-or-multi undirected graph; no self-loops, symmetric adjacency."""

    __slots__ = ("n", "adj_nbr", "adj_mult", "deg", "m", "kinds", "members",
                 "_nbr_index")

    def __init__(self, n: int, adj_nbr: list, adj_mult: list,
                 kinds: Optional[list] = None, members: Optional[list] = None):
        self.n = n
        self.adj_nbr = adj_nbr          # adj_nbr[v] = list of neighbor ids
        self.adj_mult = adj_mult        # adj_mult[v][i] = multiplicity
        self.deg = [sum(row) for row in adj_mult]
        self.m = sum(self.deg) // 2
        self.kinds = kinds if kinds is not None else [REGULAR] * n
        self.members = (members if members is not None
                        else [frozenset((v,)) for v in range(n)])
        self._nbr_index = [None] * n
        self.validate()

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edge_list(cls, edges: Iterable[tuple]) -> "MultiGraph":
        """Build from (u, v, multiplicity) triples; (u, v) pairs default to 1.

        Duplicate entries have their multiplicities summed.  Arbitrary ids are
        renumbered densely in sorted order.
        """
        agg: dict = {}
        ids = set()
        for lineno, entry in enumerate(edges, start=1):
            if len(entry) == 2:
                u, v, mult = entry[0], entry[1], 1
            else:
                u, v, mult = entry
            if u == v:
                raise GraphError(f"entry {lineno}: self-loop ({u},{v})")
            if mult <= 0:
                raise GraphError(
                    f"entry {lineno}: non-positive multiplicity {mult}")
            ids.add(u)
            ids.add(v)
            key = (u, v) if u < v else (v, u)
            agg[key] = agg.get(key, 0) + mult
        order = sorted(ids)
        remap = {old: new for new, old in enumerate(order)}
        n = len(order)
        adj_nbr = [[] for _ in range(n)]
        adj_mult = [[] for _ in range(n)]
        for (u, v) in sorted(agg):
            mult = agg[(u, v)]
            nu, nv = remap[u], remap[v]
            adj_nbr[nu].append(nv)
            adj_mult[nu].append(mult)
            adj_nbr[nv].append(nu)
            adj_mult[nv].append(mult)
        return cls(n, adj_nbr, adj_mult)

    def validate(self) -> None:
        """Assert the structural invariants; cheap enough to run per mutation."""
        seen = {}
        total = 0
        for v in range(self.n):
            row_n, row_m = self.adj_nbr[v], self.adj_mult[v]
            if len(row_n) != len(row_m):
                raise GraphError("adjacency arrays out of sync")
            if len(set(row_n)) != len(row_n):
                raise GraphError(f"duplicate adjacency entries at {v}")
            for u, mult in zip(row_n, row_m):
                if u == v:
                    raise GraphError(f"self-loop at vertex {v}")
                if mult <= 0:
                    raise GraphError(f"non-positive multiplicity {v}-{u}")
                key = (v, u) if v < u else (u, v)
                if key in seen:
                    if seen[key] != mult:
                        raise GraphError(f"asymmetric multiplicity on {key}")
                else:
                    seen[key] = mult
                total += mult
        if total != 2 * self.m:
            raise GraphError("degree sum does not equal 2m")
        union = set()
        count = 0
        for mem in self.members:
            count += len(mem)
            union |= mem
        if len(union) != count:
            raise GraphError("member sets overlap")

    # -- basic queries -----------------------------------------------------

    def degree(self, v: int) -> int:
        return self.deg[v]

    def min_degree(self) -> int:
        return min(self.deg) if self.n else 0

    def volume(self, vertices: Iterable[int]) -> int:
        return sum(self.deg[v] for v in vertices)

    def vertex_info(self, v: int) -> VertexInfo:
        return VertexInfo(self.kinds[v], self.members[v])

    @property
    def is_simple(self) -> bool:
        return (all(k == REGULAR for k in self.kinds)
                and all(m == 1 for row in self.adj_mult for m in row))

    def edges(self) -> Iterator[tuple]:
        """Yield (u, v, mult) with u < v, each undirected edge once."""
        for u in range(self.n):
            for v, mult in zip(self.adj_nbr[u], self.adj_mult[u]):
                if u < v:
                    yield u, v, mult

    def nbr_index(self, v: int) -> dict:
        idx = self._nbr_index[v]
        if idx is None:
            idx = {u: i for i, u in enumerate(self.adj_nbr[v])}
            self._nbr_index[v] = idx
        return idx

    def multiplicity(self, u: int, v: int) -> int:
        i = self.nbr_index(u).get(v)
        return 0 if i is None else self.adj_mult[u][i]

    def to_edge_list(self) -> list:
        return list(self.edges())

    # -- cuts and components -----------------------------------------------

    def cut_stats(self, side: Iterable[int]) -> CutResult:
        """Boundary, volumes and conductance of a cut, by direct counting."""
        aset = frozenset(side)
        if not aset or len(aset) >= self.n:
            raise GraphError("trivial partition")
        boundary = 0
        vol_side = 0
        for v in aset:
            vol_side += self.deg[v]
            for u, mult in zip(self.adj_nbr[v], self.adj_mult[v]):
                if u not in aset:
                    boundary += mult
        vol_rest = 2 * self.m - vol_side
        mn = min(vol_side, vol_rest)
        cond = Fraction(boundary, mn) if mn > 0 else Fraction(0)
        return CutResult(aset, boundary, vol_side, vol_rest, cond)

    def connected_components(self, alive: Optional[list] = None) -> list:
        """Vertex sets of maximal connected components, optionally restricted
        to an alive-multiplicity mask parallel to the adjacency arrays."""
        seen = [False] * self.n
        comps = []
        for start in range(self.n):
            if seen[start]:
                continue
            seen[start] = True
            comp = [start]
            stack = [start]
            while stack:
                v = stack.pop()
                row_n = self.adj_nbr[v]
                row_m = self.adj_mult[v] if alive is None else alive[v]
                for u, mult in zip(row_n, row_m):
                    if mult > 0 and not seen[u]:
                        seen[u] = True
                        comp.append(u)
                        stack.append(u)
            comps.append(sorted(comp))
        return comps

    # -- contraction ---------------------------------------------------------

    def contract_sets(self, sets: Sequence[Iterable[int]]):
        """Contract each vertex set to one supervertex; returns (graph, map).

        Sets must be pairwise disjoint.  The new id order is by smallest old
        id of each group; `map[old] = new`.  Internal edges vanish, crossing
        multiplicities are summed, adjacency comes out sorted by neighbor id.
        """
        group_of = [-1] * self.n
        groups = []
        for s in sets:
            vs = sorted(set(s))
            if not vs:
                raise GraphError("empty contraction set")
            gi = len(groups)
            for v in vs:
                if v < 0 or v >= self.n:
                    raise GraphError(f"vertex {v} out of range")
                if group_of[v] != -1:
                    raise GraphError("contraction sets overlap")
                group_of[v] = gi
            groups.append(vs)
        for v in range(self.n):
            if group_of[v] == -1:
                group_of[v] = len(groups)
                groups.append([v])
        order = sorted(range(len(groups)), key=lambda gi: groups[gi][0])
        new_id = [0] * len(groups)
        for pos, gi in enumerate(order):
            new_id[gi] = pos
        vmap = [new_id[group_of[v]] for v in range(self.n)]

        n2 = len(groups)
        agg = [dict() for _ in range(n2)]
        for u, v, mult in self.edges():
            a, b = vmap[u], vmap[v]
            if a == b:
                continue
            agg[a][b] = agg[a].get(b, 0) + mult
            agg[b][a] = agg[b].get(a, 0) + mult
        adj_nbr = [sorted(agg[v]) for v in range(n2)]
        adj_mult = [[agg[v][u] for u in adj_nbr[v]] for v in range(n2)]
        kinds = [REGULAR] * n2
        members = [frozenset()] * n2
        for gi, grp in enumerate(groups):
            nid = new_id[gi]
            mem = frozenset().union(*(self.members[v] for v in grp))
            members[nid] = mem
            kinds[nid] = REGULAR if len(mem) == 1 else SUPERVERTEX
        return MultiGraph(n2, adj_nbr, adj_mult, kinds, members), vmap

    def contract_set(self, s: Iterable[int]) -> "MultiGraph":
        g, _ = self.contract_sets([s])
        return g

    def contract_heavy_pairs(self, delta: int) -> "MultiGraph":
        """Repeatedly merge any vertex pair with multiplicity > delta."""
        if delta < 1:
            raise GraphError("delta must be >= 1")
        g = self
        while True:
            heavy = None
            for u, v, mult in g.edges():
                if mult > delta:
                    heavy = (u, v)
                    break
            if heavy is None:
                return g
            g = g.contract_set(heavy)

    # -- views ---------------------------------------------------------------

    def subgraph(self, vertices: Iterable[int], alive: Optional[list] = None):
        """Induced subgraph over `vertices` (optionally alive-masked).

        Returns (graph, local_to_global); vertex attributes carry over.
        """
        glob = sorted(set(vertices))
        local = {v: i for i, v in enumerate(glob)}
        adj_nbr = []
        adj_mult = []
        for v in glob:
            row_n = self.adj_nbr[v]
            row_m = self.adj_mult[v] if alive is None else alive[v]
            ln, lm = [], []
            for u, mult in zip(row_n, row_m):
                li = local.get(u)
                if li is not None and mult > 0:
                    ln.append(li)
                    lm.append(mult)
            adj_nbr.append(ln)
            adj_mult.append(lm)
        kinds = [self.kinds[v] for v in glob]
        members = [self.members[v] for v in glob]
        return MultiGraph(len(glob), adj_nbr, adj_mult, kinds, members), glob

    def masked_copy(self, alive: list) -> "MultiGraph":
        """Copy keeping only alive multiplicities (H as a standalone graph)."""
        g, _ = self.subgraph(range(self.n), alive)
        return g

    def copy(self) -> "MultiGraph":
        return MultiGraph(self.n,
                          [row[:] for row in self.adj_nbr],
                          [row[:] for row in self.adj_mult],
                          self.kinds[:], self.members[:])

    def __repr__(self) -> str:
        return f"MultiGraph(n={self.n}, m={self.m})"
