"""Hypergraph data model and the derived structures every algorithm works on.

Vertices are the dense integers ``0 .. n-1``.  Edges carry unique integer ids
(multi-edges are allowed and get distinct ids) and are stored as sorted vertex
tuples.  Weights live outside the hypergraph in a plain ``dict`` mapping edge
id to :class:`fractions.Fraction`, so the same structure can be reweighted
cheaply (for example with augmentation gains or unit weights).

Iteration order is always by id, and every tie-break downstream refers to it.
"""

from __future__ import annotations

import hashlib
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

EdgeWeighting = dict  # edge id -> Fraction


class HypergraphError(ValueError):
    """Raised when a hypergraph violates its declared parameters."""


class NonIntegerCopyCount(ValueError):
    """Raised by :func:`replicate` when q*h(e) is not an integer."""


class NotAMatching(ValueError):
    """Raised when a supposed matching contains two intersecting edges."""


class InfeasibleFractionalMatching(ValueError):
    """Raised when a fractional matching overloads a vertex."""


def derive_seed(seed, *keys) -> int:
    """Deterministically mix ``seed`` with any number of keys into a 64-bit int."""
    text = ":".join(str(k) for k in (seed,) + keys)
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "big")


def rng_for(seed, *keys) -> random.Random:
    """A private PRNG stream for one (seed, keys...) combination."""
    return random.Random(derive_seed(seed, *keys))


class Hypergraph:
    """An immutable multi-hypergraph with declared rank and degree bounds.

    ``rank`` and ``max_degree`` are the parameters r and Delta the algorithms
    are told about.  They default to the actual values and must never be
    smaller than them.
    """

    __slots__ = ("n", "edges", "rank", "max_degree", "_incident")

    def __init__(
        self,
        n: int,
        edges: Mapping[int, Iterable[int]] | Iterable[tuple[int, Iterable[int]]],
        rank: int | None = None,
        max_degree: int | None = None,
    ):
        items = edges.items() if isinstance(edges, Mapping) else edges
        table: dict[int, tuple[int, ...]] = {}
        for eid, verts in items:
            eid = int(eid)
            vs = tuple(sorted(int(v) for v in verts))
            if eid in table:
                raise HypergraphError(f"duplicate edge id {eid}")
            if not vs:
                raise HypergraphError(f"edge {eid} is empty")
            if len(set(vs)) != len(vs):
                raise HypergraphError(f"edge {eid} repeats a vertex")
            if vs[0] < 0 or vs[-1] >= n:
                raise HypergraphError(f"edge {eid} has a vertex outside 0..{n - 1}")
            table[eid] = vs
        self.n = int(n)
        self.edges = {e: table[e] for e in sorted(table)}
        incident: list[list[int]] = [[] for _ in range(self.n)]
        for e, vs in self.edges.items():
            for v in vs:
                incident[v].append(e)
        self._incident = [tuple(x) for x in incident]
        actual_rank = max((len(vs) for vs in self.edges.values()), default=0)
        actual_degree = max((len(x) for x in self._incident), default=0)
        self.rank = max(1, actual_rank) if rank is None else int(rank)
        self.max_degree = max(1, actual_degree) if max_degree is None else int(max_degree)
        if self.rank < actual_rank:
            raise HypergraphError(f"declared rank {self.rank} < actual {actual_rank}")
        if self.max_degree < actual_degree:
            raise HypergraphError(
                f"declared max degree {self.max_degree} < actual {actual_degree}"
            )

    # -- basic queries -------------------------------------------------
    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def incident(self, v: int) -> tuple[int, ...]:
        """N(v): ids of the edges containing ``v``, ascending."""
        return self._incident[v]

    def degree(self, v: int) -> int:
        return len(self._incident[v])

    def actual_rank(self) -> int:
        return max((len(vs) for vs in self.edges.values()), default=0)

    def actual_max_degree(self) -> int:
        return max((len(x) for x in self._incident), default=0)

    def edge_neighbors(self, e: int) -> list[int]:
        """Edges other than ``e`` sharing at least one vertex with it."""
        seen = set()
        for v in self.edges[e]:
            seen.update(self._incident[v])
        seen.discard(e)
        return sorted(seen)

    # -- derived hypergraphs -------------------------------------------
    def subgraph(self, edge_ids: Iterable[int], keep_declared: bool = True) -> "Hypergraph":
        """The hypergraph (V, L) for an edge subset L, on the same vertex set."""
        keep = {e: self.edges[e] for e in sorted(set(edge_ids))}
        if keep_declared:
            return Hypergraph(self.n, keep, rank=self.rank, max_degree=self.max_degree)
        return Hypergraph(self.n, keep)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.edges == other.edges
            and self.rank == other.rank
            and self.max_degree == other.max_degree
        )

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, m={self.m}, r={self.rank}, Delta={self.max_degree})"


# ----------------------------------------------------------------------
# weights and matchings
# ----------------------------------------------------------------------
def unit_weights(H: Hypergraph) -> dict[int, Fraction]:
    return {e: Fraction(1) for e in H.edges}


def total_weight(a: Mapping[int, Fraction], edges: Iterable[int]) -> Fraction:
    """a(L) as an exact rational; a(empty set) = 0."""
    return sum((a[e] for e in edges), Fraction(0))


def is_matching(H: Hypergraph, M: Iterable[int]) -> bool:
    used: set[int] = set()
    for e in M:
        for v in H.edges[e]:
            if v in used:
                return False
            used.add(v)
    return True


def check_matching(H: Hypergraph, M: Iterable[int]) -> frozenset[int]:
    M = frozenset(M)
    missing = [e for e in M if e not in H.edges]
    if missing:
        raise NotAMatching(f"edges {sorted(missing)} are not in the hypergraph")
    if not is_matching(H, sorted(M)):
        raise NotAMatching("two edges of the matching intersect")
    return M


def covered_vertices(H: Hypergraph, M: Iterable[int]) -> set[int]:
    out: set[int] = set()
    for e in M:
        out.update(H.edges[e])
    return out


def is_maximal_matching(H: Hypergraph, M: Iterable[int]) -> bool:
    M = list(M)
    if not is_matching(H, M):
        return False
    return residual(H, M).m == 0


@dataclass
class FractionalMatching:
    """Edge values h(e) in [0, 1] with all denominators dividing ``q``."""

    values: dict[int, Fraction]
    q: int = 1
    info: dict = field(default_factory=dict)

    def __getitem__(self, e: int) -> Fraction:
        return self.values.get(e, Fraction(0))

    def support(self) -> list[int]:
        return sorted(e for e, x in self.values.items() if x > 0)

    def weight(self, a: Mapping[int, Fraction]) -> Fraction:
        return sum((a[e] * x for e, x in self.values.items()), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))

    def loads(self, H: Hypergraph) -> list[Fraction]:
        load = [Fraction(0)] * H.n
        for e, x in self.values.items():
            for v in H.edges[e]:
                load[v] += x
        return load

    def is_feasible(self, H: Hypergraph) -> bool:
        if any(x < 0 or x > 1 for x in self.values.values()):
            return False
        return all(l <= 1 for l in self.loads(H))

    def is_proper(self) -> bool:
        return all(self.q % x.denominator == 0 for x in self.values.values())

    def check(self, H: Hypergraph) -> "FractionalMatching":
        if not self.is_feasible(H):
            raise InfeasibleFractionalMatching("some vertex load exceeds 1")
        if not self.is_proper():
            raise InfeasibleFractionalMatching(f"a value is not a multiple of 1/{self.q}")
        return self

    @staticmethod
    def common_denominator(values: Mapping[int, Fraction]) -> int:
        from math import lcm

        q = 1
        for x in values.values():
            q = lcm(q, x.denominator)
        return q


# ----------------------------------------------------------------------
# graphs: incidence graph and powers
# ----------------------------------------------------------------------
class Graph:
    """A simple undirected graph on nodes ``0 .. size-1`` with sorted adjacency."""

    __slots__ = ("size", "adj")

    def __init__(self, size: int, adj: Iterable[Iterable[int]] | None = None):
        self.size = int(size)
        if adj is None:
            self.adj = [() for _ in range(self.size)]
        else:
            self.adj = [tuple(sorted(set(x))) for x in adj]
            if len(self.adj) != self.size:
                raise ValueError("adjacency list has the wrong length")

    @classmethod
    def from_edges(cls, size: int, pairs: Iterable[tuple[int, int]]) -> "Graph":
        adj: list[set[int]] = [set() for _ in range(size)]
        for u, v in pairs:
            if u == v:
                continue
            adj[u].add(v)
            adj[v].add(u)
        return cls(size, adj)

    @property
    def nodes(self) -> range:
        return range(self.size)

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adj[u]

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def max_degree(self) -> int:
        return max((len(x) for x in self.adj), default=0)

    def edge_count(self) -> int:
        return sum(len(x) for x in self.adj) // 2

    def distances_from(self, sources: Iterable[int], limit: int | None = None) -> dict[int, int]:
        """BFS distances from a set of sources, optionally truncated at ``limit``."""
        dist = {}
        queue = deque()
        for s in sources:
            if s not in dist:
                dist[s] = 0
                queue.append(s)
        while queue:
            u = queue.popleft()
            if limit is not None and dist[u] >= limit:
                continue
            for w in self.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist


class IncidenceGraph(Graph):
    """Inc(H): vertex-nodes ``0..n-1`` first, then one node per edge in id order."""

    __slots__ = ("hypergraph", "edge_node", "node_edge")

    def __init__(self, H: Hypergraph):
        edge_ids = list(H.edges)
        self.hypergraph = H
        self.edge_node = {e: H.n + i for i, e in enumerate(edge_ids)}
        self.node_edge = {H.n + i: e for i, e in enumerate(edge_ids)}
        adj: list[tuple[int, ...]] = []
        for v in range(H.n):
            adj.append(tuple(self.edge_node[e] for e in H.incident(v)))
        for e in edge_ids:
            adj.append(H.edges[e])
        super().__init__(H.n + len(edge_ids), adj)

    def vertex_node(self, v: int) -> int:
        return v

    def is_edge_node(self, u: int) -> bool:
        return u >= self.hypergraph.n


def incidence_graph(H: Hypergraph) -> IncidenceGraph:
    return IncidenceGraph(H)


def power_graph(G: Graph, t: int) -> Graph:
    """G^t: nodes adjacent iff their distance in G is between 1 and t."""
    if t < 1:
        raise ValueError("t must be at least 1")
    if t == 1:
        return Graph(G.size, G.adj)
    adj = []
    for u in G.nodes:
        near = G.distances_from([u], limit=t)
        near.pop(u)
        adj.append(near.keys())
    return Graph(G.size, adj)


# ----------------------------------------------------------------------
# replicate and residual hypergraphs
# ----------------------------------------------------------------------
@dataclass
class Replicate:
    """H^[h] together with the copy -> parent map and lifted weights."""

    hypergraph: Hypergraph
    parent: dict[int, int]
    q: int

    def lift_weights(self, a: Mapping[int, Fraction]) -> dict[int, Fraction]:
        return {c: a[p] for c, p in self.parent.items()}

    def project(self, M: Iterable[int]) -> frozenset[int]:
        return frozenset(self.parent[c] for c in M)


def replicate_with_parents(H: Hypergraph, h: FractionalMatching) -> Replicate:
    """Build H^[h]: q*h(e) copies of each edge.  Copy j of edge e gets id e*q + j."""
    q = h.q
    edges = {}
    parent = {}
    for e, vs in H.edges.items():
        x = h[e]
        copies = x * q
        if copies.denominator != 1:
            raise NonIntegerCopyCount(f"q*h({e}) = {copies} is not an integer")
        for j in range(int(copies)):
            cid = e * q + j
            edges[cid] = vs
            parent[cid] = e
    G = Hypergraph(H.n, edges, rank=H.rank, max_degree=max(1, q))
    return Replicate(G, parent, q)


def replicate(H: Hypergraph, h: FractionalMatching) -> Hypergraph:
    return replicate_with_parents(H, h).hypergraph


def residual(H: Hypergraph, M: Iterable[int]) -> Hypergraph:
    """Res_M(H): the edges of H disjoint from every edge of M."""
    used = covered_vertices(H, M)
    keep = {e: vs for e, vs in H.edges.items() if not used.intersection(vs)}
    return Hypergraph(H.n, keep, rank=H.rank, max_degree=H.max_degree)


def connected_components(H: Hypergraph) -> list[list[int]]:
    """Edge sets of the connected components (components without edges omitted)."""
    parent = list(range(H.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for vs in H.edges.values():
        root = find(vs[0])
        for v in vs[1:]:
            other = find(v)
            if other != root:
                parent[other] = root
    groups: dict[int, list[int]] = {}
    for e, vs in H.edges.items():
        groups.setdefault(find(vs[0]), []).append(e)
    comps = list(groups.values())
    comps.sort(key=lambda c: c[0])
    return comps

