"""Low out-degree edge orientations by reversing blocking sets of s-t paths.

A vertex with out-degree d > D gets d - D arcs from a new source s, a vertex
with d < D gets D - d arcs to a new sink t.  In stage i every directed s-t
path with exactly i arcs becomes a hyperedge over the arcs it uses; a maximal
matching of that hypergraph is a maximal set of arc-disjoint paths, and
reversing the graph arcs on them moves one unit of out-degree from each
overfull start vertex to an underfull end vertex.  After stage i no s-t path
with at most i arcs remains, which is checked by breadth-first search.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction

from .core import Hypergraph, derive_seed, rng_for
from .graphmatch import EnumerationOverflow
from .maximal import hmm


class OrientationError(RuntimeError):
    """The stage loop ended with a vertex still above the out-degree target."""


@dataclass
class Orientation:
    """Every edge e of a multigraph is directed as tail[e] -> the other endpoint."""

    graph: Hypergraph
    tail: dict[int, int]

    def head(self, e: int) -> int:
        x, y = self.graph.edges[e]
        return y if self.tail[e] == x else x

    def out_degrees(self) -> list[int]:
        out = [0] * self.graph.n
        for v in self.tail.values():
            out[v] += 1
        return out

    def max_out_degree(self) -> int:
        return max(self.out_degrees(), default=0)

    def check(self) -> "Orientation":
        if set(self.tail) != set(self.graph.edges):
            raise ValueError("orientation must direct every edge exactly once")
        for e, v in self.tail.items():
            if v not in self.graph.edges[e]:
                raise ValueError(f"tail of edge {e} is not one of its endpoints")
        return self

    def reversed(self, edges) -> "Orientation":
        tail = dict(self.tail)
        for e in edges:
            tail[e] = self.head(e)
        return Orientation(self.graph, tail)

    def arcs(self) -> list[tuple[int, int, int]]:
        return [(e, self.tail[e], self.head(e)) for e in self.graph.edges]


def _check_multigraph(G: Hypergraph) -> None:
    if any(len(vs) != 2 for vs in G.edges.values()):
        raise ValueError("orientations need every edge to have exactly two endpoints")


def default_orientation(G: Hypergraph) -> Orientation:
    """Each edge points from its lower vertex id to its higher one."""
    _check_multigraph(G)
    return Orientation(G, {e: min(vs) for e, vs in G.edges.items()})


def worst_case_orientation(G: Hypergraph) -> Orientation:
    """Visit vertices by decreasing degree and point every unoriented edge away from the current one."""
    _check_multigraph(G)
    order = sorted(G.vertices, key=lambda v: (-G.degree(v), v))
    tail: dict[int, int] = {}
    for v in order:
        for e in G.incident(v):
            tail.setdefault(e, v)
    return Orientation(G, tail)


def check_multiplicities(G: Hypergraph, eps) -> None:
    """Parallel edge counts must not exceed n^2 ceil(1/eps)."""
    cap = G.n**2 * math.ceil(1 / Fraction(eps))
    worst = max(Counter(tuple(sorted(vs)) for vs in G.edges.values()).values(), default=0)
    if worst > cap:
        raise ValueError(f"edge multiplicity {worst} exceeds the cap {cap}")


@dataclass
class AuxGraph:
    """Directed graph on the vertices plus source s = n and sink t = n + 1.

    ``arcs[j] = (from, to, edge)`` where edge is the graph edge id, or None
    for the source and sink arcs.
    """

    n: int
    arcs: list[tuple[int, int, int | None]]
    target: int

    @property
    def source(self) -> int:
        return self.n

    @property
    def sink(self) -> int:
        return self.n + 1

    def out_arcs(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n + 2)]
        for j, (u, _w, _e) in enumerate(self.arcs):
            out[u].append(j)
        return out

    def source_degree(self) -> int:
        return sum(1 for u, _w, _e in self.arcs if u == self.source)

    def distances(self, reverse: bool = False) -> list[float]:
        """BFS arc counts from s (or to t when ``reverse``)."""
        adj: list[list[int]] = [[] for _ in range(self.n + 2)]
        for u, w, _e in self.arcs:
            if reverse:
                adj[w].append(u)
            else:
                adj[u].append(w)
        dist = [math.inf] * (self.n + 2)
        start = self.sink if reverse else self.source
        dist[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if dist[w] == math.inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def shortest_st(self) -> float:
        return self.distances()[self.sink]


def build_aux(orientation: Orientation, D: int) -> AuxGraph:
    n = orientation.graph.n
    arcs: list[tuple[int, int, int | None]] = [(u, w, e) for e, u, w in orientation.arcs()]
    out = orientation.out_degrees()
    for v in range(n):
        arcs.extend((n, v, None) for _ in range(max(0, out[v] - D)))
    for v in range(n):
        arcs.extend((v, n + 1, None) for _ in range(max(0, D - out[v])))
    return AuxGraph(n, arcs, D)


@dataclass
class STPaths:
    """Hyperedge j is the arc set of ``paths[j]``; hypergraph vertices are arc ids."""

    hypergraph: Hypergraph
    paths: list[tuple[int, ...]]

    def __len__(self) -> int:
        return len(self.paths)


def st_path_hypergraph(aux: AuxGraph, length: int, cap: int = 200000) -> STPaths:
    """All directed s-t paths with exactly ``length`` arcs and no repeated node."""
    if length < 1:
        raise ValueError("path length must be at least 1")
    out = aux.out_arcs()
    to_sink = aux.distances(reverse=True)
    paths: list[tuple[int, ...]] = []
    path: list[int] = []
    on_path = {aux.source}

    def walk(u: int) -> None:
        depth = len(path)
        for j in out[u]:
            w = aux.arcs[j][1]
            if w in on_path or depth + 1 + to_sink[w] > length:
                continue
            path.append(j)
            if w == aux.sink:
                if depth + 1 == length:
                    paths.append(tuple(path))
                    if len(paths) > cap:
                        raise EnumerationOverflow(
                            f"more than {cap} s-t paths of length {length}; raise eps or shrink the instance"
                        )
            else:
                on_path.add(w)
                walk(w)
                on_path.discard(w)
            path.pop()

    walk(aux.source)
    H = Hypergraph(len(aux.arcs), {j: p for j, p in enumerate(paths)})
    return STPaths(H, paths)


@dataclass
class OrientResult:
    orientation: Orientation
    target: int
    stage_budget: int
    stages: list[dict] = field(default_factory=list)
    info: dict = field(default_factory=dict)


def _stage_loop(orientation: Orientation, D: int, ell: int, mode: str, seed: int, cap: int):
    stages = []
    for i in range(1, ell + 1):
        aux = build_aux(orientation, D)
        if aux.source_degree() == 0:
            assert orientation.max_out_degree() <= D
            break
        P = st_path_hypergraph(aux, i, cap)
        chosen: list[int] = []
        if len(P):
            chosen = sorted(hmm(P.hypergraph, mode, seed=derive_seed(seed, "orient", i)))
            flip = [aux.arcs[j][2] for k in chosen for j in P.paths[k] if aux.arcs[j][2] is not None]
            assert len(flip) == len(set(flip)), "chosen paths share a graph edge"
            before = sorted(map(tuple, map(sorted, orientation.graph.edges.values())))
            orientation = orientation.reversed(flip)
            assert sorted(map(tuple, map(sorted, orientation.graph.edges.values()))) == before
        nxt = build_aux(orientation, D)
        shortest = nxt.shortest_st()
        assert shortest > i, f"an s-t path with {shortest} arcs survived stage {i}"
        stages.append(
            {"stage": i, "paths": len(P), "reversed": len(chosen), "shortest_after": shortest,
             "max_out_degree": orientation.max_out_degree()}
        )
    return orientation, stages


def orient(
    G: Hypergraph,
    lam: int,
    eps=Fraction(1),
    mode: str = "det",
    seed: int = 0,
    initial: Orientation | None = None,
    c0: int = 8,
    cap: int = 200000,
    partition_constant: float = 1.0,
) -> OrientResult:
    """Orientation with out-degree at most ceil((1 + eps) lam), given arboricity <= lam.

    ``rand`` mode finds the maximal path sets with the randomized matching
    routine and, when lam exceeds y = c log2 n / eps^2, first splits the
    edges at random into ceil(lam / y) parts that are oriented separately
    with eps / 10 and then repaired together by the same stage loop.
    """
    _check_multigraph(G)
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    if mode not in ("det", "rand"):
        raise ValueError(f"unknown mode {mode!r}")
    check_multiplicities(G, eps)
    D = math.ceil((1 + eps) * lam)
    n = max(G.n, 2)
    ell = math.ceil(c0 * math.log2(n) / eps)
    start = (initial if initial is not None else default_orientation(G)).check()
    info: dict = {}
    if mode == "rand":
        y = partition_constant * math.log2(n) / float(eps) ** 2
        if lam > y:
            k = math.ceil(lam / y)
            part = {e: rng_for(seed, "partition", e).randrange(k) for e in G.edges}
            lam_part = math.ceil(y * (1 + float(eps)) + 1)
            tail = {}
            for j in range(k):
                sub = G.subgraph([e for e in G.edges if part[e] == j], keep_declared=False)
                init = Orientation(sub, {e: start.tail[e] for e in sub.edges})
                try:
                    res = orient(sub, lam_part, eps / 10, "rand", derive_seed(seed, "part", j),
                                 init, c0, cap, partition_constant)
                    tail.update(res.orientation.tail)
                except OrientationError:
                    tail.update(init.tail)
            start = Orientation(G, tail)
            info["parts"] = k
            info["combined_max_out_degree"] = start.max_out_degree()
    final, stages = _stage_loop(start, D, ell, mode, seed, cap)
    if final.max_out_degree() > D:
        raise OrientationError(f"out-degree {final.max_out_degree()} > {D} after {ell} stages")
    if build_aux(final, D).source_degree() != 0:
        raise OrientationError("source still has arcs although every out-degree is within target")
    return OrientResult(final.check(), D, ell, stages, info)
