"""Vertex colorings of Inc(H)^2, color reduction, degree splitting and defective edge coloring.

A good coloring of a hypergraph colors every vertex-node and every edge-node
of the incidence graph so that nodes at distance at most two get different
colors.  It is stored by vertex id and edge id rather than by node index, so
the same object can be applied to any subhypergraph (a coloring that is proper
on Inc(H)^2 stays proper on the incidence graph of every edge subset).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .core import (
    Graph,
    Hypergraph,
    IncidenceGraph,
    Replicate,
    incidence_graph,
    total_weight,
)
from .derand import BlackBoxEstimator, NotProper, bernoulli, derand_proper
from .localsim import LocalProgram


class PreconditionDelta(ValueError):
    """The maximum degree is too small for the requested guarantee."""


# ----------------------------------------------------------------------
# colorings
# ----------------------------------------------------------------------
@dataclass
class VertexColoring:
    """Colors 1..k on the nodes of a target graph."""

    colors: dict[int, int]
    k: int
    target: str = "graph"
    rounds: int = 0

    def is_proper(self, G: Graph) -> bool:
        return is_proper(G, self.colors)


@dataclass
class GoodColoring:
    """Proper coloring of Inc(H)^2 keyed by vertex id and by edge id."""

    vertex_colors: dict[int, int]
    edge_colors: dict[int, int]
    k: int
    rounds: int = 0

    def node_colors(self, inc: IncidenceGraph) -> dict[int, int]:
        """Colors indexed by the nodes of ``inc`` (any subhypergraph's incidence graph)."""
        out = {v: self.vertex_colors[v] for v in range(inc.hypergraph.n)}
        for e, node in inc.edge_node.items():
            out[node] = self.edge_colors[e]
        return out

    def as_vertex_coloring(self, inc: IncidenceGraph) -> VertexColoring:
        return VertexColoring(self.node_colors(inc), self.k, "Inc(H)^2", self.rounds)

    def restrict(self, edge_ids) -> "GoodColoring":
        return GoodColoring(
            dict(self.vertex_colors), {e: self.edge_colors[e] for e in edge_ids}, self.k, self.rounds
        )

    def num_colors(self) -> int:
        return len(set(self.vertex_colors.values()) | set(self.edge_colors.values()))


def is_proper(G: Graph, colors: Mapping[int, int]) -> bool:
    return all(colors[u] != colors[w] for u in G.nodes for w in G.neighbors(u))


def is_good_coloring(H: Hypergraph, coloring: GoodColoring) -> bool:
    """Independent scan: every closed neighborhood of Inc(H) is rainbow."""
    for v in H.vertices:
        seen = {coloring.vertex_colors[v]}
        for e in H.incident(v):
            c = coloring.edge_colors[e]
            if c in seen:
                return False
            seen.add(c)
    for e, vs in H.edges.items():
        seen = {coloring.edge_colors[e]}
        for v in vs:
            c = coloring.vertex_colors[v]
            if c in seen:
                return False
            seen.add(c)
    return True


def good_coloring(H: Hypergraph) -> GoodColoring:
    """Greedy proper coloring of Inc(H)^2 in node order.

    Vertex-nodes come first, then edge-nodes in id order; each takes the least
    color unused among its already-colored Inc^2 neighbors.  This is the
    outcome of the distributed priority greedy (a node decides once all
    lower-id neighbors have), and ``rounds`` is its round count: one plus the
    longest decreasing-id chain.  At most r*Delta + 1 colors are used.
    """
    n = H.n
    span = max(H.actual_rank(), 1) * max(H.actual_max_degree(), 1) + 2
    used = np.zeros((n, span), dtype=bool)
    vcol: dict[int, int] = {}
    vround = [0] * n
    co_vertices: list[set[int]] = [set() for _ in range(n)]
    for vs in H.edges.values():
        for v in vs:
            co_vertices[v].update(vs)
    for v in range(n):
        lower = [u for u in co_vertices[v] if u < v]
        taken = {vcol[u] for u in lower}
        c = 1
        while c in taken:
            c += 1
        vcol[v] = c
        used[v, c] = True
        vround[v] = 1 + max((vround[u] for u in lower), default=0)
    ecol: dict[int, int] = {}
    top_round = list(vround)
    best = max(vround, default=0)
    for e, vs in H.edges.items():
        idx = list(vs)
        forbidden = np.logical_or.reduce(used[idx], axis=0)
        forbidden[0] = True
        c = int(np.argmin(forbidden))
        ecol[e] = c
        used[idx, c] = True
        rnd = 1 + max(top_round[v] for v in vs)
        for v in vs:
            top_round[v] = rnd
        best = max(best, rnd)
    k = max([*vcol.values(), *ecol.values()], default=0)
    return GoodColoring(vcol, ecol, k, best)


def greedy_coloring_program() -> LocalProgram:
    """The distributed priority greedy, to be run on the square of a graph.

    State is (uid, color).  A node picks the least color missing from its
    neighbors once every neighbor with a smaller id has a color.
    """

    def step(_rnd, s, nbrs, _rng):
        uid, color = s
        if color is not None:
            return s
        if any(c is None for (u, c) in nbrs if u < uid):
            return s
        taken = {c for (_u, c) in nbrs if c is not None}
        c = 1
        while c in taken:
            c += 1
        return (uid, c)

    return LocalProgram(
        init=lambda node, uid, _inp: (uid, None),
        step=step,
        output=lambda s: s[1],
        name="greedy-coloring",
    )


def reduce_colors(G: Graph, coloring: Mapping[int, int] | VertexColoring, d: int) -> VertexColoring:
    """Recolor a proper coloring to at most d + 1 colors, one old class per stage.

    Requires d >= max degree of G.  In stage c every node of old color c takes
    the least color in 1..d+1 unused by already-recolored neighbors; the nodes
    of one class are pairwise non-adjacent, so a stage is one round.
    """
    colors = coloring.colors if isinstance(coloring, VertexColoring) else dict(coloring)
    if not is_proper(G, colors):
        raise NotProper("input coloring is not proper")
    if d < G.max_degree():
        raise ValueError(f"target d={d} is below the maximum degree {G.max_degree()}")
    if all(1 <= c <= d + 1 for c in colors.values()):
        return VertexColoring(dict(colors), max(colors.values(), default=0), "graph", 0)
    new: dict[int, int] = {}
    stages = 0
    for old in sorted(set(colors.values())):
        stages += 1
        cls = [u for u in G.nodes if colors[u] == old]
        picks = {}
        for u in cls:
            taken = {new[w] for w in G.neighbors(u) if w in new}
            c = 1
            while c in taken:
                c += 1
            picks[u] = c
        new.update(picks)
    return VertexColoring(new, max(new.values(), default=0), "graph", stages)


def lift_coloring(coloring: GoodColoring, rep: Replicate) -> GoodColoring:
    """Good coloring of a replicate hypergraph from one of its parent.

    Parent color c becomes the block (c-1)*q + 1 .. c*q; a vertex takes the
    first color of its block and copy j of an edge takes the (j+1)-th.
    """
    q = max(rep.q, 1)
    vcol = {v: (c - 1) * q + 1 for v, c in coloring.vertex_colors.items()}
    ecol = {}
    for cid, p in rep.parent.items():
        j = cid - p * rep.q
        ecol[cid] = (coloring.edge_colors[p] - 1) * q + j + 1
    return GoodColoring(vcol, ecol, coloring.k * q, coloring.rounds)


# ----------------------------------------------------------------------
# degree splitting with virtual nodes
# ----------------------------------------------------------------------
def _comb(n: int, j: int) -> int:
    return math.comb(n, j) if 0 <= j <= n else 0


class _VirtualNode:
    """Tail counts for one virtual node.

    With ``k`` undecided edges, ``z1``/``z0`` decided ones and the threshold
    thr = (1+eps)deg/2, the node is violated iff X >= A or X <= B where X is
    the number of undecided edges going to L'_1.  We keep the integer counts
    U = #{X >= A} and Lo = #{X <= B} out of the 2^k outcomes.  Deciding one
    edge updates both by Pascal's rule, using the boundary binomials
    cu = C(k-1, A-1) and cl = C(k-1, B), which are themselves updated by ratio.
    ``weight`` is an integer (the real weight times a common denominator).
    """

    __slots__ = ("weight", "k", "A", "B", "U", "Lo", "cu", "cl")

    def __init__(self, weight: int, deg: int, thr: Fraction):
        self.weight = weight
        self.k = deg
        self.A = math.floor(thr) + 1
        self.B = math.ceil(deg - thr) - 1
        self.U = sum(_comb(deg, i) for i in range(max(self.A, 0), deg + 1))
        self.Lo = sum(_comb(deg, i) for i in range(0, min(self.B, deg) + 1))
        self.cu = _comb(deg - 1, self.A - 1)
        self.cl = _comb(deg - 1, self.B)

    def after(self, bit: int) -> tuple[int, int, int]:
        """(k, U, Lo) once one more edge is decided."""
        if bit:
            return self.k - 1, (self.U + self.cu) >> 1, (self.Lo - self.cl) >> 1
        return self.k - 1, (self.U - self.cu) >> 1, (self.Lo + self.cl) >> 1

    def decide(self, bit: int) -> None:
        n = self.k - 1
        self.k, self.U, self.Lo = self.after(bit)
        if n <= 0:
            self.cu = self.cl = 0
            return
        # binomials C(n-1, .) from C(n, .)
        if bit:
            self.cu = self.cu * (self.A - 1) // n
            self.cl = self.cl * self.B // n
            self.A -= 1
            self.B -= 1
        else:
            self.cu = self.cu * (n - self.A + 1) // n
            self.cl = self.cl * (n - self.B) // n

    def expectation(self) -> Fraction:
        return Fraction(self.weight * (self.U + self.Lo), 2**self.k)


class _SplitEstimator(BlackBoxEstimator):
    def __init__(self, H: Hypergraph, inc: IncidenceGraph, vnodes, members, owner, eps, scale):
        self.H = H
        self.inc = inc
        self.vnodes = vnodes  # list of _VirtualNode
        self.members = members  # edges of each virtual node
        self.owner = owner  # edge -> list of virtual node indices
        self.eps = eps
        self.scale = scale  # common denominator of the weights
        self.fixed: dict[int, int] = {}

    def random_nodes(self):
        return [self.inc.edge_node[e] for e in self.H.edges]

    def space(self, node):
        return bernoulli()

    def local_objective(self, node, value):
        e = self.inc.node_edge[node]
        states = []
        for idx in self.owner.get(e, ()):
            u = self.vnodes[idx]
            k, U, Lo = u.after(value)
            states.append((u.weight * (U + Lo), k))
        if not states:
            return Fraction(0)
        top = max(k for _, k in states)
        num = sum(x << (top - k) for x, k in states)
        return Fraction(num, self.scale << top)

    def commit(self, node, value):
        e = self.inc.node_edge[node]
        for idx in self.owner.get(e, ()):
            self.vnodes[idx].decide(value)
        self.fixed[node] = value

    def expectation(self):
        return sum((u.expectation() for u in self.vnodes), Fraction(0)) / self.scale

    def violated(self, rho) -> list[int]:
        out = []
        for idx, chunk in enumerate(self.members):
            z1 = sum(rho[self.inc.edge_node[e]] for e in chunk)
            thr = (1 + self.eps) * len(chunk) / 2
            if z1 > thr or len(chunk) - z1 > thr:
                out.append(idx)
        return out

    def realized(self, rho):
        return Fraction(sum(self.vnodes[i].weight for i in self.violated(rho)), self.scale)


@dataclass
class SplitResult:
    L1: frozenset[int]
    L2: frozenset[int]
    discarded: frozenset[int]
    virtual_nodes: int
    expected_penalty: Fraction
    realized_penalty: Fraction
    precondition_met: bool
    max_degree: Fraction

    def __iter__(self):
        yield self.L1
        yield self.L2


def split_threshold(r: int, eps: Fraction, eta: Fraction) -> float:
    """Smallest maximum degree for which the split guarantee is claimed."""
    return 100 * math.log2(r / eta) / eps**2


def degree_split(
    H: Hypergraph,
    a: Mapping[int, Fraction],
    eps,
    eta,
    coloring: GoodColoring,
    max_degree=None,
    enforce: bool = True,
    check: bool = True,
) -> SplitResult:
    """Split E into disjoint L1, L2 with deg_Lj(v) <= (1+eps)Delta/2 for all v.

    Vertices of degree above Delta/2 are cut into virtual nodes of about
    50 log2(r/eta)/eps^2 edges each; each edge flips a fair coin for L'_1 or
    L'_2, the expected weight at violated virtual nodes is derandomized, and
    all edges at violated virtual nodes are dropped.  The degree bound always
    holds; the weight bound a(L1 u L2) >= (1 - eta) a(E) is guaranteed when
    Delta meets the precondition.
    """
    eps, eta = Fraction(eps), Fraction(eta)
    delta = Fraction(max_degree if max_degree is not None else H.max_degree)
    r = max(H.rank, 1)
    need = split_threshold(r, eps, eta)
    met = delta >= need
    if enforce and not met:
        raise PreconditionDelta(f"max degree {delta} is below {need:.1f}")
    block = max(1, math.ceil(50 * math.log2(r / eta) / eps**2))
    inc = incidence_graph(H)
    scale = math.lcm(*(Fraction(a[e]).denominator for e in H.edges)) if H.m else 1
    vnodes: list[_VirtualNode] = []
    members: list[tuple[int, ...]] = []
    owner: dict[int, list[int]] = {}
    for v in H.vertices:
        edges = H.incident(v)
        d = len(edges)
        if d == 0 or 2 * d <= delta:
            continue
        parts = max(1, d // block)
        for j in range(parts):
            chunk = edges[j * block:] if j == parts - 1 else edges[j * block:(j + 1) * block]
            idx = len(vnodes)
            weight = int(total_weight(a, chunk) * scale)
            vnodes.append(_VirtualNode(weight, len(chunk), (1 + eps) * len(chunk) / 2))
            members.append(chunk)
            for e in chunk:
                owner.setdefault(e, []).append(idx)
    est = _SplitEstimator(H, inc, vnodes, members, owner, eps, scale)
    res = derand_proper(inc, coloring.node_colors(inc), est, sense="min", check=check)
    bit = {inc.node_edge[node]: x for node, x in res.assignment.items()}
    discarded: set[int] = set()
    for idx in est.violated(res.assignment):
        discarded.update(members[idx])
    realized = res.realized
    assert realized <= res.expected, "derandomization increased the penalty"
    L1 = frozenset(e for e in H.edges if bit[e] == 1 and e not in discarded)
    L2 = frozenset(e for e in H.edges if bit[e] == 0 and e not in discarded)
    cap = (1 + eps) * delta / 2
    for v in H.vertices:
        for part in (L1, L2):
            if sum(1 for e in H.incident(v) if e in part) > cap:
                raise AssertionError(f"vertex {v} exceeds the split degree bound")
    return SplitResult(
        L1, L2, frozenset(discarded), len(vnodes), res.expected, realized, met, delta
    )


# ----------------------------------------------------------------------
# defective edge coloring by repeated halving
# ----------------------------------------------------------------------
@dataclass
class EdgeColoring:
    """A partial edge coloring chi: E' -> 1..k."""

    colors: dict[int, int]
    k: int
    bound: Fraction = Fraction(0)
    stages: list[dict] = field(default_factory=list)

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self.colors)

    def defectiveness(self, H: Hypergraph) -> int:
        return defectiveness(H, self.colors)


def defectiveness(H: Hypergraph, colors: Mapping[int, int]) -> int:
    """max over v and j of |N(v) cap chi^-1(j)|, by direct scan."""
    worst = 0
    for v in H.vertices:
        counts: dict[int, int] = {}
        for e in H.incident(v):
            if e in colors:
                counts[colors[e]] = counts.get(colors[e], 0) + 1
        worst = max(worst, max(counts.values(), default=0))
    return worst


def defective_threshold(r: int, k: int, delta, C=1) -> float:
    return float(C) * k * math.log2(r * math.log2(k) / float(delta))


def defective_color(
    H: Hypergraph,
    a: Mapping[int, Fraction],
    delta,
    k: int,
    coloring: GoodColoring,
    C=1,
    enforce: bool = True,
    check: bool = True,
) -> EdgeColoring:
    """Color a (1 - delta) weight fraction of the edges with k colors, defectiveness <= 4 Delta/k.

    s = floor(log2 k) halving stages; stage i splits every current class with
    eps = 1/(4s) and eta = delta/(4s), so classes after stage i have degree at
    most (1+eps)^i Delta / 2^i.  Inner splits use each class's actual maximum
    degree, which is a valid (smaller) bound.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    delta = Fraction(delta)
    Delta = H.max_degree
    r = max(H.rank, 1)
    need = defective_threshold(r, k, delta, C)
    if enforce and Delta < need:
        raise PreconditionDelta(f"max degree {Delta} is below {need:.1f}")
    s = int(math.floor(math.log2(k)))
    eps = Fraction(1, 4 * s)
    eta = delta / (4 * s)
    classes: list[frozenset[int]] = [frozenset(H.edges)]
    total = total_weight(a, H.edges)
    stages = []
    for i in range(s):
        new_classes = []
        for cls in classes:
            sub = H.subgraph(cls)
            d = max(sub.actual_max_degree(), 1)
            res = degree_split(sub, a, eps, eta, coloring, max_degree=d, enforce=False, check=check)
            new_classes.extend([res.L1, res.L2])
        classes = new_classes
        bound = (1 + eps) ** (i + 1) * Delta / 2 ** (i + 1)
        worst = max(defectiveness(H, {e: j for j, c in enumerate(classes) for e in c}), 0)
        kept = sum((total_weight(a, c) for c in classes), Fraction(0))
        stages.append({"stage": i + 1, "degree_bound": bound, "max_class_degree": worst,
                       "retained": kept, "total": total})
        assert worst <= bound, f"stage {i + 1} exceeded the degree bound"
    colors = {e: j + 1 for j, cls in enumerate(classes) for e in cls}
    out = EdgeColoring(colors, k, Fraction(4 * Delta, k), stages)
    assert out.defectiveness(H) <= out.bound
    return out
