"""Branch-and-bound maximum-weight matching for small hypergraphs."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Mapping

from ..core import Hypergraph, is_matching, total_weight, unit_weights
from .simplex import TooLarge


def brute_force_mwm(
    H: Hypergraph, a: Mapping[int, Fraction], max_edges: int = 30
) -> tuple[frozenset[int], Fraction]:
    """An exact maximum-weight matching and its weight.

    Edges are branched on in order of decreasing weight.  The bound at each node
    charges every still-available edge e to its vertices at a(e)/|e| per vertex
    and takes, per vertex, the best such charge; since a matching uses each
    vertex at most once, this bounds any completion.
    """
    if H.m > max_edges:
        raise TooLarge(f"brute-force matching capped at {max_edges} edges, got {H.m}")
    order = sorted((e for e in H.edges if a[e] > 0), key=lambda e: (-a[e], e))
    k = len(order)
    weight = [Fraction(a[e]) for e in order]
    share = [w / len(H.edges[e]) for w, e in zip(weight, order)]
    verts = [H.edges[e] for e in order]
    conflict = [0] * k
    for i in range(k):
        si = set(verts[i])
        for j in range(k):
            if i != j and si.intersection(verts[j]):
                conflict[i] |= 1 << j

    best_weight = Fraction(0)
    best_set = 0

    def bound(alive: int) -> Fraction:
        per_vertex: dict[int, Fraction] = {}
        total = Fraction(0)
        bits = alive
        while bits:
            low = bits & -bits
            i = low.bit_length() - 1
            bits ^= low
            total += weight[i]
            for v in verts[i]:
                if share[i] > per_vertex.get(v, 0):
                    per_vertex[v] = share[i]
        return min(total, sum(per_vertex.values(), Fraction(0)))

    def search(alive: int, chosen: int, current: Fraction) -> None:
        nonlocal best_weight, best_set
        if current > best_weight:
            best_weight, best_set = current, chosen
        if not alive or current + bound(alive) <= best_weight:
            return
        low = alive & -alive
        i = low.bit_length() - 1
        search(alive & ~low & ~conflict[i], chosen | low, current + weight[i])
        search(alive & ~low, chosen, current)

    search((1 << k) - 1, 0, Fraction(0))
    M = frozenset(order[i] for i in range(k) if best_set >> i & 1)
    return M, best_weight


def matching_number(H: Hypergraph, max_edges: int = 30) -> int:
    """tau(H), the maximum matching cardinality."""
    _, value = brute_force_mwm(H, unit_weights(H), max_edges)
    return int(value)


def exhaustive_mwm(H: Hypergraph, a: Mapping[int, Fraction], max_edges: int = 16) -> Fraction:
    """Maximum matching weight by trying every edge subset (cross-check oracle)."""
    if H.m > max_edges:
        raise TooLarge(f"exhaustive search capped at {max_edges} edges, got {H.m}")
    edges = list(H.edges)
    best = Fraction(0)
    for size in range(1, len(edges) + 1):
        for subset in combinations(edges, size):
            if is_matching(H, subset):
                best = max(best, total_weight(a, subset))
    return best


def brute_augmentations(
    G: Hypergraph, a: Mapping[int, Fraction], M, max_len: int, max_edges: int = 14
) -> set[frozenset[int]]:
    """Edge sets S with |S| <= max_len, S connected, M xor S a matching and positive gain.

    In a graph these are exactly the alternating paths and cycles that can be
    applied to M: a vertex of S with degree 3, or with two edges of the same
    kind, would leave two edges of M xor S at that vertex.
    """
    if G.m > max_edges:
        raise TooLarge(f"augmentation scan capped at {max_edges} edges, got {G.m}")
    M = frozenset(M)
    edges = list(G.edges)
    found = set()
    for size in range(1, max_len + 1):
        for S in combinations(edges, size):
            gain = sum((a[e] if e not in M else -a[e] for e in S), Fraction(0))
            if gain <= 0 or not is_matching(G, M.symmetric_difference(S)):
                continue
            reach = {S[0]}
            grow = True
            while grow:
                grow = False
                for e in S:
                    if e not in reach and any(set(G.edges[e]) & set(G.edges[f]) for f in reach):
                        reach.add(e)
                        grow = True
            if len(reach) == size:
                found.add(frozenset(S))
    return found
