"""(1 + eps)-approximate maximum-weight matching in graphs by short augmentations.

Each stage lists every alternating path or cycle with at most 2*ell edges and
positive gain, turns their vertex sets into the hyperedges of a path
hypergraph weighted by gain, picks a heavy matching of that hypergraph (a set
of vertex-disjoint augmentations) with the hypergraph matching algorithm, and
applies all of them at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .coloring import good_coloring
from .core import Hypergraph, check_matching, covered_vertices, derive_seed, total_weight
from .fractional import hmwm_det, hmwm_rand


class EnumerationOverflow(RuntimeError):
    """More augmentations than the cap allows; raise eps or shrink the instance."""


class NotDisjoint(ValueError):
    """Two augmentations share a vertex."""


class NotValidAugmentation(ValueError):
    """An edge sequence is not an augmentation for the current matching."""


@dataclass(frozen=True)
class Augmentation:
    """An alternating path or cycle, stored as an edge sequence."""

    edges: tuple[int, ...]
    kind: str
    gain: Fraction
    vertices: frozenset[int]

    def __len__(self) -> int:
        return len(self.edges)


@dataclass
class PathHypergraph:
    """Hyperedge j is the vertex set of ``augmentations[j]``, weighted by its gain."""

    hypergraph: Hypergraph
    augmentations: list[Augmentation]

    @property
    def weights(self) -> dict[int, Fraction]:
        return {j: aug.gain for j, aug in enumerate(self.augmentations)}

    def __len__(self) -> int:
        return len(self.augmentations)


def _check_graph(G: Hypergraph) -> None:
    if any(len(vs) != 2 for vs in G.edges.values()):
        raise ValueError("graph matching needs every edge to have exactly two endpoints")


def _other(G: Hypergraph, e: int, v: int) -> int:
    x, y = G.edges[e]
    return y if x == v else x


def _canonical_path(edges: tuple[int, ...]) -> tuple[int, ...]:
    rev = edges[::-1]
    return min(edges, rev)


def _canonical_cycle(edges: tuple[int, ...]) -> tuple[int, ...]:
    best = None
    k = len(edges)
    for seq in (edges, edges[::-1]):
        for i in range(k):
            rot = seq[i:] + seq[:i]
            if best is None or rot < best:
                best = rot
    return best


def gain(a: Mapping[int, Fraction], M: frozenset[int], edges: Iterable[int]) -> Fraction:
    """g(P) = a(P - M) - a(P & M)."""
    return sum((Fraction(a[e]) if e not in M else -Fraction(a[e]) for e in edges), Fraction(0))


def enumerate_augmentations(
    G: Hypergraph,
    a: Mapping[int, Fraction],
    M: Iterable[int],
    ell: int,
    cap: int = 200000,
) -> PathHypergraph:
    """All positive-gain augmentations with at most 2*ell edges, up to reversal.

    Walks start either with a matched edge or, from an unmatched vertex, with
    an unmatched edge; they then alternate.  A path is recorded when its last
    edge is matched or ends at an unmatched vertex.  A cycle is recorded when
    the walk returns to its start through an edge of the opposite kind to the
    first one.
    """
    _check_graph(G)
    M = check_matching(G, M)
    matched = covered_vertices(G, M)
    limit = 2 * ell
    found: dict[tuple[int, ...], Augmentation] = {}

    def record(edges: tuple[int, ...], kind: str, verts: frozenset[int]) -> None:
        key = (kind,) + (_canonical_cycle(edges) if kind == "cycle" else _canonical_path(edges))
        if key in found:
            return
        g = gain(a, M, edges)
        if g <= 0:
            return
        canon = key[1:]
        found[key] = Augmentation(canon, kind, g, verts)
        if len(found) > cap:
            raise EnumerationOverflow(
                f"more than {cap} augmentations of length <= {limit}; raise eps or shrink the instance"
            )

    def extend(start: int, cur: int, path: list[int], seen: list[int], in_m: bool) -> None:
        if len(path) == limit:
            return
        for e in G.incident(cur):
            if (e in M) == in_m or e in path:
                continue
            w = _other(G, e, cur)
            if w == start:
                if (path[0] in M) != (e in M):
                    record(tuple(path) + (e,), "cycle", frozenset(seen))
                continue
            if w in seen:
                continue
            path.append(e)
            seen.append(w)
            if e in M or w not in matched:
                record(tuple(path), "path", frozenset(seen))
            extend(start, w, path, seen, e in M)
            path.pop()
            seen.pop()

    for v in G.vertices:
        for e in G.incident(v):
            if e not in M and v in matched:
                continue
            w = _other(G, e, v)
            if e in M or w not in matched:
                record((e,), "path", frozenset((v, w)))
            extend(v, w, [e], [v, w], e in M)

    augs = sorted(found.values(), key=lambda p: (p.kind, p.edges))
    H = Hypergraph(
        G.n,
        {j: sorted(p.vertices) for j, p in enumerate(augs)},
    )
    return PathHypergraph(H, augs)


def validate_augmentation(G: Hypergraph, a, M: frozenset[int], aug: Augmentation) -> None:
    """Raise NotValidAugmentation unless ``aug`` alternates and M xor P is a matching."""
    edges = aug.edges
    if not edges or len(set(edges)) != len(edges):
        raise NotValidAugmentation("empty or repeated edge sequence")
    for x, y in zip(edges, edges[1:]):
        if (x in M) == (y in M):
            raise NotValidAugmentation(f"edges {x}, {y} do not alternate")
        if not set(G.edges[x]) & set(G.edges[y]):
            raise NotValidAugmentation(f"edges {x}, {y} are not consecutive")
    if aug.kind == "cycle" and len(edges) > 1 and (edges[0] in M) == (edges[-1] in M):
        raise NotValidAugmentation("cycle does not alternate across its closing vertex")
    flipped = set(M).symmetric_difference(edges)
    touched = {v for e in edges for v in G.edges[e]}
    if touched != set(aug.vertices):
        raise NotValidAugmentation("vertex set does not match the edges")
    load: dict[int, int] = {}
    for e in flipped:
        for v in G.edges[e]:
            load[v] = load.get(v, 0) + 1
    if any(c > 1 for c in load.values()):
        raise NotValidAugmentation("M xor P is not a matching")
    if gain(a, M, edges) != aug.gain:
        raise NotValidAugmentation("recorded gain is wrong")


def augment(G: Hypergraph, a, M: Iterable[int], augs: Iterable[Augmentation]) -> frozenset[int]:
    """M xor (union of P); its weight is a(M) plus the total gain, checked exactly."""
    M = check_matching(G, M)
    augs = list(augs)
    used: set[int] = set()
    for aug in augs:
        if used & aug.vertices:
            raise NotDisjoint("augmentations share a vertex")
        used |= aug.vertices
    for aug in augs:
        validate_augmentation(G, a, M, aug)
    out = set(M)
    for aug in augs:
        out.symmetric_difference_update(aug.edges)
    out = check_matching(G, out)
    expected = total_weight(a, M) + sum((aug.gain for aug in augs), Fraction(0))
    assert total_weight(a, out) == expected, "augmentation weight bookkeeping failed"
    return out


@dataclass
class GMWMResult:
    matching: frozenset[int]
    weight: Fraction
    ell: int
    stage_budget: int
    stages: list[dict] = field(default_factory=list)
    early_exit: bool = False


def stage_parameters(eps) -> tuple[int, int]:
    """(ell, stage budget) = (ceil(2/eps), ceil(8 ln(4/eps)/eps))."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    ell = math.ceil(2 / eps)
    t = math.ceil(8 * math.log(4 / float(eps)) / float(eps))
    return ell, t


def gmwm(
    G: Hypergraph,
    a: Mapping[int, Fraction],
    eps=Fraction(1, 4),
    mode: str = "det",
    delta=Fraction(1, 5),
    seed: int = 0,
    cap: int = 200000,
) -> GMWMResult:
    """Matching with a(M) close to the maximum weight, built from short augmentations."""
    _check_graph(G)
    ell, t = stage_parameters(eps)
    M: frozenset[int] = frozenset()
    result = GMWMResult(M, Fraction(0), ell, t)
    for i in range(t):
        P = enumerate_augmentations(G, a, M, ell, cap)
        if not len(P):
            result.early_exit = True
            break
        H = P.hypergraph
        if mode == "det":
            picked = hmwm_det(H, P.weights, good_coloring(H))
        elif mode == "rand":
            picked = hmwm_rand(H, P.weights, Fraction(delta) / t, derive_seed(seed, "stage", i))
        else:
            raise ValueError(f"unknown mode {mode!r}")
        chosen = [P.augmentations[j] for j in sorted(picked)]
        before = total_weight(a, M)
        M = augment(G, a, M, chosen)
        after = total_weight(a, M)
        assert after > before, "a stage made no progress"
        result.stages.append(
            {"stage": i, "augmentations": len(P), "chosen": len(chosen), "before": before, "after": after}
        )
    result.matching = M
    result.weight = total_weight(a, M)
    return result
