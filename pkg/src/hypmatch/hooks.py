"""Locality hooks for the centrally implemented algorithms.

Each hook exposes an algorithm as ``evaluate(inputs, uids, seed)`` over the
nodes of the incidence graph, together with the radius (in incidence-graph
hops) it claims.  ``localsim.locality_audit`` then checks that a node's output
is unchanged when inputs or ids beyond that radius are altered.

Declared radii:

* good coloring: 2 * rounds, where rounds is one plus the longest chain of
  decreasing ids in Inc(H)^2.  A node's color depends only on such chains.
* simple matching and degree splitting with a k-color good coloring:
  2k + 2.  Commits in color class c read the state within two hops, which in
  turn was fixed by earlier classes, and the final output reads the bits
  within two more hops.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .coloring import GoodColoring, degree_split, good_coloring
from .core import Hypergraph, IncidenceGraph, incidence_graph
from .derand import simple_matching
from .localsim import Perturbation, locality_audit


@dataclass
class LocalityHook:
    name: str
    hypergraph: Hypergraph
    inc: IncidenceGraph
    evaluate: Callable[[dict, dict, int], dict[int, Any]]
    radius: int
    base_inputs: dict
    base_uids: dict


def _relabel(H: Hypergraph, inc: IncidenceGraph, uids: dict[int, int]):
    """Hypergraph whose vertex and edge ids follow the order of the node uids."""
    vorder = sorted(range(H.n), key=lambda v: uids.get(v, v))
    vnew = {v: i for i, v in enumerate(vorder)}
    eorder = sorted(H.edges, key=lambda e: uids.get(inc.edge_node[e], inc.edge_node[e]))
    enew = {e: i for i, e in enumerate(eorder)}
    G = Hypergraph(H.n, {enew[e]: [vnew[v] for v in vs] for e, vs in H.edges.items()},
                   rank=H.rank, max_degree=H.max_degree)
    return G, vnew, enew


def good_coloring_hook(H: Hypergraph) -> LocalityHook:
    inc = incidence_graph(H)

    def evaluate(_inputs, uids, _seed):
        G, vnew, enew = _relabel(H, inc, uids)
        col = good_coloring(G)
        out = {v: col.vertex_colors[vnew[v]] for v in range(H.n)}
        out.update({inc.edge_node[e]: col.edge_colors[enew[e]] for e in H.edges})
        return out

    radius = 2 * good_coloring(H).rounds
    return LocalityHook("good_coloring", H, inc, evaluate, radius, {}, {})


def _weights_from(H, inc, inputs) -> dict[int, Fraction]:
    return {e: Fraction(inputs[inc.edge_node[e]]) for e in H.edges}


def simple_matching_hook(H: Hypergraph, a, coloring: GoodColoring | None = None) -> LocalityHook:
    inc = incidence_graph(H)
    coloring = coloring if coloring is not None else good_coloring(H)
    colors = coloring.node_colors(inc)

    def evaluate(inputs, _uids, _seed):
        M = simple_matching(H, _weights_from(H, inc, inputs), colors, inc)
        return {inc.edge_node[e]: e in M for e in H.edges}

    base = {inc.edge_node[e]: Fraction(a[e]) for e in H.edges}
    return LocalityHook("simple_matching", H, inc, evaluate, 2 * coloring.k + 2, base, {})


def degree_split_hook(H: Hypergraph, a, eps=Fraction(1, 2), eta=Fraction(1, 10),
                      coloring: GoodColoring | None = None) -> LocalityHook:
    inc = incidence_graph(H)
    coloring = coloring if coloring is not None else good_coloring(H)

    def evaluate(inputs, _uids, _seed):
        res = degree_split(H, _weights_from(H, inc, inputs), eps, eta, coloring, enforce=False)
        side = {e: 1 for e in res.L1} | {e: 2 for e in res.L2}
        return {inc.edge_node[e]: side.get(e, 0) for e in H.edges}

    base = {inc.edge_node[e]: Fraction(a[e]) for e in H.edges}
    return LocalityHook("degree_split", H, inc, evaluate, 2 * coloring.k + 2, base, {})


def random_perturbation(hook: LocalityHook, u: int, rng: random.Random) -> Perturbation | None:
    """Alter ids (good coloring) or weights (the others) at nodes beyond the radius of u."""
    near = hook.inc.distances_from([u], limit=hook.radius)
    far = [w for w in hook.inc.nodes if w not in near]
    if not far:
        return None
    if hook.name == "good_coloring":
        uids = {}
        for group in ([w for w in far if w < hook.hypergraph.n], [w for w in far if w >= hook.hypergraph.n]):
            if len(group) > 1:
                shuffled = group[:]
                rng.shuffle(shuffled)
                uids.update(zip(group, shuffled))
        return Perturbation(uids=uids) if uids else None
    edges = [w for w in far if w >= hook.hypergraph.n]
    if not edges:
        return None
    pick = rng.sample(edges, max(1, len(edges) // 2))
    return Perturbation(inputs={w: Fraction(rng.randint(1, 50)) for w in pick})


def audit_hook(hook: LocalityHook, u: int, perturbation: Perturbation, seed: int = 0) -> bool:
    base_uids = hook.base_uids or ({w: w for w in hook.inc.nodes} if perturbation.uids else {})
    return locality_audit(hook.inc, hook.evaluate, hook.radius, u, perturbation, seed,
                          hook.base_inputs, base_uids)


def sample_audits(hooks: list[LocalityHook], samples: int, seed: int = 0) -> list[dict]:
    """Round-robin over ``hooks``: random node, random far perturbation, one audit each."""
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < samples:
        hook = hooks[len(out) % len(hooks)]
        attempts += 1
        if attempts > 50 * samples:
            raise RuntimeError("could not find far-away perturbations; use larger instances")
        u = hook.inc.edge_node[rng.choice(list(hook.hypergraph.edges))]
        pert = random_perturbation(hook, u, rng)
        if pert is None:
            continue
        ok = audit_hook(hook, u, pert, seed)
        out.append({"algorithm": hook.name, "node": u, "radius": hook.radius,
                    "changed": len(pert.nodes()), "passed": ok})
    return out
