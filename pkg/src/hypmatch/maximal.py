"""Maximal matchings in hypergraphs.

Four routes are provided: repeated heavy matchings of the residual
hypergraph (deterministic or randomized), a one-shot sampler guided by a
fractional matching, Luby's independent-set algorithm on the line graph,
and a three-phase shattering algorithm that combines the last three.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .coloring import good_coloring
from .core import (
    Hypergraph,
    check_matching,
    connected_components,
    derive_seed,
    is_maximal_matching,
    residual,
    rng_for,
    unit_weights,
)
from .fractional import hmwm_det, hmwm_rand, lp_solve


@dataclass
class HmmRun:
    """A maximal matching with a per-stage log.

    Each stage entry records the residual edge count before the stage, the
    committed edges and whether the progress fallback fired.
    """

    matching: frozenset[int]
    stages: list[dict] = field(default_factory=list)
    phase: str = ""
    info: dict = field(default_factory=dict)

    @property
    def stage_count(self) -> int:
        return len(self.stages)


def stage_budget(H: Hypergraph) -> int:
    """8 r ceil(log2 m) + 1, an upper bound on the stage count used to split delta."""
    return 8 * max(H.rank, 1) * max(1, math.ceil(math.log2(max(H.m, 2)))) + 1


def hmm_report(H: Hypergraph, mode: str = "det", delta=Fraction(1, 5), seed: int = 0) -> HmmRun:
    """Maximal matching by committing a heavy matching of the residual until it is empty.

    With unit weights every stage commits a constant fraction of tau / r of
    the remaining residual.  If a stage ever returns nothing, the lowest-id
    residual edge is committed so the loop always terminates.
    """
    if mode not in ("det", "rand"):
        raise ValueError(f"unknown mode {mode!r}")
    delta_stage = Fraction(delta) / (2 * stage_budget(H))
    M: frozenset[int] = frozenset()
    run = HmmRun(M, phase=mode)
    R = H
    i = 0
    while R.m:
        a = unit_weights(R)
        if mode == "det":
            L = hmwm_det(R, a, good_coloring(R))
        else:
            L = hmwm_rand(R, a, delta_stage, derive_seed(seed, "hmm", i))
        fallback = not L
        if fallback:
            L = frozenset([min(R.edges)])
        run.stages.append(
            {"stage": i, "residual_edges": R.m, "committed": len(L), "fallback": fallback, "edges": tuple(sorted(L))}
        )
        M = check_matching(H, M | L)
        R = residual(H, M)
        i += 1
    assert is_maximal_matching(H, M)
    run.matching = M
    return run


def hmm(H: Hypergraph, mode: str = "det", delta=Fraction(1, 5), seed: int = 0) -> frozenset[int]:
    if mode == "shatter":
        return hmm_shattering(H, seed).matching
    return hmm_report(H, mode, delta, seed).matching


# ----------------------------------------------------------------------
# the fractional-matching sampler
# ----------------------------------------------------------------------
@dataclass
class SampleResult:
    matching: frozenset[int]
    sampled: frozenset[int]
    probabilities: dict[int, Fraction]
    fractional_size: Fraction


def sampling_probabilities(H: Hypergraph) -> dict[int, Fraction]:
    """p_e = h(e) / (10 r) for a half-optimal fractional matching h."""
    if not H.m:
        return {}
    h = lp_solve(H, unit_weights(H), Fraction(1, 2))
    r = max(H.rank, 1)
    return {e: h[e] / (10 * r) for e in H.edges}


def expected_sample_size(H: Hypergraph, p: dict[int, Fraction]) -> Fraction:
    """Exact E|M|: an edge survives iff it is sampled and no neighbor is."""
    total = Fraction(0)
    for e in H.edges:
        term = p[e]
        for f in H.edge_neighbors(e):
            term *= 1 - p[f]
        total += term
    return total


def sample_matching_report(H: Hypergraph, seed: int, p: dict[int, Fraction] | None = None) -> SampleResult:
    """Sample each edge with p_e and keep the sampled edges that meet no other sampled edge."""
    p = sampling_probabilities(H) if p is None else p
    L = frozenset(e for e in H.edges if p[e] > 0 and rng_for(seed, "sample", e).random() < p[e])
    M = frozenset(e for e in L if not any(f in L for f in H.edge_neighbors(e)))
    return SampleResult(check_matching(H, M), L, p, sum(p.values(), Fraction(0)) * 10 * max(H.rank, 1))


def sample_matching(H: Hypergraph, seed: int) -> frozenset[int]:
    return sample_matching_report(H, seed).matching


# ----------------------------------------------------------------------
# Luby on the line graph
# ----------------------------------------------------------------------
@dataclass
class LubyResult:
    matching: frozenset[int]
    rounds: int
    finished: bool


def luby_mis_line_graph(H: Hypergraph, seed: int, max_rounds: int | None = None) -> LubyResult:
    """Maximal independent set of the line graph, i.e. a maximal matching of H.

    Each round every live edge draws a fresh random priority; an edge whose
    priority beats all live neighbors joins, and it and its neighbors leave.
    With ``max_rounds`` the run may stop early with a non-maximal matching.
    """
    live = set(H.edges)
    neighbors = {e: H.edge_neighbors(e) for e in H.edges}
    chosen: set[int] = set()
    rounds = 0
    while live and (max_rounds is None or rounds < max_rounds):
        prio = {e: (rng_for(seed, "luby", rounds, e).random(), e) for e in live}
        winners = [e for e in live if all(prio[e] < prio[f] for f in neighbors[e] if f in live)]
        chosen.update(winners)
        for e in winners:
            live.discard(e)
            live.difference_update(neighbors[e])
        rounds += 1
    M = check_matching(H, chosen)
    return LubyResult(M, rounds, not live)


# ----------------------------------------------------------------------
# shattering
# ----------------------------------------------------------------------
def hmm_shattering(H: Hypergraph, seed: int, phase2_constant: int = 4) -> HmmRun:
    """Three phases: truncated Luby, per-component sampling, per-component deterministic finish.

    Phase one runs ceil(2 log2(r Delta)) + 1 Luby rounds.  Each connected
    component of the residual then gets phase2_constant * r * ceil(log2(r Delta))
    sampler iterations, and whatever is left is finished by the deterministic
    residual algorithm.  All randomness is keyed by edge id, so a component
    behaves the same whether or not the rest of H is present.
    """
    r = max(H.rank, 1)
    log_rd = max(1, math.ceil(math.log2(max(r * H.max_degree, 2))))
    phase1 = luby_mis_line_graph(H, derive_seed(seed, "phase1"), 2 * log_rd + 1)
    M = set(phase1.matching)
    run = HmmRun(frozenset(), phase="shatter", info={"phase1_rounds": phase1.rounds})
    R = residual(H, M)
    comps = connected_components(R)
    run.info["components"] = len(comps)
    run.info["component_sizes"] = sorted((len(c) for c in comps), reverse=True)
    iters = phase2_constant * r * log_rd
    shrink = []
    for comp in comps:
        C = R.subgraph(comp)
        sizes = [C.m]
        for it in range(iters):
            if not C.m:
                break
            got = sample_matching(C, derive_seed(seed, "phase2", it))
            M |= got
            C = residual(C, got)
            sizes.append(C.m)
        shrink.append(sizes)
        if C.m:
            finish = hmm_report(C, "det")
            M |= finish.matching
            run.stages.extend({**s, "phase": "III"} for s in finish.stages)
    run.info["phase2_sizes"] = shrink
    out = check_matching(H, M)
    assert is_maximal_matching(H, out)
    run.matching = out
    return run
