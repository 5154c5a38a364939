"""Fractional matchings: packing LP, quantization, weight classes, and HMWM.

The deterministic pipeline is: split the edges into weight classes
[(rq)^i, (rq)^(i+1)), solve each class's LP to within a factor one half,
round the values down to multiples of 1/(10 Delta), combine the classes with
a guard against much heavier neighbors, replicate edges q*h(e) times and
round the replicate hypergraph to an integral matching.

The LP solver is a multiplicative-weights packing method.  It stops only once
its primal value is certified against an exact dual bound, so the (1 - eps)
guarantee is checked in rational arithmetic on every call.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .coloring import GoodColoring, good_coloring, lift_coloring
from .core import (
    FractionalMatching,
    Hypergraph,
    Replicate,
    check_matching,
    derive_seed,
    replicate_with_parents,
    rng_for,
    total_weight,
)
from .rounding import direct_round_report


class EmptyWeights(UserWarning):
    """Every edge weight is zero; the zero fractional matching is returned."""


class ClassMismatch(ValueError):
    """A per-class fractional matching does not fit its weight class."""


class LPNotConverged(RuntimeError):
    """The packing solver hit its round cap before certifying its answer."""


# ----------------------------------------------------------------------
# the packing LP
# ----------------------------------------------------------------------
@dataclass
class PackingLP:
    """Variables x(e) = a(e) h(e); row v: sum_{e ni v} (W_max / a(e)) x(e) <= W_max."""

    W_max: Fraction
    W_min: Fraction
    entries: dict[tuple[int, int], Fraction]
    gamma_p: Fraction
    gamma_d: Fraction

    @property
    def W(self) -> Fraction:
        return self.W_max / self.W_min

    @classmethod
    def build(cls, H: Hypergraph, a: Mapping[int, Fraction]) -> "PackingLP":
        pos = [e for e in H.edges if a[e] > 0]
        if not pos:
            raise ValueError("no positive weights")
        W_max = max(Fraction(a[e]) for e in pos)
        W_min = min(Fraction(a[e]) for e in pos)
        entries = {(v, e): W_max / Fraction(a[e]) for e in pos for v in H.edges[e]}
        row: dict[int, Fraction] = {}
        for (v, _e), x in entries.items():
            row[v] = row.get(v, Fraction(0)) + x
        gamma_p = max(row.values())
        gamma_d = max(len(H.edges[e]) * W_max / Fraction(a[e]) for e in pos)
        return cls(W_max, W_min, entries, gamma_p, gamma_d)

    def to_matching(self, x: Mapping[int, Fraction], a) -> dict[int, Fraction]:
        return {e: Fraction(v) / Fraction(a[e]) for e, v in x.items()}


def dual_bound(H: Hypergraph, a: Mapping[int, Fraction], y: Mapping[int, Fraction], edges) -> Fraction:
    """sum_v y_v / min_e (sum_{v in e} y_v / a(e)); an upper bound on a*(H) for any y >= 0."""
    worst = None
    for e in edges:
        cover = sum((y.get(v, Fraction(0)) for v in H.edges[e]), Fraction(0)) / Fraction(a[e])
        worst = cover if worst is None or cover < worst else worst
    if not worst:
        return Fraction(10**30)
    return sum(y.values(), Fraction(0)) / worst


GRID_BITS = 30


def lp_solve(
    H: Hypergraph,
    a: Mapping[int, Fraction],
    eps=Fraction(1, 2),
    max_rounds: int = 200000,
) -> FractionalMatching:
    """Fractional matching with a(h) >= (1 - eps) a*(H), certified exactly.

    Every round, each edge compares its dual cost sum_{v in e} y_v / a(e) to
    the global minimum; edges within a (1 + eps/4) factor grow by
    min_{v in e} 1/(number of growing edges at v), and each y_v is multiplied
    by exp(eps/4 * load increase at v).  The running primal is the growth
    vector divided by its maximum load.  The loop stops when the best primal
    value reaches (1 - eps) times the best dual bound, rechecked in exact
    rationals after rounding the values down to a 2^-30 grid.
    """
    eps = Fraction(eps)
    pos = [e for e in H.edges if a[e] > 0]
    zero = {e: Fraction(0) for e in H.edges}
    if not pos:
        if H.m:
            warnings.warn("all edge weights are zero", EmptyWeights, stacklevel=2)
        return FractionalMatching(zero, 1, {"rounds": 0})
    verts = sorted({v for e in pos for v in H.edges[e]})
    vidx = {v: i for i, v in enumerate(verts)}
    inc_e = np.array([j for j, e in enumerate(pos) for _ in H.edges[e]], dtype=np.int64)
    inc_v = np.array([vidx[v] for e in pos for v in H.edges[e]], dtype=np.int64)
    m, nv = len(pos), len(verts)
    wts = np.array([float(a[e]) for e in pos])
    wts = wts / wts.max()
    y = np.ones(nv)
    x = np.zeros(m)
    step_eps = float(eps) / 4
    target = 1 - float(eps)
    best_primal, best_x = 0.0, np.zeros(m)
    best_dual, best_y = math.inf, y.copy()
    rounds = 0
    certified = None
    while rounds < max_rounds:
        rounds += 1
        cover = np.bincount(inc_e, weights=y[inc_v], minlength=m) / wts
        low = cover.min()
        dual = y.sum() / low
        if dual < best_dual:
            best_dual, best_y = dual, y.copy()
        active = cover <= (1 + step_eps) * low
        count = np.bincount(inc_v, weights=active[inc_e].astype(float), minlength=nv)
        share = 1.0 / np.maximum(count, 1.0)
        step = np.full(m, np.inf)
        np.minimum.at(step, inc_e, share[inc_v])
        step[~active] = 0.0
        x += step
        grow = np.bincount(inc_v, weights=step[inc_e], minlength=nv)
        y = y * np.exp(step_eps * grow)
        y /= y.max()
        load = np.bincount(inc_v, weights=x[inc_e], minlength=nv)
        primal = float(wts @ x) / load.max()
        if primal > best_primal:
            best_primal, best_x = primal, x / load.max()
        if best_primal >= target * best_dual:
            certified = _certify(H, a, pos, verts, best_x, best_y, eps)
            if certified is not None:
                break
    if certified is None:
        raise LPNotConverged(f"no certificate after {rounds} rounds")
    values, value, bound = certified
    out = dict(zero)
    out.update(values)
    h = FractionalMatching(out, FractionalMatching.common_denominator(out),
                           {"rounds": rounds, "value": value, "dual_bound": bound})
    return h.check(H)


def _certify(H, a, pos, verts, xs, ys, eps):
    scale = 2**GRID_BITS
    values = {e: Fraction(int(math.floor(float(v) * scale)), scale) for e, v in zip(pos, xs)}
    load: dict[int, Fraction] = {}
    for e, v in values.items():
        for u in H.edges[e]:
            load[u] = load.get(u, Fraction(0)) + v
    top = max(load.values(), default=Fraction(0))
    if top > 1:
        values = {e: v / top for e, v in values.items()}
    value = sum((Fraction(a[e]) * v for e, v in values.items()), Fraction(0))
    y = {v: Fraction(float(yv)) for v, yv in zip(verts, ys)}
    bound = dual_bound(H, a, y, pos)
    if value >= (1 - eps) * bound:
        return values, value, bound
    return None


# ----------------------------------------------------------------------
# quantization
# ----------------------------------------------------------------------
def quantize_det(H: Hypergraph, a, hp: FractionalMatching, max_degree: int | None = None) -> FractionalMatching:
    """Round every value down to a multiple of 1/(10 Delta)."""
    q = 10 * (max_degree if max_degree is not None else H.max_degree)
    values = {e: Fraction(math.floor(hp[e] * q), q) for e in H.edges}
    return FractionalMatching(values, q, {"mode": "det"}).check(H)


def rand_denominator(r: int) -> int:
    return math.ceil(20 * math.log2(max(r, 2)))


def poisson_sample(mean: float, u: float) -> int:
    """Inverse-transform Poisson draw from a single uniform u in [0, 1)."""
    k = 0
    p = math.exp(-mean)
    cdf = p
    while u >= cdf and p > 0:
        k += 1
        p *= mean / k
        cdf += p
    return k


def quantize_rand(H: Hypergraph, a, hp: FractionalMatching, seed: int, rank: int | None = None) -> FractionalMatching:
    """Poisson(10 h'(e) log2 r) copies per edge; overloaded vertices drop their edges.

    A vertex with more than t = 20 log2 r edge copies around it discards all of
    them.  Surviving copies are counted with multiplicity, h(e) = (copies of e
    left) / ceil(20 log2 r); at most t <= q copies survive at any vertex, so h
    is a fractional matching.
    """
    r = max(rank if rank is not None else H.rank, 2)
    lr = math.log2(r)
    t = 20 * lr
    copies = {}
    for e in H.edges:
        mean = 10 * float(hp[e]) * lr
        copies[e] = poisson_sample(mean, rng_for(seed, "poisson", e).random()) if mean > 0 else 0
    load: dict[int, int] = {}
    for e, c in copies.items():
        for v in H.edges[e]:
            load[v] = load.get(v, 0) + c
    q = rand_denominator(r)
    values = {}
    for e, c in copies.items():
        keep = c > 0 and all(load[v] <= t for v in H.edges[e])
        values[e] = Fraction(c, q) if keep else Fraction(0)
    return FractionalMatching(values, q, {"mode": "rand", "copies": sum(copies.values())}).check(H)


# ----------------------------------------------------------------------
# weight classes
# ----------------------------------------------------------------------
def class_index(weight: Fraction, base: int) -> int:
    """The integer i with base^i <= weight < base^(i+1)."""
    weight = Fraction(weight)
    if weight <= 0:
        raise ValueError("weights must be positive")
    approx = math.log(weight.numerator) - math.log(weight.denominator)
    i = math.floor(approx / math.log(base))
    while Fraction(base) ** i > weight:
        i -= 1
    while Fraction(base) ** (i + 1) <= weight:
        i += 1
    return i


def weight_classes(H: Hypergraph, a, q: int) -> dict[int, list[int]]:
    base = max(H.rank, 2) * q
    out: dict[int, list[int]] = {}
    for e in H.edges:
        if a[e] > 0:
            out.setdefault(class_index(a[e], base), []).append(e)
    return out


def combine_weight_classes(
    H: Hypergraph, a, q: int, per_class: Mapping[int, FractionalMatching]
) -> FractionalMatching:
    """h(e) = h_i(e)/3 for e in class i, unless e meets a positive edge of a class j >= i + 3.

    The result is a fractional matching with denominator 3q and
    a(h) >= sum_i a(h_i) / 6; both are asserted exactly.
    """
    classes = weight_classes(H, a, q)
    cls_of = {e: i for i, es in classes.items() for e in es}
    for i, hi in per_class.items():
        for e in hi.support():
            if cls_of.get(e) != i:
                raise ClassMismatch(f"edge {e} is not in weight class {i}")
            if (hi[e] * q).denominator != 1:
                raise ClassMismatch(f"class {i} is not {q}-proper at edge {e}")
    top: dict[int, int] = {}
    for i, hi in per_class.items():
        for e in hi.support():
            for v in H.edges[e]:
                top[v] = max(top.get(v, i), i)
    values = {e: Fraction(0) for e in H.edges}
    for i, hi in per_class.items():
        for e in hi.support():
            if all(top[v] < i + 3 for v in H.edges[e]):
                values[e] = hi[e] / 3
    h = FractionalMatching(values, 3 * q, {"classes": sorted(per_class)}).check(H)
    total = sum((hi.weight(a) for hi in per_class.values()), Fraction(0))
    assert h.weight(a) >= total / 6, "class combination lost more than a factor 6"
    return h


# ----------------------------------------------------------------------
# Omega(1)-approximate proper fractional matchings
# ----------------------------------------------------------------------
def class_lps(H: Hypergraph, a, q: int) -> dict[int, tuple[Hypergraph, FractionalMatching]]:
    """Per-class subhypergraph and a half-optimal LP solution for it."""
    out = {}
    for i, es in sorted(weight_classes(H, a, q).items()):
        sub = H.subgraph(es)
        out[i] = (sub, lp_solve(sub, a, Fraction(1, 2)))
    return out


def fractional_matching(
    H: Hypergraph, a, mode: str = "det", seed: int = 0, lps=None
) -> FractionalMatching:
    """O(Delta)-proper (det) or O(log r)-proper (rand) fractional matching with a(h) = Omega(a*)."""
    if mode == "det":
        q = 10 * H.max_degree
    elif mode == "rand":
        q = rand_denominator(H.rank)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    lps = lps if lps is not None else class_lps(H, a, q)
    per_class = {}
    for i, (sub, hp) in lps.items():
        if mode == "det":
            hi = quantize_det(sub, a, hp, H.max_degree)
        else:
            hi = quantize_rand(sub, a, hp, derive_seed(seed, "class", i), H.rank)
        per_class[i] = FractionalMatching({e: hi[e] for e in sub.edges}, q)
    if not per_class:
        return FractionalMatching({e: Fraction(0) for e in H.edges}, 3 * q, {"classes": []})
    return combine_weight_classes(H, a, q, per_class)


# ----------------------------------------------------------------------
# integral matchings
# ----------------------------------------------------------------------
@dataclass
class HMWMResult:
    matching: frozenset[int]
    fractional: FractionalMatching | None
    replicate_edges: int
    path: str
    info: dict = field(default_factory=dict)


def _with_actual_degree(G: Hypergraph) -> Hypergraph:
    return Hypergraph(G.n, G.edges, rank=G.rank, max_degree=max(G.actual_max_degree(), 1))


def hmwm_det_report(
    H: Hypergraph,
    a,
    coloring: GoodColoring | None = None,
    profile: str = "paper",
    **scaled,
) -> HMWMResult:
    """Matching with a(M) = Omega(a*(H)/r) and a(M) >= 0.09 a(h)/r always."""
    coloring = coloring if coloring is not None else good_coloring(H)
    h = fractional_matching(H, a, "det")
    if not h.support():
        return HMWMResult(frozenset(), h, 0, "empty")
    rep = replicate_with_parents(H, h)
    G = _with_actual_degree(rep.hypergraph)
    lifted = lift_coloring(coloring, rep)
    res = direct_round_report(G, rep.lift_weights(a), lifted, profile, **scaled)
    M = check_matching(H, rep.project(res.matching))
    floor = Fraction(9, 100) * h.weight(a) / H.rank
    assert total_weight(a, M) >= floor, "matching fell below the 0.09 a(h)/r floor"
    return HMWMResult(M, h, G.m, res.path, {"floor": floor})


def hmwm_det(H: Hypergraph, a, coloring: GoodColoring | None = None, **kw) -> frozenset[int]:
    return hmwm_det_report(H, a, coloring, **kw).matching


def average_fractional(hs: list[FractionalMatching], edges) -> FractionalMatching:
    t = len(hs)
    values = {e: sum((h[e] for h in hs), Fraction(0)) / t for e in edges}
    q = math.lcm(*(h.q for h in hs)) * t
    return FractionalMatching(values, q, {"draws": t})


def hmwm_rand_report(
    H: Hypergraph, a, delta=Fraction(1, 5), seed: int = 0, c: float = 2.0
) -> HMWMResult:
    """Randomized HMWM with failure probability about delta.

    t = ceil(c log2(1/delta)) independent randomized fractional matchings are
    averaged and the edges replicated; each copy then draws one of
    ceil(4 Delta' r / delta) colors, copies meeting a same-colored copy are
    dropped, and the deterministic algorithm runs on what remains with a
    fresh good coloring.
    """
    delta = Fraction(delta)
    if not 0 < delta < Fraction(1, 2) + Fraction(1, 10**9):
        raise ValueError("delta must lie in (0, 1/2)")
    t = max(1, math.ceil(c * math.log2(1 / float(delta))))
    q = rand_denominator(H.rank)
    lps = class_lps(H, a, q)
    hs = [fractional_matching(H, a, "rand", derive_seed(seed, "draw", j), lps) for j in range(t)]
    h = average_fractional(hs, H.edges)
    if not h.support():
        return HMWMResult(frozenset(), h, 0, "empty", {"t": t})
    rep = replicate_with_parents(H, h)
    Hp = rep.hypergraph
    d_prime = max(Hp.actual_max_degree(), 1)
    colors = math.ceil(4 * d_prime * max(H.rank, 1) / delta)
    color = {cid: rng_for(seed, "sparsify", cid).randrange(colors) for cid in Hp.edges}
    seen: dict[tuple[int, int], int] = {}
    for cid, vs in Hp.edges.items():
        for v in vs:
            seen[(v, color[cid])] = seen.get((v, color[cid]), 0) + 1
    keep = [cid for cid, vs in Hp.edges.items() if all(seen[(v, color[cid])] == 1 for v in vs)]
    Hpp = _with_actual_degree(Hp.subgraph(keep))
    a_pp = rep.lift_weights(a)
    inner = hmwm_det_report(Hpp, a_pp, good_coloring(Hpp))
    M = check_matching(H, rep.project(inner.matching))
    return HMWMResult(M, h, Hpp.m, inner.path, {"t": t, "colors": colors, "dropped": Hp.m - len(keep)})


def hmwm_rand(H: Hypergraph, a, delta=Fraction(1, 5), seed: int = 0, **kw) -> frozenset[int]:
    return hmwm_rand_report(H, a, delta, seed, **kw).matching
