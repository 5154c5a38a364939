"""Derandomized direct rounding: degree reduction by potential functions.

The chain keeps an edge set E_i and a potential

    S_i = (1/2a)^(s-i) a(E_i) - b_i * sum_v (C(floor(D 2^-i), w) + C(d_i(v), w)) a(N(v) & E_i)

(with a = alpha, D = Delta).  Stage i first drops the edges at vertices of
degree at least D 2^(4-i) (which cannot lower S_i), then colors a large part
F of E_i with a defective edge coloring and keeps each edge of F with
probability one half.  The auxiliary potential S~ of that random choice is
multilinear across each color class, so ``derand_multilinear`` fixes all
choices with S~ >= E[S~].  After s stages the degree has dropped from D to
about 16 D 2^-s while the weight has dropped by a comparable factor only.

Potentials are 128-bit binary floats because alpha = 2^(1/s) is irrational;
every combinatorial count is an exact integer and weights stay rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from mpmath.ctx_mp import MPContext

from .coloring import GoodColoring, defective_color, good_coloring
from .core import Hypergraph, incidence_graph, total_weight
from .derand import MultilinearEstimator, derand_multilinear, elementary_symmetric, esym
from .derand import simple_matching_report

PRECISION = 128
REL_TOL = 2.0**-80

mp = MPContext()
mp.prec = PRECISION


class DegenerateParams(ValueError):
    """The parameter formulas give no stage (s < 1) at this degree."""

    def __init__(self, message: str, params: "RoundingParams | None" = None):
        super().__init__(message)
        self.params = params


class PreconditionDegree(ValueError):
    """A vertex exceeds the degree bound required at this stage."""


def to_mp(value):
    value = Fraction(value)
    return mp.mpf(value.numerator) / value.denominator


def close_or_greater(lhs, rhs, tol: float = REL_TOL) -> bool:
    """lhs >= rhs up to relative tolerance ``tol``."""
    scale = max(abs(lhs), abs(rhs), mp.mpf(1) * 2**-200)
    return lhs - rhs >= -tol * scale


# ----------------------------------------------------------------------
# parameters
# ----------------------------------------------------------------------
@dataclass
class RoundingParams:
    profile: str
    Delta: int
    r: int
    w: int
    s: int
    k: int
    alpha: object = None
    x: object = None
    beta: object = None
    k_scale: float | None = None
    raw_s: int | None = None

    def __post_init__(self):
        self.alpha = mp.mpf(2) ** (mp.mpf(1) / self.s)
        self.x = mp.mpf(self.Delta) / mp.mpf(2) ** self.s
        self.beta = 16 * self.r * (mp.e * self.x / self.w) ** self.w

    def b(self, i: int):
        """b_i = 2^(-(s-i)(w+1)) alpha^(s-i) / beta."""
        return mp.mpf(2) ** (-(self.s - i) * (self.w + 1)) * self.alpha ** (self.s - i) / self.beta

    def lead(self, i: int):
        """(1/(2 alpha))^(s-i), the weight coefficient of S_i."""
        return (1 / (2 * self.alpha)) ** (self.s - i)

    def degree_cap(self, i: int) -> Fraction:
        """Vertices at or above Delta 2^(4-i) are discarded before stage i."""
        return Fraction(self.Delta * 16, 2**i)

    def base_count(self, i: int) -> int:
        """C(floor(Delta 2^-i), w)."""
        return math.comb(self.Delta >> i, self.w)

    @property
    def delta(self):
        """Weight a defective coloring may drop per stage."""
        return 1 - 1 / self.alpha

    def recurrence_gap(self, i: int):
        """alpha 2^(-w-1) b_(i+1) - b_i (zero up to rounding)."""
        return self.alpha * mp.mpf(2) ** (-self.w - 1) * self.b(i + 1) - self.b(i)

    def discard_margin(self, i: int):
        """b_i C(floor(Delta 2^(4-i)), w) / (1/(2 alpha))^(s-i); at least 1 makes discarding safe."""
        cap = (self.Delta * 16) >> i
        return self.b(i) * math.comb(cap, self.w) / self.lead(i)


SCALED_DEFAULTS = {"w": 2, "s": 3, "k_scale": 0.16}


def compute_params(
    Delta: int,
    r: int,
    profile: str = "paper",
    w: int | None = None,
    s: int | None = None,
    k_scale: float | None = None,
    allow_degenerate: bool = False,
    k: int | None = None,
) -> RoundingParams:
    """Evaluate the parameter block.

    Full-constant profile ("paper"): w = ceil(2 log2(r log2 Delta)), s = ceil(log2(Delta /
    (w^4 log2^10(r Delta)))) and k = ceil(2048 w^2 log2 Delta).  When s < 1 a
    DegenerateParams is raised, unless ``allow_degenerate`` clamps s to 1
    (useful to test the identities on the formulas alone).

    Scaled profile: w, s and a color-count factor are chosen by the caller
    (defaults: w = 2, s = min(3, floor(log2 Delta)), k = ceil(0.16 w^2 log2 Delta),
    which is 4 colors for 32 <= Delta <= 64);
    the other quantities follow the same formulas.
    """
    if Delta < 2 or r < 1:
        raise ValueError("need Delta >= 2 and r >= 1")
    r_eff = max(r, 2)
    log_delta = mp.log(Delta, 2)
    if profile == "paper":
        w = int(mp.ceil(2 * mp.log(r_eff * log_delta, 2)))
        raw = int(mp.ceil(mp.log(Delta / (mp.mpf(w) ** 4 * mp.log(r_eff * Delta, 2) ** 10), 2)))
        k = int(mp.ceil(2048 * w * w * log_delta))
        if raw < 1 and not allow_degenerate:
            raise DegenerateParams(f"s = {raw} < 1 at Delta = {Delta}, r = {r}")
        return RoundingParams("paper", Delta, r_eff, w, max(1, raw), k, raw_s=raw)
    if profile != "scaled":
        raise ValueError(f"unknown profile {profile!r}")
    w = SCALED_DEFAULTS["w"] if w is None else w
    if s is None:
        s = min(SCALED_DEFAULTS["s"], int(math.log2(Delta)))
    k_scale = SCALED_DEFAULTS["k_scale"] if k_scale is None else k_scale
    if s < 1 or w < 1 or Delta < 2**s:
        raise DegenerateParams(f"scaled profile needs s >= 1 and Delta >= 2^s (s = {s})")
    if k is None:
        k = max(w + 1, math.ceil(k_scale * w * w * float(log_delta)))
    return RoundingParams("scaled", Delta, r_eff, w, s, k, k_scale=k_scale, raw_s=s)


# ----------------------------------------------------------------------
# potentials and discarding
# ----------------------------------------------------------------------
def _degrees(H: Hypergraph, edges) -> list[int]:
    deg = [0] * H.n
    for e in edges:
        for v in H.edges[e]:
            deg[v] += 1
    return deg


def penalty_sum(H: Hypergraph, edges, i: int, params: RoundingParams, a) -> Fraction:
    """sum_v (C(floor(Delta 2^-i), w) + C(d_i(v), w)) a(N(v) & E_i), exactly."""
    edges = set(edges)
    deg = _degrees(H, edges)
    base = params.base_count(i)
    total = Fraction(0)
    for v in H.vertices:
        if deg[v]:
            here = total_weight(a, (e for e in H.incident(v) if e in edges))
            total += (base + math.comb(deg[v], params.w)) * here
    return total


def potential_S(H: Hypergraph, edges, i: int, params: RoundingParams, a):
    edges = set(edges)
    return params.lead(i) * to_mp(total_weight(a, edges)) - params.b(i) * to_mp(
        penalty_sum(H, edges, i, params, a)
    )


def discard_high_degree(H: Hypergraph, edges, i: int, params: RoundingParams, a):
    """Drop N(v) for every v with d_i(v) >= Delta 2^(4-i).

    Returns (kept edges, S before, S after).  When the discard margin is at
    least one the potential cannot decrease, and that is asserted.
    """
    edges = set(edges)
    deg = _degrees(H, edges)
    cap = params.degree_cap(i)
    heavy = [v for v in H.vertices if deg[v] >= cap]
    if not heavy:
        return frozenset(edges), None, None
    drop = {e for v in heavy for e in H.incident(v) if e in edges}
    kept = frozenset(edges - drop)
    before = potential_S(H, edges, i, params, a)
    after = potential_S(H, kept, i, params, a)
    if params.discard_margin(i) >= 1:
        assert close_or_greater(after, before), "discarding lowered the potential"
    return kept, before, after


# ----------------------------------------------------------------------
# the auxiliary potential of one stage
# ----------------------------------------------------------------------
class AuxEstimator(MultilinearEstimator):
    """S~ over the colored edges F with a binary keep-variable per edge.

    S~ = c1 a(E') - c2 sum_v sum_{e in N(v) & E'} (R_{v,e} + B) a(e), where
    c1 = (1/2a)^(s-i-1), c2 = alpha b_(i+1), B = C(floor(Delta 2^-(i+1)), w)
    and R_{v,e} counts the w-subsets of N(v) & E' whose colors are pairwise
    distinct and different from chi(e).  R_{v,e} is the w-th elementary
    symmetric polynomial of the per-color counts at v with chi(e) left out, so
    S~ is multilinear within every color class.

    State is kept in integers: each edge value is doubled (0, 1 = undecided,
    2) and weights are multiplied by a common denominator.
    """

    def __init__(self, H: Hypergraph, chi: Mapping[int, int], a, params: RoundingParams, i: int):
        self.H = H
        self.chi = dict(chi)
        self.params = params
        self.i = i
        self.w = params.w
        self.c1 = params.lead(i + 1)
        self.c2 = params.alpha * params.b(i + 1)
        self.B = params.base_count(i + 1)
        self.den = math.lcm(*(Fraction(a[e]).denominator for e in self.chi)) if self.chi else 1
        self.wt = {e: int(Fraction(a[e]) * self.den) for e in self.chi}
        self.twice = {e: 1 for e in self.chi}
        self.cnt: list[dict[int, int]] = [dict() for _ in H.vertices]
        self.mass: list[dict[int, int]] = [dict() for _ in H.vertices]
        for e, c in self.chi.items():
            for v in H.edges[e]:
                self.cnt[v][c] = self.cnt[v].get(c, 0) + 1
                self.mass[v][c] = self.mass[v].get(c, 0) + self.wt[e]

    def variables(self) -> list[int]:
        return sorted(self.chi)

    # -- integer kernels -------------------------------------------------
    @staticmethod
    def _divide(p: list[int], x: int) -> list[int]:
        """Coefficients of p(z) / (1 + x z), truncated to len(p)."""
        q = [0] * len(p)
        prev = 0
        for j, coef in enumerate(p):
            prev = coef - x * prev
            q[j] = prev
        return q

    def _vertex_penalty(self, v: int) -> int:
        """2^(w+1) * den * sum_{e in N(v)} P_e a(e) (B + E[R_{v,e}])."""
        p = elementary_symmetric(list(self.cnt[v].values()), self.w)
        total = 0
        for c, m in self.mass[v].items():
            if m:
                q = self._divide(p, self.cnt[v][c])
                total += m * (self.B * 2**self.w + q[self.w])
        return total

    def _derivative_numerator(self, g: int) -> int:
        cg = self.chi[g]
        total = 0
        for v in self.H.edges[g]:
            vals = [x for c, x in self.cnt[v].items() if c != cg]
            p = elementary_symmetric(vals, self.w)
            total += self.wt[g] * (self.B * 2**self.w + p[self.w])
            if self.w >= 1:
                for c, m in self.mass[v].items():
                    if c != cg and m:
                        q = self._divide(p[: self.w], self.cnt[v][c])
                        total += m * q[self.w - 1]
        return total

    # -- estimator interface ---------------------------------------------
    def expectation(self):
        first = sum(self.wt[e] * self.twice[e] for e in self.chi)
        pen = sum(self._vertex_penalty(v) for v in self.H.vertices if self.cnt[v])
        return self.c1 * to_mp(Fraction(first, 2 * self.den)) - self.c2 * to_mp(
            Fraction(pen, self.den * 2 ** (self.w + 1))
        )

    def expected_derivative(self, g: int):
        num = self._derivative_numerator(g)
        return self.c1 * to_mp(Fraction(self.wt[g], self.den)) - self.c2 * to_mp(
            Fraction(num, self.den * 2**self.w)
        )

    def commit(self, g: int, value: int) -> None:
        new = 2 * value
        delta = new - self.twice[g]
        c = self.chi[g]
        for v in self.H.edges[g]:
            self.cnt[v][c] += delta
            self.mass[v][c] += delta * self.wt[g]
        self.twice[g] = new

    def exact_parts(self, point: Mapping[int, Fraction]) -> tuple[Fraction, Fraction]:
        """(a(E') part, penalty part) of S~ at a point of [0,1]^F, exactly."""
        first = sum((Fraction(self.wt[e], self.den) * point[e] for e in self.chi), Fraction(0))
        pen = Fraction(0)
        for v in self.H.vertices:
            sums: dict[int, Fraction] = {}
            for e in self.H.incident(v):
                if e in self.chi:
                    sums[self.chi[e]] = sums.get(self.chi[e], Fraction(0)) + point[e]
            for e in self.H.incident(v):
                if e in self.chi:
                    others = [x for c, x in sums.items() if c != self.chi[e]]
                    r_ve = esym(others, self.w)
                    pen += Fraction(self.wt[e], self.den) * point[e] * (r_ve + self.B)
        return first, pen

    def evaluate(self, point: Mapping[int, Fraction]):
        first, pen = self.exact_parts(point)
        return self.c1 * to_mp(first) - self.c2 * to_mp(pen)

    def dependency(self, g: int) -> set[int]:
        out = set()
        for v in self.H.edges[g]:
            out.update(e for e in self.H.incident(v) if e in self.chi)
        out.discard(g)
        return out


def rainbow_count(H: Hypergraph, chi: Mapping[int, int], kept, v: int, e: int, w: int) -> int:
    """R_{v,e} by brute force over w-subsets (for cross-checks on small cases)."""
    from itertools import combinations

    pool = [f for f in H.incident(v) if f in kept and f in chi and f != e]
    total = 0
    for W in combinations(pool, w):
        colors = [chi[f] for f in W]
        if len(set(colors)) == w and chi[e] not in colors:
            total += 1
    return total


# ----------------------------------------------------------------------
# stages and the full chain
# ----------------------------------------------------------------------
@dataclass
class ChainRow:
    stage: int
    S_i: object
    S_tilde: object
    E_S_tilde: object
    S_next: object
    max_degree: int
    next_max_degree: int
    colored: int
    kept: int

    def holds(self) -> bool:
        return close_or_greater(self.S_next, self.S_i)

    def full_chain_holds(self) -> bool:
        return (
            close_or_greater(self.S_next, self.S_tilde)
            and close_or_greater(self.S_tilde, self.E_S_tilde)
            and close_or_greater(self.E_S_tilde, self.S_i)
        )


def chain_csv(rows: list[ChainRow]) -> str:
    out = ["i,S_i,S_tilde,E_S_tilde,S_next,max_degree,next_max_degree,colored,kept"]
    for row in rows:
        out.append(
            ",".join(
                [str(row.stage)]
                + [mp.nstr(x, 20) for x in (row.S_i, row.S_tilde, row.E_S_tilde, row.S_next)]
                + [str(row.max_degree), str(row.next_max_degree), str(row.colored), str(row.kept)]
            )
        )
    return "\n".join(out) + "\n"


def _actual_sub(H: Hypergraph, edges) -> Hypergraph:
    sub = H.subgraph(edges)
    d = max(sub.actual_max_degree(), 1)
    return Hypergraph(H.n, sub.edges, rank=H.rank, max_degree=d)


def stage_split(
    H: Hypergraph,
    edges,
    i: int,
    params: RoundingParams,
    a: Mapping[int, Fraction],
    coloring: GoodColoring,
) -> tuple[frozenset[int], ChainRow]:
    """One stage: defective coloring, then derandomized halving of the colored edges."""
    edges = frozenset(edges)
    deg = _degrees(H, edges)
    cap = params.degree_cap(i)
    if any(d > cap for d in deg):
        raise PreconditionDegree(f"stage {i} needs every degree at most {cap}")
    S_i = potential_S(H, edges, i, params, a)
    zero = mp.mpf(0)
    if not edges:
        row = ChainRow(i, S_i, zero, zero, potential_S(H, edges, i + 1, params, a), 0, 0, 0, 0)
        return edges, row
    sub = _actual_sub(H, edges)
    ec = defective_color(sub, a, Fraction(float(params.delta)), params.k, coloring, enforce=False)
    est = AuxEstimator(H, ec.colors, a, params, i)
    res = derand_multilinear(None, ec.colors, est, sense="max", audit=False)
    kept = frozenset(e for e, x in res.assignment.items() if x == 1)
    s_next = potential_S(H, kept, i + 1, params, a)
    if params.profile == "paper":
        assert close_or_greater(res.realized, res.expected), "S~ fell below its expectation"
    row = ChainRow(
        i,
        S_i,
        res.realized,
        res.expected,
        s_next,
        max(deg),
        max(_degrees(H, kept), default=0),
        len(ec.colors),
        len(kept),
    )
    return kept, row


@dataclass
class ReduceResult:
    edges: frozenset[int]
    params: RoundingParams
    rows: list[ChainRow] = field(default_factory=list)
    S_0: object = None
    S_s: object = None
    discards: int = 0

    def ratio(self, H: Hypergraph, a) -> float:
        """a(E_s) Delta / (x a(E))."""
        total = total_weight(a, H.edges)
        if total == 0:
            return float("nan")
        kept = to_mp(total_weight(a, self.edges))
        return float(kept * self.params.Delta / (self.params.x * to_mp(total)))

    def max_degree(self, H: Hypergraph) -> int:
        return max(_degrees(H, self.edges), default=0)


def degree_reduce(
    H: Hypergraph,
    a: Mapping[int, Fraction],
    coloring: GoodColoring,
    params: RoundingParams,
) -> ReduceResult:
    """s stages of discard + split; the final discard leaves degree below 16 x."""
    edges = frozenset(H.edges)
    out = ReduceResult(edges, params, S_0=potential_S(H, edges, 0, params, a))
    for i in range(params.s):
        edges, before, _ = discard_high_degree(H, edges, i, params, a)
        out.discards += before is not None
        edges, row = stage_split(H, edges, i, params, a, coloring)
        out.rows.append(row)
    edges, before, _ = discard_high_degree(H, edges, params.s, params, a)
    out.discards += before is not None
    out.edges = edges
    out.S_s = potential_S(H, edges, params.s, params, a)
    assert out.max_degree(H) < params.degree_cap(params.s)
    return out


@dataclass
class DirectRoundResult:
    matching: frozenset[int]
    path: str
    reductions: list[ReduceResult] = field(default_factory=list)
    floor: Fraction = Fraction(0)


def direct_round_report(
    H: Hypergraph,
    a: Mapping[int, Fraction],
    coloring: GoodColoring | None = None,
    profile: str = "paper",
    w: int | None = None,
    s: int | None = None,
    k_scale: float | None = None,
) -> DirectRoundResult:
    """Matching with a(M) >= 0.09 a(E)/(r Delta).

    Runs degree reduction twice and then the basic sampling derandomizer on
    the low-degree remainder.  If the parameters are degenerate at this degree
    the basic derandomizer runs on H directly; if the reduced instance falls
    short of the floor (possible with scaled constants) it also falls back to
    H, so the floor holds unconditionally.
    """
    coloring = coloring if coloring is not None else good_coloring(H)
    floor = Fraction(9, 100) * total_weight(a, H.edges) / (H.rank * H.max_degree)
    reductions: list[ReduceResult] = []
    current = H
    edges = frozenset(H.edges)
    path = "chain"
    for _ in range(2):
        try:
            params = compute_params(max(current.max_degree, 2), H.rank, profile, w, s, k_scale)
        except DegenerateParams:
            break
        res = degree_reduce(current, a, coloring, params)
        reductions.append(res)
        edges = res.edges
        current = _actual_sub(H, edges)
    if not reductions:
        path = "direct"
    sm = simple_matching_report(current, a, coloring.node_colors(incidence_graph(current)))
    M = sm.matching
    if total_weight(a, M) < floor:
        path = "fallback"
        M = simple_matching_report(H, a, coloring.node_colors(incidence_graph(H))).matching
    assert total_weight(a, M) >= floor
    return DirectRoundResult(M, path, reductions, floor)


def direct_round(H: Hypergraph, a, coloring: GoodColoring | None = None, profile: str = "paper",
                 **scaled) -> frozenset[int]:
    return direct_round_report(H, a, coloring, profile, **scaled).matching
