"""Method of conditional expectations, in two flavours.

``derand_proper`` needs a proper coloring of G^2.  Color classes are processed
in increasing order; every node of the current class fixes its random value to
optimize the conditional expectation of its own flag plus its neighbors'
flags, with all earlier classes already fixed.  Nodes of one class are at
distance at least three, so their choices do not interact.

``derand_multilinear`` accepts any coloring provided the potential is
multilinear across each class: the second derivative with respect to two
same-colored variables vanishes (condition A1) and each first derivative only
reads values around its variable (condition A2).  A whole class then commits
at once, each node choosing the sign of its expected derivative.

Both engines use binary or general finite value spaces with exact rational
probabilities, and the estimators here keep exact rational arithmetic.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .core import Graph, Hypergraph, IncidenceGraph, incidence_graph, total_weight


class NotProper(ValueError):
    """The supplied coloring is not proper on the required graph."""


class A1Violation(ValueError):
    """Two same-colored variables interact in the potential."""


class A2Violation(ValueError):
    """A derivative depends on values outside the variable's neighborhood."""


# ----------------------------------------------------------------------
# value spaces
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class ValueSpace:
    support: tuple
    probs: tuple

    def __post_init__(self):
        if len(self.support) != len(self.probs) or not self.support:
            raise ValueError("support and probabilities must be nonempty and aligned")
        if any(p < 0 for p in self.probs) or sum(self.probs) != 1:
            raise ValueError("probabilities must be nonnegative and sum to 1")

    def items(self):
        return zip(self.support, self.probs)


def bernoulli(p=Fraction(1, 2)) -> ValueSpace:
    p = Fraction(p)
    return ValueSpace((0, 1), (1 - p, p))


def sample(space: ValueSpace, rng: random.Random):
    """Draw one value (used for randomized reference runs)."""
    x = Fraction(rng.random())
    acc = Fraction(0)
    for value, p in space.items():
        acc += p
        if x < acc:
            return value
    return space.support[-1]


def square_coloring_is_proper(G: Graph, coloring: Mapping[int, int]) -> bool:
    """Proper on G^2 iff every closed neighborhood N[w] is rainbow."""
    for w in G.nodes:
        seen = {coloring[w]}
        for u in G.neighbors(w):
            c = coloring[u]
            if c in seen:
                return False
            seen.add(c)
    return True


def color_classes(nodes: Iterable[int], coloring: Mapping[int, int]) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for v in nodes:
        groups.setdefault(coloring[v], []).append(v)
    return [sorted(groups[c]) for c in sorted(groups)]


def _better(value: Fraction, best: Fraction, sense: str) -> bool:
    return value < best if sense == "min" else value > best


# ----------------------------------------------------------------------
# black-box estimators over proper colorings
# ----------------------------------------------------------------------
class BlackBoxEstimator:
    """Interface for ``derand_proper``.

    Implementations record committed values in the dict ``fixed``.  ``local_objective``
    returns E[F_v + sum_{u in N(v)} F_u | fixed values, R_v = value].
    """

    def random_nodes(self) -> list[int]:
        raise NotImplementedError

    def space(self, v: int) -> ValueSpace:
        raise NotImplementedError

    def local_objective(self, v: int, value) -> Fraction:
        raise NotImplementedError

    def commit(self, v: int, value) -> None:
        raise NotImplementedError

    def expectation(self) -> Fraction:
        """sum_u E[F_u | values fixed so far]."""
        raise NotImplementedError

    def realized(self, rho: Mapping[int, object]) -> Fraction:
        """sum_u F_u(rho) for a complete assignment."""
        raise NotImplementedError


class EnumerationEstimator(BlackBoxEstimator):
    """Generic estimator: each flag F_u is a function of the values on N[u].

    ``flags[u]`` receives a dict mapping every random node of N[u] to a value
    and returns a rational.  Conditional expectations are computed by
    enumerating the unfixed values in the relevant neighborhood.
    """

    def __init__(
        self,
        G: Graph,
        flags: Mapping[int, Callable[[dict], Fraction]],
        spaces: Mapping[int, ValueSpace],
    ):
        self.G = G
        self.flags = dict(flags)
        self.spaces = dict(spaces)
        self.fixed: dict[int, object] = {}

    def random_nodes(self) -> list[int]:
        return sorted(self.spaces)

    def space(self, v: int) -> ValueSpace:
        return self.spaces[v]

    def _closed(self, u: int) -> list[int]:
        return [w for w in (u, *self.G.neighbors(u)) if w in self.spaces]

    def _flag_expectation(self, u: int, fixed: Mapping[int, object]) -> Fraction:
        if u not in self.flags:
            return Fraction(0)
        scope = self._closed(u)
        free = [w for w in scope if w not in fixed]
        base = {w: fixed[w] for w in scope if w in fixed}
        total = Fraction(0)
        for combo in product(*(list(self.spaces[w].items()) for w in free)):
            assign = dict(base)
            prob = Fraction(1)
            for w, (value, p) in zip(free, combo):
                assign[w] = value
                prob *= p
            if prob:
                total += prob * Fraction(self.flags[u](assign))
        return total

    def local_objective(self, v: int, value) -> Fraction:
        fixed = {**self.fixed, v: value}
        return sum(
            (self._flag_expectation(u, fixed) for u in (v, *self.G.neighbors(v))),
            Fraction(0),
        )

    def commit(self, v: int, value) -> None:
        self.fixed[v] = value

    def expectation(self) -> Fraction:
        return sum((self._flag_expectation(u, self.fixed) for u in self.flags), Fraction(0))

    def realized(self, rho: Mapping[int, object]) -> Fraction:
        out = Fraction(0)
        for u, f in self.flags.items():
            out += Fraction(f({w: rho[w] for w in self._closed(u)}))
        return out


@dataclass
class DerandResult:
    assignment: dict[int, object]
    expected: Fraction | float
    realized: Fraction | float
    classes: int


def derand_proper(
    G: Graph,
    coloring: Mapping[int, int],
    estimator: BlackBoxEstimator,
    sense: str = "min",
    check: bool = True,
) -> DerandResult:
    """Fix every random value so that sum F_u(rho) is no worse than its expectation."""
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    if check and not square_coloring_is_proper(G, coloring):
        raise NotProper("coloring is not proper on G^2")
    expected = estimator.expectation()
    classes = color_classes(estimator.random_nodes(), coloring)
    for cls in classes:
        choices = []
        for v in cls:
            best_value, best_obj = None, None
            for value in estimator.space(v).support:
                obj = estimator.local_objective(v, value)
                if best_obj is None or _better(obj, best_obj, sense):
                    best_value, best_obj = value, obj
            choices.append((v, best_value))
        for v, value in choices:
            estimator.commit(v, value)
    rho = {v: estimator.fixed[v] for v in estimator.random_nodes()}
    return DerandResult(rho, expected, estimator.realized(rho), len(classes))


# ----------------------------------------------------------------------
# simple matching by derandomized sampling
# ----------------------------------------------------------------------
class SimpleMatchingEstimator(BlackBoxEstimator):
    """Flags for sampling each edge with probability p and dropping collisions.

    F_e = [e in L] a(e) at edge-nodes and, at vertex-nodes,
    F_v = -sum over ordered pairs e != e' of N(v) of [e, e' in L] a(e).
    Everything is tracked in integers scaled by K^2 * D, where p = 1/K and D
    clears the weight denominators, so each decision is a few integer ops.
    """

    def __init__(self, H: Hypergraph, a: Mapping[int, Fraction], inc: IncidenceGraph, K: int):
        self.H = H
        self.inc = inc
        self.K = K
        self.D = math.lcm(*(Fraction(a[e]).denominator for e in H.edges)) if H.m else 1
        self.alpha = {e: int(Fraction(a[e]) * self.D) for e in H.edges}
        self.pi = {e: 1 for e in H.edges}  # K * P(e in L): 1 unknown, K in, 0 out
        self.A = [0] * H.n
        self.S = [0] * H.n
        self.Q = [0] * H.n
        for e, vs in H.edges.items():
            al = self.alpha[e]
            for v in vs:
                self.A[v] += al
                self.S[v] += 1
                self.Q[v] += al
        self.fixed: dict[int, int] = {}
        self.scale = Fraction(1, K * K * self.D)

    def random_nodes(self) -> list[int]:
        return [self.inc.edge_node[e] for e in self.H.edges]

    def space(self, node: int) -> ValueSpace:
        return bernoulli(Fraction(1, self.K))

    def _scaled_objective(self, e: int, value: int) -> int:
        al = self.alpha[e]
        old = self.pi[e]
        new = self.K * value
        total = al * new * self.K
        for v in self.H.edges[e]:
            A = self.A[v] - al * old + al * new
            S = self.S[v] - old + new
            Q = self.Q[v] - al * old * old + al * new * new
            total -= A * S - Q
        return total

    def local_objective(self, node: int, value) -> Fraction:
        e = self.inc.node_edge[node]
        return self._scaled_objective(e, value) * self.scale

    def commit(self, node: int, value) -> None:
        e = self.inc.node_edge[node]
        al = self.alpha[e]
        old = self.pi[e]
        new = self.K * value
        for v in self.H.edges[e]:
            self.A[v] += al * (new - old)
            self.S[v] += new - old
            self.Q[v] += al * (new * new - old * old)
        self.pi[e] = new
        self.fixed[node] = value

    def expectation(self) -> Fraction:
        total = sum(self.alpha[e] * self.pi[e] * self.K for e in self.H.edges)
        total -= sum(self.A[v] * self.S[v] - self.Q[v] for v in self.H.vertices)
        return total * self.scale

    def realized(self, rho: Mapping[int, object]) -> Fraction:
        chosen = [e for e in self.H.edges if rho[self.inc.edge_node[e]] == 1]
        total = Fraction(0)
        for e in chosen:
            total += Fraction(self.alpha[e], self.D)
        for v in self.H.vertices:
            here = [e for e in self.H.incident(v) if rho[self.inc.edge_node[e]] == 1]
            if len(here) > 1:
                total -= (len(here) - 1) * sum(Fraction(self.alpha[e], self.D) for e in here)
        return total


@dataclass
class SimpleMatchingResult:
    matching: frozenset[int]
    sampled: frozenset[int]
    expected: Fraction
    realized: Fraction
    floor: Fraction
    classes: int


def simple_matching_report(
    H: Hypergraph,
    a: Mapping[int, Fraction],
    coloring: Mapping[int, int],
    inc: IncidenceGraph | None = None,
    check: bool = True,
) -> SimpleMatchingResult:
    """Derandomized sampling with p = 1/(10 r Delta), then drop intersecting edges.

    The returned matching satisfies a(M) >= sum F(rho) >= E[sum F] >=
    0.09 a(E)/(r Delta), all as exact rationals, with r and Delta the declared
    rank and degree of ``H``.
    """
    inc = inc if inc is not None else incidence_graph(H)
    K = 10 * H.rank * H.max_degree
    est = SimpleMatchingEstimator(H, a, inc, K)
    res = derand_proper(inc, coloring, est, sense="max", check=check)
    sampled = [e for e in H.edges if res.assignment[inc.edge_node[e]] == 1]
    load: dict[int, int] = {}
    for e in sampled:
        for v in H.edges[e]:
            load[v] = load.get(v, 0) + 1
    M = frozenset(e for e in sampled if all(load[v] == 1 for v in H.edges[e]))
    floor = Fraction(9, 100) * total_weight(a, H.edges) / (H.rank * H.max_degree)
    return SimpleMatchingResult(M, frozenset(sampled), res.expected, res.realized, floor, res.classes)


def simple_matching(
    H: Hypergraph, a: Mapping[int, Fraction], coloring: Mapping[int, int], inc=None
) -> frozenset[int]:
    return simple_matching_report(H, a, coloring, inc).matching


# ----------------------------------------------------------------------
# multilinear estimators
# ----------------------------------------------------------------------
class MultilinearEstimator:
    """Interface for ``derand_multilinear`` over binary variables.

    ``expected_derivative(v)`` is E[Phi | X_v = 1] - E[Phi | X_v = 0] given the
    values committed so far; ``evaluate`` is the multilinear extension at a
    point with coordinates in [0, 1].
    """

    def variables(self) -> list[int]:
        raise NotImplementedError

    def prob(self, v: int) -> Fraction:
        return Fraction(1, 2)

    def expected_derivative(self, v: int):
        raise NotImplementedError

    def commit(self, v: int, value: int) -> None:
        raise NotImplementedError

    def expectation(self):
        raise NotImplementedError

    def evaluate(self, point: Mapping[int, Fraction]):
        raise NotImplementedError

    def dependency(self, v: int) -> set[int] | None:
        """Variables D_v Phi may read, if known structurally (for the A2 audit)."""
        return None


class LiteralPolynomial(MultilinearEstimator):
    """Phi = sum of coef * prod_{v in pos} X_v * prod_{v in neg} (1 - X_v)."""

    def __init__(
        self,
        terms: Iterable[tuple[Fraction, Iterable[int], Iterable[int]]],
        variables: Iterable[int] | None = None,
        probs: Mapping[int, Fraction] | None = None,
    ):
        self.terms = []
        names: set[int] = set()
        for coef, pos, neg in terms:
            pos, neg = frozenset(pos), frozenset(neg)
            if pos & neg:
                raise ValueError("a variable appears both plain and complemented in one term")
            self.terms.append((Fraction(coef), pos, neg))
            names |= pos | neg
        if variables is not None:
            names |= set(variables)
        self._vars = sorted(names)
        self._probs = {v: Fraction(1, 2) for v in self._vars}
        if probs:
            self._probs.update({v: Fraction(p) for v, p in probs.items()})
        self.fixed: dict[int, int] = {}

    def variables(self) -> list[int]:
        return list(self._vars)

    def prob(self, v: int) -> Fraction:
        return self._probs[v]

    def _value(self, v: int, point) -> Fraction:
        if point is not None:
            return Fraction(point[v])
        return Fraction(self.fixed[v]) if v in self.fixed else self._probs[v]

    def _term(self, coef, pos, neg, point=None, skip=None) -> Fraction:
        out = coef
        for v in pos:
            if v != skip:
                out *= self._value(v, point)
        for v in neg:
            if v != skip:
                out *= 1 - self._value(v, point)
        return out

    def expectation(self) -> Fraction:
        return sum((self._term(*t) for t in self.terms), Fraction(0))

    def evaluate(self, point: Mapping[int, Fraction]) -> Fraction:
        return sum((self._term(*t, point=point) for t in self.terms), Fraction(0))

    def expected_derivative(self, v: int) -> Fraction:
        out = Fraction(0)
        for coef, pos, neg in self.terms:
            if v in pos:
                out += self._term(coef, pos, neg, skip=v)
            elif v in neg:
                out -= self._term(coef, pos, neg, skip=v)
        return out

    def commit(self, v: int, value: int) -> None:
        self.fixed[v] = value

    def dependency(self, v: int) -> set[int]:
        out: set[int] = set()
        for _, pos, neg in self.terms:
            if v in pos or v in neg:
                out |= pos | neg
        out.discard(v)
        return out

    def interacting_pairs(self) -> set[tuple[int, int]]:
        out = set()
        for _, pos, neg in self.terms:
            names = sorted(pos | neg)
            for i in range(len(names)):
                for j in range(i + 1, len(names)):
                    out.add((names[i], names[j]))
        return out


def second_derivative(est: MultilinearEstimator, v: int, w: int, point: Mapping[int, Fraction]):
    """D_v D_w Phi at a point, by the four-corner difference (exact for multilinear Phi)."""
    total = 0
    for xv, xw, sign in ((1, 1, 1), (1, 0, -1), (0, 1, -1), (0, 0, 1)):
        total += sign * est.evaluate({**point, v: Fraction(xv), w: Fraction(xw)})
    return total


def first_derivative(est: MultilinearEstimator, v: int, point: Mapping[int, Fraction]):
    return est.evaluate({**point, v: Fraction(1)}) - est.evaluate({**point, v: Fraction(0)})


def _random_point(variables, rng: random.Random) -> dict[int, Fraction]:
    return {v: Fraction(rng.randint(0, 16), 16) for v in variables}


def a1_audit(
    est: MultilinearEstimator,
    chi: Mapping[int, int],
    pairs: int = 100,
    points: int = 20,
    seed: int = 0,
    tol: float = 0.0,
) -> int:
    """Check D_v D_w Phi = 0 for random same-colored pairs; returns pairs checked."""
    rng = random.Random(seed)
    classes = [c for c in color_classes(est.variables(), chi) if len(c) >= 2]
    if not classes:
        return 0
    variables = est.variables()
    checked = 0
    for _ in range(pairs):
        cls = rng.choice(classes)
        v, w = rng.sample(cls, 2)
        for _ in range(points):
            val = second_derivative(est, v, w, _random_point(variables, rng))
            if abs(val) > tol:
                raise A1Violation(f"variables {v} and {w} share color {chi[v]} but interact")
        checked += 1
    return checked


def a2_audit(
    est: MultilinearEstimator,
    G: Graph,
    samples: int = 100,
    points: int = 5,
    seed: int = 0,
    tol: float = 0.0,
) -> int:
    """Check that D_v Phi does not change when values outside N[v] change."""
    rng = random.Random(seed)
    variables = est.variables()
    checked = 0
    for _ in range(samples):
        v = rng.choice(variables)
        near = {v, *G.neighbors(v)}
        far = [u for u in variables if u not in near]
        if not far:
            continue
        for _ in range(points):
            point = _random_point(variables, rng)
            moved = dict(point)
            for u in rng.sample(far, min(len(far), 3)):
                moved[u] = Fraction(rng.randint(0, 16), 16)
            if abs(first_derivative(est, v, point) - first_derivative(est, v, moved)) > tol:
                raise A2Violation(f"derivative at {v} reads values outside its neighborhood")
        checked += 1
    return checked


def structural_audit(est: LiteralPolynomial, G: Graph | None, chi: Mapping[int, int]) -> None:
    """Exact audits for explicit polynomials.

    A1: a term holding two same-colored variables is a suspect; it is a real
    violation if the four-corner difference is nonzero at some random point.
    A2: every variable sharing a term with v must be a neighbor of v in G.
    """
    suspects = [(v, w) for v, w in est.interacting_pairs() if chi[v] == chi[w]]
    rng = random.Random(0)
    for v, w in suspects:
        for _ in range(20):
            if second_derivative(est, v, w, _random_point(est.variables(), rng)) != 0:
                raise A1Violation(f"variables {v} and {w} share color {chi[v]} but interact")
    if G is not None:
        for v in est.variables():
            outside = est.dependency(v) - set(G.neighbors(v))
            if outside:
                raise A2Violation(
                    f"derivative at {v} reads {sorted(outside)}, which are not neighbors"
                )


def derand_multilinear(
    G: Graph | None,
    chi: Mapping[int, int],
    est: MultilinearEstimator,
    sense: str = "min",
    audit: bool = True,
) -> DerandResult:
    """Commit one color class at a time by the sign of the expected derivative.

    For ``sense == "min"`` a node takes value 1 exactly when its expected
    derivative is negative (ties go to 0); for ``"max"`` when it is positive.
    """
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    if audit and isinstance(est, LiteralPolynomial):
        structural_audit(est, G, chi)
    expected = est.expectation()
    classes = color_classes(est.variables(), chi)
    rho: dict[int, int] = {}
    for cls in classes:
        decisions = []
        for v in cls:
            d = est.expected_derivative(v)
            take = d < 0 if sense == "min" else d > 0
            decisions.append((v, 1 if take else 0))
        for v, value in decisions:
            est.commit(v, value)
            rho[v] = value
    realized = est.evaluate({v: Fraction(x) for v, x in rho.items()})
    return DerandResult(rho, expected, realized, len(classes))


# ----------------------------------------------------------------------
# elementary symmetric polynomials over color classes
# ----------------------------------------------------------------------
def elementary_symmetric(values: Sequence, w: int) -> list:
    """[e_0, ..., e_w] of the given values (e_0 = 1)."""
    e = [1] + [0] * w
    for x in values:
        for j in range(w, 0, -1):
            e[j] = e[j] + e[j - 1] * x
    return e


def esym(values: Sequence, w: int):
    if w < 0:
        return 0
    return elementary_symmetric(values, w)[w]


# ----------------------------------------------------------------------
# the toy degree-splitting potential
# ----------------------------------------------------------------------
class ToySplitEstimator(MultilinearEstimator):
    """Phi' = beta * sum_v (|U_v cap 2^L| + |U_v cap 2^(E-L)|).

    U_v holds the w-subsets of N(v) with pairwise distinct colors, so
    |U_v cap 2^L| is the w-th elementary symmetric polynomial of the per-color
    counts of L-edges at v.  Variables are the edges in the coloring's domain;
    X_e = 1 means e goes to L.  Values are kept doubled (0, 1 or 2 for a fixed
    0, unknown, fixed 1) so all the symmetric sums are integers.
    """

    def __init__(self, H: Hypergraph, t: int, w: int, chi: Mapping[int, int]):
        self.H = H
        self.t = t
        self.w = w
        self.chi = dict(chi)
        self.beta = Fraction(1, math.comb(t, w)) if t >= w else Fraction(0)
        self.twice = {e: 1 for e in self.chi}
        self.inL: list[dict[int, int]] = [dict() for _ in H.vertices]  # doubled sums
        self.outL: list[dict[int, int]] = [dict() for _ in H.vertices]
        for e, c in self.chi.items():
            for v in H.edges[e]:
                self.inL[v][c] = self.inL[v].get(c, 0) + 1
                self.outL[v][c] = self.outL[v].get(c, 0) + 1

    def variables(self) -> list[int]:
        return sorted(self.chi)

    def _vertex_term(self, v: int, skip_color=None, order=None):
        order = self.w if order is None else order
        ins = [x for c, x in self.inL[v].items() if c != skip_color]
        outs = [x for c, x in self.outL[v].items() if c != skip_color]
        return esym(ins, order), esym(outs, order)

    def expectation(self) -> Fraction:
        total = 0
        for v in self.H.vertices:
            a, b = self._vertex_term(v)
            total += a + b
        return self.beta * Fraction(total, 2**self.w)

    def expected_derivative(self, e: int) -> Fraction:
        c = self.chi[e]
        total = 0
        for v in self.H.edges[e]:
            a, b = self._vertex_term(v, skip_color=c, order=self.w - 1)
            total += a - b
        return self.beta * Fraction(total, 2 ** (self.w - 1))

    def commit(self, e: int, value: int) -> None:
        new = 2 * value
        old = self.twice[e]
        c = self.chi[e]
        for v in self.H.edges[e]:
            self.inL[v][c] += new - old
            self.outL[v][c] += (2 - new) - (2 - old)
        self.twice[e] = new

    def evaluate(self, point: Mapping[int, Fraction]) -> Fraction:
        total = Fraction(0)
        for v in self.H.vertices:
            ins: dict[int, Fraction] = {}
            outs: dict[int, Fraction] = {}
            for e in self.H.incident(v):
                if e in self.chi:
                    c = self.chi[e]
                    ins[c] = ins.get(c, Fraction(0)) + point[e]
                    outs[c] = outs.get(c, Fraction(0)) + 1 - point[e]
            total += esym(list(ins.values()), self.w) + esym(list(outs.values()), self.w)
        return self.beta * total

    def dependency(self, e: int) -> set[int]:
        out = set()
        for v in self.H.edges[e]:
            out.update(f for f in self.H.incident(v) if f in self.chi)
        out.discard(e)
        return out


@dataclass
class ToySplitResult:
    L: frozenset[int]
    potential: Fraction
    expected: Fraction
    bad_vertices: list[int]
    defect: int
    guarantee_threshold: Fraction
    guarantee_holds: bool
    info: dict = field(default_factory=dict)


def toy_degree_split(H: Hypergraph, t: int, w: int, chi: Mapping[int, int]) -> ToySplitResult:
    """Split the colored edges into L and E - L by derandomizing Phi'.

    A vertex is bad when deg_L(v) >= t or deg_{E-L}(v) >= t.  If a vertex is
    bad then Phi'(L) >= beta * prod_{j<w} (t - j*d) / w!, with d the
    defectiveness of chi; so a final potential below that bound certifies that
    no vertex is bad.  Edges outside chi's domain are not split and stay out
    of L.
    """
    est = ToySplitEstimator(H, t, w, chi)
    res = derand_multilinear(None, chi, est, sense="min", audit=False)
    L = frozenset(e for e, x in res.assignment.items() if x == 1)
    rest = [e for e in chi if e not in L]
    bad = []
    for v in H.vertices:
        inside = sum(1 for e in H.incident(v) if e in L)
        outside = sum(1 for e in H.incident(v) if e in chi and e not in L)
        if inside >= t or outside >= t:
            bad.append(v)
    defect = 0
    for v in H.vertices:
        counts: dict[int, int] = {}
        for e in H.incident(v):
            if e in chi:
                counts[chi[e]] = counts.get(chi[e], 0) + 1
        defect = max(defect, max(counts.values(), default=0))
    prod = 1
    for j in range(w):
        prod *= max(0, t - j * defect)
    threshold = est.beta * Fraction(prod, math.factorial(w))
    holds = res.realized < threshold
    if holds:
        assert not bad, "certified split has a bad vertex"
    return ToySplitResult(L, res.realized, res.expected, bad, defect, threshold, holds,
                          {"unsplit": len(rest)})


def binomial_moment_bound(deg: int, t: int, w: int) -> tuple[Fraction, Fraction]:
    """(beta * C(deg, w) * 2^-w, Pr[Bin(deg, 1/2) >= t]) with beta = 1/C(t, w).

    The first is E[C(deg_L, w)] / C(t, w), which dominates the second since
    C(deg_L, w) >= C(t, w) whenever deg_L >= t.
    """
    bound = Fraction(math.comb(deg, w), math.comb(t, w) * 2**w)
    tail = Fraction(sum(math.comb(deg, i) for i in range(t, deg + 1)), 2**deg)
    return bound, tail
