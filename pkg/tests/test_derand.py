import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypmatch.coloring import good_coloring
from hypmatch.core import Graph, Hypergraph, incidence_graph, is_matching, power_graph, total_weight
from hypmatch.derand import (
    A1Violation,
    A2Violation,
    EnumerationEstimator,
    LiteralPolynomial,
    NotProper,
    SimpleMatchingEstimator,
    ToySplitEstimator,
    ValueSpace,
    a1_audit,
    a2_audit,
    bernoulli,
    binomial_moment_bound,
    derand_multilinear,
    derand_proper,
    elementary_symmetric,
    sample,
    simple_matching_report,
    square_coloring_is_proper,
    toy_degree_split,
)

from conftest import hypergraphs, weighted_hypergraphs


def greedy_square_coloring(G: Graph) -> dict[int, int]:
    G2 = power_graph(G, 2)
    out: dict[int, int] = {}
    for u in G2.nodes:
        taken = {out[w] for w in G2.neighbors(u) if w in out}
        c = 1
        while c in taken:
            c += 1
        out[u] = c
    return out


def random_graph(n, p, rng):
    return Graph.from_edges(n, [(u, w) for u in range(n) for w in range(u + 1, n) if rng.random() < p])


def table_flags(G, rng, high=9):
    flags = {}
    for u in G.nodes:
        scope = sorted({u, *G.neighbors(u)})
        table = {bits: rng.randint(-high, high) for bits in itertools.product((0, 1), repeat=len(scope))}
        flags[u] = (lambda assign, scope=scope, table=table: table[tuple(assign[w] for w in scope)])
    return flags


def test_value_spaces():
    space = bernoulli(Fraction(1, 4))
    assert dict(space.items()) == {0: Fraction(3, 4), 1: Fraction(1, 4)}
    assert sample(ValueSpace((0, 1), (Fraction(0), Fraction(1))), random.Random(0)) == 1


def test_square_coloring_check():
    P = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert not square_coloring_is_proper(P, {0: 1, 1: 2, 2: 1})
    assert square_coloring_is_proper(P, {0: 1, 1: 2, 2: 3})
    est = EnumerationEstimator(P, {0: lambda a: 0}, {u: bernoulli() for u in P.nodes})
    with pytest.raises(NotProper):
        derand_proper(P, {0: 1, 1: 2, 2: 1}, est)


@given(st.integers(2, 7), st.integers(0, 10**6), st.sampled_from(["min", "max"]))
def test_conditional_expectations_never_lose(n, seed, sense):
    rng = random.Random(seed)
    G = random_graph(n, 0.4, rng)
    spaces = {u: bernoulli(Fraction(rng.randint(1, 7), 8)) for u in G.nodes}
    est = EnumerationEstimator(G, table_flags(G, rng), spaces)
    res = derand_proper(G, greedy_square_coloring(G), est, sense=sense)
    # independent check: the expectation by enumerating every joint outcome
    total = Fraction(0)
    for combo in itertools.product(*(list(spaces[u].items()) for u in G.nodes)):
        prob = math.prod((p for _, p in combo), start=Fraction(1))
        assign = {u: x for u, (x, _) in zip(G.nodes, combo)}
        total += prob * est.realized(assign)
    assert res.expected == total
    assert res.realized <= total if sense == "min" else res.realized >= total


def brute_simple_matching_expectation(H, a, p):
    """E[sum F] by enumerating every sampled set L."""
    edges = list(H.edges)
    total = Fraction(0)
    for bits in itertools.product((0, 1), repeat=len(edges)):
        L = [e for e, b in zip(edges, bits) if b]
        prob = p ** len(L) * (1 - p) ** (len(edges) - len(L))
        value = total_weight(a, L)
        for v in H.vertices:
            here = [e for e in L if v in H.edges[e]]
            value -= (len(here) - 1) * total_weight(a, here) if here else 0
        total += prob * value
    return total


@given(weighted_hypergraphs(max_m=7, max_n=5))
def test_simple_matching_expectation_matches_enumeration(Ha):
    H, a = Ha
    inc = incidence_graph(H)
    K = 10 * H.rank * H.max_degree
    est = SimpleMatchingEstimator(H, a, inc, K)
    assert est.expectation() == brute_simple_matching_expectation(H, a, Fraction(1, K))


@given(weighted_hypergraphs(max_m=14))
def test_simple_matching_chain(Ha):
    H, a = Ha
    inc = incidence_graph(H)
    res = simple_matching_report(H, a, good_coloring(H).node_colors(inc))
    assert is_matching(H, res.matching)
    assert total_weight(a, res.matching) >= res.realized >= res.expected >= res.floor


def test_simple_matching_on_single_edge_takes_it():
    H = Hypergraph(2, {0: (0, 1)})
    res = simple_matching_report(H, {0: Fraction(3)}, good_coloring(H).node_colors(incidence_graph(H)))
    assert res.matching == frozenset({0})


def test_literal_polynomial_audits():
    est = LiteralPolynomial([(Fraction(1), [0, 1], []), (Fraction(2), [2], [1])])
    with pytest.raises(A1Violation):
        derand_multilinear(None, {0: 1, 1: 1, 2: 2}, est)
    est = LiteralPolynomial([(Fraction(1), [0, 1], [])])
    lonely = Graph(2)
    with pytest.raises(A2Violation):
        derand_multilinear(lonely, {0: 1, 1: 2}, est)


@given(st.integers(2, 8), st.integers(0, 10**6), st.sampled_from(["min", "max"]))
def test_multilinear_derandomization_never_loses(n, seed, sense):
    rng = random.Random(seed)
    terms = []
    for _ in range(rng.randint(1, 8)):
        names = rng.sample(range(n), rng.randint(1, min(3, n)))
        cut = rng.randint(0, len(names))
        terms.append((Fraction(rng.randint(-5, 5), rng.randint(1, 3)), names[:cut], names[cut:]))
    probs = {v: Fraction(rng.randint(1, 3), 4) for v in range(n)}
    est = LiteralPolynomial(terms, range(n), probs)
    G = Graph.from_edges(n, list(est.interacting_pairs()))
    chi: dict[int, int] = {}
    for v in range(n):
        taken = {chi[w] for w in G.neighbors(v) if w in chi}
        chi[v] = min(c for c in range(1, n + 2) if c not in taken)
    res = derand_multilinear(G, chi, est, sense=sense)
    assert res.realized <= res.expected if sense == "min" else res.realized >= res.expected


@given(st.lists(st.integers(-4, 6), max_size=7), st.integers(0, 4))
def test_elementary_symmetric_matches_subsets(values, w):
    got = elementary_symmetric(values, w)
    for j in range(w + 1):
        want = sum(math.prod(c) for c in itertools.combinations(values, j))
        assert got[j] == want


@given(st.integers(1, 30), st.integers(1, 30), st.integers(1, 5))
def test_moment_bound_dominates_tail(deg, t, w):
    if w > t:
        return
    bound, tail = binomial_moment_bound(deg, t, w)
    assert bound >= tail


@given(hypergraphs(max_m=12, max_n=6, min_m=1), st.integers(1, 3))
def test_toy_split_audits_and_certificate(H, w):
    chi = {e: 1 + e % 3 for e in H.edges}
    t = max(w, H.actual_max_degree())
    est = ToySplitEstimator(H, t, w, chi)
    a1_audit(est, chi, pairs=10, points=3)
    dep = Graph.from_edges(max(H.edges, default=0) + 1, [(e, f) for e in H.edges for f in est.dependency(e)])
    a2_audit(est, dep, samples=10, points=2)
    res = toy_degree_split(H, t, w, chi)
    assert res.potential <= res.expected
    if res.guarantee_holds:
        assert not res.bad_vertices
