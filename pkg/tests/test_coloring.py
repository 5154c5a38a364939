from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypmatch.coloring import (
    EdgeColoring,
    PreconditionDelta,
    defective_color,
    defectiveness,
    degree_split,
    good_coloring,
    greedy_coloring_program,
    is_good_coloring,
    is_proper,
    lift_coloring,
    reduce_colors,
)
from hypmatch.core import FractionalMatching, Hypergraph, incidence_graph, power_graph, replicate_with_parents
from hypmatch.derand import NotProper
from hypmatch.localsim import run
from hypmatch.oracles import dense_splitting_instance, random_hypergraph, random_weights

from conftest import hypergraphs, weighted_hypergraphs


@given(hypergraphs(max_m=14))
def test_good_coloring_is_proper_on_square(H):
    col = good_coloring(H)
    assert is_good_coloring(H, col)
    inc = incidence_graph(H)
    assert is_proper(power_graph(inc, 2), col.node_colors(inc))
    assert col.k <= max(H.actual_rank(), 1) * max(H.actual_max_degree(), 1) + 1


@given(hypergraphs(max_m=10))
def test_central_greedy_equals_distributed_greedy(H):
    col = good_coloring(H)
    inc = incidence_graph(H)
    out, trace = run(power_graph(inc, 2), greedy_coloring_program(), col.rounds)
    assert out == col.node_colors(inc)


def test_good_coloring_serves_subhypergraphs():
    H = random_hypergraph(3, 4, 20, seed=2)
    col = good_coloring(H)
    sub = H.subgraph(list(H.edges)[::2])
    assert is_good_coloring(sub, col.restrict(sub.edges))


@given(hypergraphs(max_m=12), st.integers(0, 3))
def test_reduce_colors(H, extra):
    inc = incidence_graph(H)
    G = power_graph(inc, 2)
    col = good_coloring(H).node_colors(inc)
    d = G.max_degree() + extra
    out = reduce_colors(G, col, d)
    assert is_proper(G, out.colors)
    assert len(set(out.colors.values())) <= d + 1


def test_reduce_colors_rejects_improper_input():
    H = Hypergraph(2, {0: (0, 1)})
    G = power_graph(incidence_graph(H), 2)
    with pytest.raises(NotProper):
        reduce_colors(G, {0: 1, 1: 1, 2: 2}, 2)


def test_lifted_coloring_is_good_on_replicate():
    H = random_hypergraph(3, 3, 12, seed=5)
    h = FractionalMatching({e: Fraction(1, 3) for e in H.edges}, 3).check(H)
    rep = replicate_with_parents(H, h)
    lifted = lift_coloring(good_coloring(H), rep)
    assert is_good_coloring(rep.hypergraph, lifted)


@given(weighted_hypergraphs(max_m=14, max_n=6))
def test_split_degree_bound_always_holds(Ha):
    H, a = Ha
    eps = Fraction(1, 2)
    res = degree_split(H, a, eps, Fraction(1, 10), good_coloring(H), enforce=False)
    assert not res.L1 & res.L2
    assert res.L1 | res.L2 | res.discarded == set(H.edges)
    assert res.realized_penalty <= res.expected_penalty
    cap = (1 + eps) * H.max_degree / 2
    for v in H.vertices:
        for part in res:
            assert sum(1 for e in H.incident(v) if e in part) <= cap


def test_split_precondition_enforced():
    H = random_hypergraph(3, 6, 20, seed=0)
    with pytest.raises(PreconditionDelta):
        degree_split(H, random_weights(H, 0), Fraction(1, 2), Fraction(1, 10), good_coloring(H))


def test_split_ignores_low_degree_vertices():
    H = Hypergraph(4, {0: (0, 1), 1: (2, 3)}, max_degree=4)
    res = degree_split(H, {0: Fraction(1), 1: Fraction(1)}, Fraction(1, 2), Fraction(1, 10),
                       good_coloring(H), enforce=False)
    assert res.virtual_nodes == 0 and not res.discarded


def test_defectiveness_count():
    H = Hypergraph(3, {0: (0, 1), 1: (0, 2), 2: (1, 2)})
    assert defectiveness(H, {0: 1, 1: 1, 2: 2}) == 2
    assert defectiveness(H, {0: 1, 1: 2, 2: 3}) == 1


@pytest.mark.slow
def test_defective_coloring_two_colors_on_dense_instance():
    H = dense_splitting_instance(max_degree=1024, r=3, n=10, seed=1)
    a = random_weights(H, 1, "int")
    res = defective_color(H, a, Fraction(1, 5), 2, good_coloring(H))
    assert isinstance(res, EdgeColoring)
    assert res.defectiveness(H) <= 4 * H.max_degree // 2
    kept = sum(a[e] for e in res.domain)
    assert kept >= Fraction(4, 5) * sum(a.values())
