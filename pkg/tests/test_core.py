from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypmatch.core import (
    FractionalMatching,
    Graph,
    Hypergraph,
    HypergraphError,
    InfeasibleFractionalMatching,
    NonIntegerCopyCount,
    NotAMatching,
    check_matching,
    connected_components,
    derive_seed,
    incidence_graph,
    is_matching,
    is_maximal_matching,
    power_graph,
    replicate,
    replicate_with_parents,
    residual,
    rng_for,
    total_weight,
    unit_weights,
)

from conftest import hypergraphs


def triangle():
    return Hypergraph(3, {0: (0, 1), 1: (1, 2), 2: (0, 2)})


def test_declared_bounds_default_to_actual():
    H = Hypergraph(4, {0: (0, 1, 2), 1: (2, 3)})
    assert H.rank == 3 and H.max_degree == 2
    assert H.incident(2) == (0, 1)
    assert H.edge_neighbors(0) == [1]


@pytest.mark.parametrize(
    "edges, kw",
    [
        ({0: ()}, {}),
        ({0: (1, 1)}, {}),
        ({0: (0, 5)}, {}),
        ({0: (0, 1, 2)}, {"rank": 2}),
        ({0: (0, 1), 1: (0, 2)}, {"max_degree": 1}),
    ],
)
def test_invalid_hypergraphs_rejected(edges, kw):
    with pytest.raises(HypergraphError):
        Hypergraph(3, edges, **kw)


def test_duplicate_edge_id_rejected():
    with pytest.raises(HypergraphError):
        Hypergraph(3, [(0, (0, 1)), (0, (1, 2))])


def test_subgraph_keeps_declared_bounds():
    H = Hypergraph(4, {0: (0, 1), 1: (1, 2), 2: (2, 3)}, max_degree=5)
    S = H.subgraph([0, 2])
    assert S.max_degree == 5 and set(S.edges) == {0, 2}
    assert H.subgraph([0], keep_declared=False).max_degree == 1


def test_matching_checks():
    H = triangle()
    assert is_matching(H, [0]) and not is_matching(H, [0, 1])
    with pytest.raises(NotAMatching):
        check_matching(H, [0, 2])
    assert is_maximal_matching(H, [1])
    assert not is_maximal_matching(Hypergraph(4, {0: (0, 1), 1: (2, 3)}), [0])


def test_fractional_matching_checks():
    H = triangle()
    h = FractionalMatching({e: Fraction(1, 2) for e in H.edges}, 2)
    assert h.check(H) is h
    assert h.weight(unit_weights(H)) == Fraction(3, 2)
    with pytest.raises(InfeasibleFractionalMatching):
        FractionalMatching({0: Fraction(1), 1: Fraction(1, 2)}, 2).check(H)
    with pytest.raises(InfeasibleFractionalMatching):
        FractionalMatching({0: Fraction(1, 3)}, 2).check(H)


def test_replicate_copy_counts():
    H = triangle()
    h = FractionalMatching({0: Fraction(1, 2), 1: Fraction(1, 4), 2: Fraction(1, 4)}, 4)
    rep = replicate_with_parents(H, h)
    assert rep.hypergraph.m == 4
    assert sorted(rep.parent.values()) == [0, 0, 1, 2]
    assert rep.hypergraph.max_degree == 4
    assert rep.project([0, 1]) == frozenset({0})
    with pytest.raises(NonIntegerCopyCount):
        replicate(H, FractionalMatching({0: Fraction(1, 3)}, 2))


@given(hypergraphs(min_m=1), st.integers(1, 6))
def test_replicate_degree_at_most_q(H, q):
    values = {e: Fraction(q // max(H.actual_max_degree(), 1), q) for e in H.edges}
    h = FractionalMatching(values, q).check(H)
    G = replicate(H, h)
    assert G.actual_max_degree() <= q


@given(hypergraphs())
def test_residual_edges_avoid_matching(H):
    M = []
    used = set()
    for e, vs in H.edges.items():
        if not used & set(vs):
            M.append(e)
            used |= set(vs)
    R = residual(H, M)
    assert R.m == 0
    assert is_maximal_matching(H, M)


@given(hypergraphs())
def test_components_partition_edges(H):
    comps = connected_components(H)
    assert sorted(e for c in comps for e in c) == sorted(H.edges)
    seen = [set(v for e in c for v in H.edges[e]) for c in comps]
    for i in range(len(seen)):
        for j in range(i + 1, len(seen)):
            assert not seen[i] & seen[j]


def test_incidence_graph_layout():
    H = Hypergraph(3, {7: (0, 2)})
    inc = incidence_graph(H)
    node = inc.edge_node[7]
    assert node == 3 and inc.node_edge[node] == 7
    assert sorted(inc.neighbors(node)) == [0, 2]
    assert inc.is_edge_node(node) and not inc.is_edge_node(0)


def test_power_graph_of_path():
    P = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    P2 = power_graph(P, 2)
    assert sorted(P2.neighbors(0)) == [1, 2]
    assert P.distances_from([0]) == {0: 0, 1: 1, 2: 2, 3: 3}
    assert P.distances_from([0], limit=1) == {0: 0, 1: 1}


def test_seed_streams_are_reproducible_and_distinct():
    assert derive_seed(3, "x", 1) == derive_seed(3, "x", 1)
    assert derive_seed(3, "x", 1) != derive_seed(3, "x", 2)
    assert rng_for(1, "a").random() == rng_for(1, "a").random()


def test_total_weight_is_exact():
    a = {0: Fraction(1, 3), 1: Fraction(2, 3)}
    assert total_weight(a, [0, 1]) == 1
