from fractions import Fraction

import pytest
from hypothesis import given

from hypmatch.core import Hypergraph, is_matching, total_weight, unit_weights
from hypmatch.oracles import (
    InfeasibleParams,
    TooLarge,
    brute_force_mwm,
    check_dual,
    dense_splitting_instance,
    disjoint_edges,
    exact_fractional_opt,
    exact_fractional_solution,
    exhaustive_mwm,
    generate,
    matching_number,
    monte_carlo_expectation,
    random_hypergraph,
    random_weights,
    ring,
    star,
    union_of_forests,
)

from conftest import weighted_hypergraphs


def test_triangle_lp_value_is_three_halves():
    T = Hypergraph(3, {0: (0, 1), 1: (1, 2), 2: (0, 2)})
    assert exact_fractional_opt(T, unit_weights(T)) == Fraction(3, 2)
    assert matching_number(T) == 1


@given(weighted_hypergraphs(max_m=9))
def test_branch_and_bound_matches_subset_enumeration(Ha):
    H, a = Ha
    M, value = brute_force_mwm(H, a)
    assert is_matching(H, M) and total_weight(a, M) == value
    assert value == exhaustive_mwm(H, a)


@given(weighted_hypergraphs(max_m=8))
def test_lp_duality_certificate(Ha):
    H, a = Ha
    sol = exact_fractional_solution(H, a)
    assert check_dual(H, a, sol.dual)
    assert sum(sol.dual.values(), Fraction(0)) == sol.value
    assert sol.value >= brute_force_mwm(H, a)[1]


def test_oracle_caps():
    H = disjoint_edges(20)
    with pytest.raises(TooLarge):
        exact_fractional_opt(H, unit_weights(H))
    with pytest.raises(TooLarge):
        brute_force_mwm(disjoint_edges(31), unit_weights(disjoint_edges(31)))


def test_generators_respect_bounds():
    H = random_hypergraph(3, 4, 30, seed=1)
    assert H.actual_rank() <= 3 and H.actual_max_degree() <= 4 and H.m == 30
    U = random_hypergraph(3, 4, 10, seed=1, uniform=True)
    assert all(len(vs) == 3 for vs in U.edges.values())
    assert random_hypergraph(3, 4, 30, seed=1) == H
    with pytest.raises(InfeasibleParams):
        random_hypergraph(3, 1, 10, seed=0, n=3)


def test_forest_witness_orientation():
    G, witness = union_of_forests(3, 20, seed=4)
    out = [0] * G.n
    for e, (child, parent) in witness.items():
        assert set(G.edges[e]) == {child, parent}
        out[child] += 1
    assert max(out) <= 3


def test_dense_instance_reaches_degree():
    H = dense_splitting_instance(max_degree=64, r=3, n=8, seed=0)
    assert H.max_degree == 64 and H.actual_max_degree() >= 60


def test_small_generators():
    assert star(4).m == 4 and star(4).actual_max_degree() == 4
    assert ring(6, 3).actual_max_degree() == 3
    assert generate("disjoint", {"count": 3, "r": 2}, 0).m == 3
    w = random_weights(ring(5), 2, "rational")
    assert all(x > 0 for x in w.values())


def test_monte_carlo_mean_and_error():
    mean, err = monte_carlo_expectation(lambda s: s % 2, float, 1000, seed=0)
    assert abs(mean - 0.5) < 0.1 and 0 < err < 0.05
