from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypmatch.core import Hypergraph, is_matching, total_weight
from hypmatch.graphmatch import (
    Augmentation,
    EnumerationOverflow,
    NotDisjoint,
    NotValidAugmentation,
    augment,
    enumerate_augmentations,
    gain,
    gmwm,
    stage_parameters,
)
from hypmatch.oracles.brute import brute_augmentations, brute_force_mwm

from conftest import graphs

PATH4 = Hypergraph(4, {0: (0, 1), 1: (1, 2), 2: (2, 3)})


def weights(*ws):
    return {e: Fraction(w) for e, w in enumerate(ws)}


def edge_sets(P):
    return {frozenset(aug.edges) for aug in P.augmentations}


def test_empty_matching_lists_every_edge_as_a_short_path():
    P = enumerate_augmentations(PATH4, weights(1, 1, 1), frozenset(), 1)
    assert edge_sets(P) == {frozenset({0}), frozenset({1}), frozenset({2})}


def test_nothing_to_gain_from_an_optimal_matching():
    a = weights(1, 3, 1)
    assert not len(enumerate_augmentations(PATH4, a, {1}, 2))
    a = weights(2, 1, 2)
    assert not len(enumerate_augmentations(PATH4, a, {0, 2}, 3))


def test_three_edge_path_augmentation():
    a = weights(2, 1, 2)
    P = enumerate_augmentations(PATH4, a, {1}, 2)
    assert frozenset({0, 1, 2}) in edge_sets(P)
    best = max(P.augmentations, key=lambda p: p.gain)
    assert best.gain == 3 and best.kind == "path"
    assert augment(PATH4, a, {1}, [best]) == frozenset({0, 2})


def test_even_cycle():
    C4 = Hypergraph(4, {0: (0, 1), 1: (1, 2), 2: (2, 3), 3: (3, 0)})
    a = weights(10, 1, 10, 1)
    P = enumerate_augmentations(C4, a, {1, 3}, 2)
    cycles = [p for p in P.augmentations if p.kind == "cycle"]
    assert len(cycles) == 1 and cycles[0].gain == 18
    assert augment(C4, a, {1, 3}, cycles) == frozenset({0, 2})


def test_augment_identity_and_errors():
    a = weights(1, 1, 1)
    assert augment(PATH4, a, {1}, []) == frozenset({1})
    one = Augmentation((0,), "path", Fraction(1), frozenset({0, 1}))
    assert augment(PATH4, a, frozenset(), [one]) == frozenset({0})
    clash = Augmentation((1,), "path", Fraction(1), frozenset({1, 2}))
    with pytest.raises(NotDisjoint):
        augment(PATH4, a, frozenset(), [one, clash])
    with pytest.raises(NotValidAugmentation):
        augment(PATH4, a, {1}, [one])
    wrong_gain = Augmentation((0,), "path", Fraction(5), frozenset({0, 1}))
    with pytest.raises(NotValidAugmentation):
        augment(PATH4, a, frozenset(), [wrong_gain])


def test_gain():
    assert gain(weights(2, 1, 2), frozenset({1}), (0, 1, 2)) == 3


def test_stage_parameters():
    assert stage_parameters(Fraction(1, 4)) == (8, 89)
    with pytest.raises(ValueError):
        stage_parameters(1)


def test_overflow_cap():
    K = Hypergraph(6, {j: e for j, e in enumerate((u, v) for u in range(6) for v in range(u + 1, 6))})
    with pytest.raises(EnumerationOverflow):
        enumerate_augmentations(K, {e: Fraction(1) for e in K.edges}, frozenset(), 3, cap=10)


@st.composite
def graph_with_matching(draw):
    G = draw(graphs(max_n=7, max_m=9))
    a = {e: Fraction(draw(st.integers(1, 9)), draw(st.integers(1, 3))) for e in G.edges}
    M = set()
    for e in G.edges:
        if draw(st.booleans()) and is_matching(G, M | {e}):
            M.add(e)
    return G, a, frozenset(M)


@given(graph_with_matching(), st.integers(1, 2))
def test_enumeration_matches_exhaustive_scan(case, ell):
    G, a, M = case
    P = enumerate_augmentations(G, a, M, ell)
    assert edge_sets(P) == brute_augmentations(G, a, M, 2 * ell)
    assert len(edge_sets(P)) == len(P)
    for aug in P.augmentations:
        assert aug.gain == gain(a, M, aug.edges) > 0


@settings(max_examples=30)
@given(graphs(max_n=8, max_m=10), st.integers(0, 10**6))
def test_gmwm_quality_and_bookkeeping(G, seed):
    import random

    rng = random.Random(seed)
    a = {e: Fraction(rng.randint(1, 12), rng.randint(1, 4)) for e in G.edges}
    res = gmwm(G, a, Fraction(2, 3))
    assert is_matching(G, res.matching) and res.weight == total_weight(a, res.matching)
    weights_seen = [s["before"] for s in res.stages] + [res.weight]
    assert weights_seen == sorted(weights_seen) and len(set(weights_seen)) == len(weights_seen)
    opt = brute_force_mwm(G, a)[1]
    assert res.weight >= Fraction(1, 3) * opt
    if res.early_exit:
        assert not brute_augmentations(G, a, res.matching, 2 * res.ell)


def test_gmwm_rand_mode():
    G = Hypergraph(6, {0: (0, 1), 1: (1, 2), 2: (2, 3), 3: (3, 4), 4: (4, 5), 5: (5, 0)})
    a = weights(3, 1, 3, 1, 3, 1)
    res = gmwm(G, a, Fraction(1, 2), mode="rand", seed=5)
    assert is_matching(G, res.matching)
    assert res.weight >= Fraction(1, 2) * 9
