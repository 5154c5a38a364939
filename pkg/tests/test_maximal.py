import math
import statistics
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypmatch.core import Hypergraph, is_matching, is_maximal_matching, residual
from hypmatch.maximal import (
    expected_sample_size,
    hmm,
    hmm_report,
    hmm_shattering,
    luby_mis_line_graph,
    sample_matching_report,
    sampling_probabilities,
    stage_budget,
)
from hypmatch.oracles.brute import matching_number
from hypmatch.oracles.generators import disjoint_edges, random_hypergraph, ring, star

from conftest import hypergraphs


@pytest.mark.parametrize("mode", ["det", "rand", "shatter"])
def test_trivial_cases(mode):
    D = disjoint_edges(6, 3)
    assert hmm(D, mode) == frozenset(D.edges)
    assert len(hmm(star(7), mode)) == 1
    assert hmm(Hypergraph(4, {}), mode) == frozenset()


def test_disjoint_edges_take_one_stage():
    assert hmm_report(disjoint_edges(6, 3)).stage_count == 1


@pytest.mark.parametrize("mode", ["det", "rand"])
def test_random_instance_is_maximal(mode):
    H = random_hypergraph(3, 5, 50, seed=1)
    run = hmm_report(H, mode, seed=2)
    assert is_maximal_matching(H, run.matching)
    assert run.stage_count <= stage_budget(H)
    sizes = [s["residual_edges"] for s in run.stages]
    assert sizes == sorted(sizes, reverse=True)


@given(hypergraphs(max_m=10, max_n=7))
def test_matching_number_decays_by_each_commit(H):
    run = hmm_report(H)
    M = frozenset()
    tau = matching_number(H)
    for stage in run.stages:
        M = M | set(stage["edges"])
        nxt = matching_number(residual(H, M))
        assert nxt <= tau - stage["committed"]
        tau = nxt
    assert tau == 0 and M == run.matching


def test_sampler_trivial_cases():
    assert sample_matching_report(Hypergraph(3, {}), 0).matching == frozenset()
    single = Hypergraph(2, {0: (0, 1)})
    p = sampling_probabilities(single)
    assert Fraction(1, 40) <= p[0] <= Fraction(1, 20)
    hits = sum(bool(sample_matching_report(single, s, p).matching) for s in range(4000))
    # Bernoulli(p) with p in [1/40, 1/20]; 4 sigma around the mean
    mean = 4000 * float(p[0])
    assert abs(hits - mean) <= 4 * math.sqrt(mean)


def test_expected_sample_size_closed_form():
    H = star(3)
    p = {e: Fraction(1, 10) for e in H.edges}
    assert expected_sample_size(H, p) == 3 * Fraction(1, 10) * Fraction(9, 10) ** 2


@given(hypergraphs(max_m=10), st.integers(0, 1000))
def test_sampler_output_is_a_matching(H, seed):
    res = sample_matching_report(H, seed)
    assert is_matching(H, res.matching) and res.matching <= res.sampled


def test_luby_on_a_ring():
    H = ring(20)
    bound = 10 * math.log2(20)
    for seed in range(100):
        res = luby_mis_line_graph(H, seed)
        assert res.finished and res.rounds <= bound
        assert is_maximal_matching(H, res.matching)


def test_luby_truncated():
    H = ring(30)
    res = luby_mis_line_graph(H, 1, max_rounds=1)
    assert res.rounds == 1 and is_matching(H, res.matching)


def test_shattering_is_componentwise():
    parts = [star(3), star(4), star(2)]
    edges, offset, eid = {}, 0, 0
    for S in parts:
        for vs in S.edges.values():
            edges[eid] = tuple(v + offset for v in vs)
            eid += 1
        offset += S.n
    U = Hypergraph(offset, edges)
    run = hmm_shattering(U, 3)
    assert is_maximal_matching(U, run.matching)
    assert len(run.matching) == len(parts)


def test_shattering_on_a_larger_instance():
    H = random_hypergraph(3, 6, 200, seed=4)
    run = hmm_shattering(H, 9)
    assert is_maximal_matching(H, run.matching)
    assert run.info["phase1_rounds"] <= 2 * math.ceil(math.log2(3 * 6)) + 1
    for sizes in run.info["phase2_sizes"]:
        assert sizes == sorted(sizes, reverse=True)


@settings(max_examples=20)
@given(hypergraphs(max_m=12), st.integers(0, 100), st.sampled_from(["det", "rand", "shatter"]))
def test_every_mode_is_maximal(H, seed, mode):
    assert is_maximal_matching(H, hmm(H, mode, seed=seed))
