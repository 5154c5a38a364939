import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypmatch.core import Graph
from hypmatch.localsim import (
    InvalidPerturbation,
    Perturbation,
    bfs_program,
    degree_program,
    locality_audit,
    log_star,
    max_id_program,
    random_bit_program,
    run,
)


def ring_graph(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def test_zero_rounds_returns_init():
    out, trace = run(ring_graph(4), max_id_program(), 0)
    assert out == {u: u for u in range(4)} and trace.rounds == 0


def test_max_id_on_path():
    P = Graph.from_edges(3, [(0, 1), (1, 2)])
    out, _ = run(P, max_id_program(), 1)
    assert out[1] == 2


def test_bfs_distances_on_ring():
    out, trace = run(ring_graph(8), bfs_program(), 4, inputs={0: True}, snapshot_every=2)
    assert out == {u: min(u, 8 - u) for u in range(8)}
    assert trace.rounds == 4 and [r for r, _ in trace.snapshots] == [0, 2, 4]


def test_degree_program_is_local():
    G = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert locality_audit(G, degree_program(), 1, 0, Perturbation(inputs={2: "x"}))


def test_perturbation_inside_radius_rejected():
    with pytest.raises(InvalidPerturbation):
        locality_audit(ring_graph(6), degree_program(), 1, 0, Perturbation(inputs={1: "x"}))


@given(st.integers(6, 16), st.integers(0, 2), st.integers(0, 50))
def test_t_round_program_ignores_far_ids(n, T, seed):
    G = ring_graph(n)
    far = (n // 2)
    if far <= T:
        return
    pert = Perturbation(uids={far: 1000 + far})
    assert locality_audit(G, max_id_program(), T, 0, pert, seed=seed)


def test_runs_are_reproducible():
    G = ring_graph(10)
    assert run(G, random_bit_program(), 3, seed=7)[0] == run(G, random_bit_program(), 3, seed=7)[0]


def test_log_star():
    assert [log_star(x) for x in (1, 2, 4, 16, 65536)] == [0, 1, 2, 3, 4]
