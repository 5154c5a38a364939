import random
from fractions import Fraction

from hypmatch.hooks import (
    audit_hook,
    degree_split_hook,
    good_coloring_hook,
    random_perturbation,
    sample_audits,
    simple_matching_hook,
)
from hypmatch.localsim import Perturbation
from hypmatch.oracles.generators import random_weights, ring


def test_hooks_evaluate_to_the_base_algorithm():
    H = ring(30, 2, seed=1)
    a = random_weights(H, 1)
    for hook in (good_coloring_hook(H), simple_matching_hook(H, a), degree_split_hook(H, a)):
        out = hook.evaluate(hook.base_inputs, {w: w for w in hook.inc.nodes}, 0)
        assert set(out) >= {hook.inc.edge_node[e] for e in H.edges}
        assert hook.radius >= 2


def test_far_perturbations_stay_far():
    H = ring(80, 3, seed=2)
    hook = simple_matching_hook(H, random_weights(H, 2, "rational"))
    u = hook.inc.edge_node[0]
    pert = random_perturbation(hook, u, random.Random(0))
    near = hook.inc.distances_from([u], limit=hook.radius)
    assert pert is not None and not set(pert.nodes()) & set(near)


def test_sampled_audits_pass_at_declared_radii():
    hooks = []
    for r, s in ((2, 1), (3, 2)):
        H = ring(80, r, seed=s)
        hooks += [good_coloring_hook(H), simple_matching_hook(H, random_weights(H, s, "rational")),
                  degree_split_hook(H, random_weights(H, s))]
    rows = sample_audits(hooks, 24, seed=3)
    assert len(rows) == 24 and all(row["passed"] for row in rows)
    assert {row["algorithm"] for row in rows} == {"good_coloring", "simple_matching", "degree_split"}


def test_audit_detects_a_too_small_radius():
    H = ring(80, 2, seed=1)
    hook = simple_matching_hook(H, random_weights(H, 1, "rational"))
    hook.radius = 1
    rng = random.Random(5)
    failures = 0
    for trial in range(30):
        u = hook.inc.edge_node[rng.randrange(H.m)]
        near = hook.inc.distances_from([u], limit=3)
        edges = [w for w in hook.inc.nodes if w >= H.n and w in near and near[w] > 1]
        pert = Perturbation(inputs={w: Fraction(rng.randint(1, 50)) for w in edges})
        failures += not audit_hook(hook, u, pert)
    assert failures > 0
