"""Synchronous LOCAL-model simulator with round accounting and locality audits.

A :class:`LocalProgram` is three pure functions.  ``init`` builds a node's
state from its index, unique id and local input; ``step`` maps the previous
round's own state and neighbor states to the next state; ``output`` reads the
decision off a state.  Randomness is handed to ``step`` as a PRNG seeded from
``(seed, uid, round)``, so a run is reproducible and node-local.

Algorithms elsewhere in the package run centrally for speed.  They expose an
evaluation function ``inputs -> outputs`` together with a declared radius, and
:func:`locality_audit` checks the defining property of a T-round algorithm: a
node's output is unchanged by perturbations farther than T away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from .core import Graph, rng_for


class InvalidPerturbation(ValueError):
    """The perturbation touches a node within the audit radius."""


@dataclass(frozen=True)
class LocalProgram:
    init: Callable[[int, int, Any], Any]
    step: Callable[[int, Any, list, Any], Any]
    output: Callable[[Any], Any] = lambda state: state
    name: str = "program"


@dataclass
class RoundTrace:
    rounds: int = 0
    snapshots: list[tuple[int, dict[int, Any]]] = field(default_factory=list)

    def dump(self) -> str:
        lines = [f"ROUNDS {self.rounds}"]
        for rnd, states in self.snapshots:
            lines.append(f"ROUND {rnd}")
            lines.extend(f"S {u} {states[u]!r}" for u in sorted(states))
        return "\n".join(lines) + "\n"


def run(
    G: Graph,
    prog: LocalProgram,
    T: int,
    seed: int = 0,
    inputs: Mapping[int, Any] | None = None,
    uids: Mapping[int, int] | None = None,
    snapshot_every: int | None = None,
) -> tuple[dict[int, Any], RoundTrace]:
    """Execute ``T`` synchronous rounds of ``prog`` on ``G``."""
    if T < 0:
        raise ValueError("T must be nonnegative")
    inputs = inputs or {}
    uid = {u: (uids[u] if uids and u in uids else u) for u in G.nodes}
    state = {u: prog.init(u, uid[u], inputs.get(u)) for u in G.nodes}
    trace = RoundTrace()
    if snapshot_every:
        trace.snapshots.append((0, dict(state)))
    for rnd in range(1, T + 1):
        state = {
            u: prog.step(
                rnd,
                state[u],
                [state[w] for w in G.neighbors(u)],
                rng_for(seed, uid[u], rnd),
            )
            for u in G.nodes
        }
        trace.rounds += 1
        if snapshot_every and rnd % snapshot_every == 0:
            trace.snapshots.append((rnd, dict(state)))
    return {u: prog.output(state[u]) for u in G.nodes}, trace


@dataclass
class Perturbation:
    """New local inputs and/or unique ids for some nodes."""

    inputs: dict[int, Any] = field(default_factory=dict)
    uids: dict[int, int] = field(default_factory=dict)

    def nodes(self) -> set[int]:
        return set(self.inputs) | set(self.uids)


def check_perturbation(G: Graph, T: int, u: int, perturbation: Perturbation) -> None:
    near = G.distances_from([u], limit=T)
    touched = sorted(w for w in perturbation.nodes() if w in near)
    if touched:
        raise InvalidPerturbation(
            f"perturbation touches nodes {touched} within distance {T} of node {u}"
        )
    bad = [w for w in perturbation.nodes() if not 0 <= w < G.size]
    if bad:
        raise InvalidPerturbation(f"nodes {bad} are not in the graph")


def locality_audit(
    G: Graph,
    prog: LocalProgram | Callable[[dict, dict, int], Mapping[int, Any]],
    T: int,
    u: int,
    perturbation: Perturbation,
    seed: int = 0,
    inputs: Mapping[int, Any] | None = None,
    uids: Mapping[int, int] | None = None,
) -> bool:
    """True iff node ``u``'s output is unchanged by ``perturbation``.

    ``prog`` is either a :class:`LocalProgram` (run for ``T`` rounds) or a
    centrally implemented algorithm given as ``evaluate(inputs, uids, seed)``
    that claims radius ``T``.
    """
    check_perturbation(G, T, u, perturbation)
    base_inputs = dict(inputs or {})
    base_uids = dict(uids or {})
    new_inputs = {**base_inputs, **perturbation.inputs}
    new_uids = {**base_uids, **perturbation.uids}
    if isinstance(prog, LocalProgram):
        before = run(G, prog, T, seed, base_inputs, base_uids)[0]
        after = run(G, prog, T, seed, new_inputs, new_uids)[0]
    else:
        before = prog(base_inputs, base_uids, seed)
        after = prog(new_inputs, new_uids, seed)
    return before[u] == after[u]


def log_star(x: float) -> int:
    """Iterated base-2 logarithm; 0 for x <= 1."""
    count = 0
    while x > 1:
        x = math.log2(x)
        count += 1
    return count


# ----------------------------------------------------------------------
# small reference programs
# ----------------------------------------------------------------------
def max_id_program() -> LocalProgram:
    """Every node keeps the largest id seen so far."""
    return LocalProgram(
        init=lambda node, uid, _inp: uid,
        step=lambda _rnd, s, nbrs, _rng: max([s, *nbrs]),
        name="max-id",
    )


def bfs_program() -> LocalProgram:
    """Distance to the nearest node whose input is truthy (None while unknown)."""

    def step(_rnd, s, nbrs, _rng):
        known = [d for d in nbrs if d is not None]
        if not known:
            return s
        best = min(known) + 1
        return best if s is None else min(s, best)

    return LocalProgram(init=lambda node, uid, inp: 0 if inp else None, step=step, name="bfs")


def degree_program() -> LocalProgram:
    """After one round every node knows its degree; the local input is carried along."""

    def step(_rnd, s, nbrs, _rng):
        return (len(nbrs), s[1])

    return LocalProgram(
        init=lambda node, uid, inp: (0, inp), step=step, output=lambda s: s[0], name="degree"
    )


def random_bit_program() -> LocalProgram:
    """Each node draws a fresh random bit every round (exercises seeding)."""
    return LocalProgram(
        init=lambda node, uid, inp: None,
        step=lambda _rnd, s, nbrs, rng: rng.randrange(2),
        name="random-bit",
    )


BUILTIN_PROGRAMS = {
    "max-id": max_id_program,
    "bfs": bfs_program,
    "degree": degree_program,
    "random-bit": random_bit_program,
}
