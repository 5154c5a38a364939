"""Seeded instance generators.

Every generator is a pure function of its parameters and seed.
"""

from __future__ import annotations

from fractions import Fraction

from ..core import Hypergraph, rng_for


class InfeasibleParams(ValueError):
    """The requested instance cannot be built with these parameters."""


def random_hypergraph(
    r: int,
    max_degree: int,
    m: int,
    seed: int,
    n: int | None = None,
    uniform: bool = False,
    min_size: int = 1,
) -> Hypergraph:
    """Random hypergraph with ``m`` edges, every |e| <= r and every deg(v) <= max_degree.

    Edge sizes are exactly ``r`` when ``uniform`` is set and uniform in
    ``[min_size, r]`` otherwise.  The vertex count defaults to a value that
    leaves some slack under the degree cap.
    """
    if r < 1 or max_degree < 1 or m < 0:
        raise InfeasibleParams("r, max_degree must be positive and m nonnegative")
    if n is None:
        n = max(r, -(-5 * m * r // (4 * max_degree)))
    if r > n:
        raise InfeasibleParams(f"rank {r} exceeds vertex count {n}")
    rng = rng_for(seed, "random_hypergraph", r, max_degree, m, n, uniform, min_size)
    degree = [0] * n
    edges = []
    for eid in range(m):
        size = r if uniform else rng.randint(min(min_size, r), r)
        free = [v for v in range(n) if degree[v] < max_degree]
        if len(free) < size:
            raise InfeasibleParams(
                f"only {len(free)} vertices below the degree cap after {eid} edges"
            )
        verts = rng.sample(free, size)
        for v in verts:
            degree[v] += 1
        edges.append((eid, verts))
    return Hypergraph(n, edges, rank=r, max_degree=max_degree)


def ring(n: int, r: int = 2, seed: int | None = None) -> Hypergraph:
    """Cyclic hypergraph: edge j joins r consecutive vertices starting at j.

    With a seed, vertex labels and edge ids are shuffled, which keeps greedy
    priority chains short (useful for locality audits).
    """
    if n < max(3, r):
        raise InfeasibleParams("a ring needs at least max(3, r) vertices")
    vlabel = list(range(n))
    elabel = list(range(n))
    if seed is not None:
        rng = rng_for(seed, "ring", n, r)
        rng.shuffle(vlabel)
        rng.shuffle(elabel)
    edges = [(elabel[j], [vlabel[(j + k) % n] for k in range(r)]) for j in range(n)]
    return Hypergraph(n, edges, rank=r)


def disjoint_edges(count: int, r: int = 2) -> Hypergraph:
    return Hypergraph(count * r, [(j, range(j * r, (j + 1) * r)) for j in range(count)], rank=r)


def star(k: int) -> Hypergraph:
    return Hypergraph(k + 1, [(j, (0, j + 1)) for j in range(k)], rank=2)


def union_of_forests(
    lam: int, n: int, seed: int, attach_prob: float = 0.9
) -> tuple[Hypergraph, dict[int, tuple[int, int]]]:
    """Multigraph formed by ``lam`` random forests, plus a witness orientation.

    In each forest the vertices are visited in random order and each vertex
    after the first attaches to a uniformly random earlier vertex with
    probability ``attach_prob``.  Orienting every edge from child to parent
    gives out-degree at most ``lam``, so the arboricity is at most ``lam``.
    """
    if lam < 1 or n < 2:
        raise InfeasibleParams("need lam >= 1 and n >= 2")
    rng = rng_for(seed, "forests", lam, n, attach_prob)
    edges = []
    witness = {}
    for _ in range(lam):
        order = list(range(n))
        rng.shuffle(order)
        for k in range(1, n):
            if rng.random() < attach_prob:
                child, parent = order[k], order[rng.randrange(k)]
                eid = len(edges)
                edges.append((eid, (child, parent)))
                witness[eid] = (child, parent)
    return Hypergraph(n, edges, rank=2), witness


def dense_splitting_instance(
    max_degree: int = 2048, r: int = 3, n: int = 12, seed: int = 0
) -> Hypergraph:
    """A small-n multi-hypergraph whose degrees reach ``max_degree``.

    Edges are r-sets drawn with probability proportional to the remaining
    degree capacity, until fewer than r vertices have capacity left.
    """
    if n < r:
        raise InfeasibleParams("need n >= r")
    rng = rng_for(seed, "dense", max_degree, r, n)
    capacity = [max_degree] * n
    edges = []
    while True:
        alive = [v for v in range(n) if capacity[v] > 0]
        if len(alive) < r:
            break
        chosen: list[int] = []
        pool = alive[:]
        for _ in range(r):
            total = sum(capacity[v] for v in pool)
            pick = rng.randrange(total)
            for idx, v in enumerate(pool):
                pick -= capacity[v]
                if pick < 0:
                    chosen.append(v)
                    pool.pop(idx)
                    break
        for v in chosen:
            capacity[v] -= 1
        edges.append((len(edges), chosen))
    return Hypergraph(n, edges, rank=r, max_degree=max_degree)


def random_weights(
    H: Hypergraph, seed: int, kind: str = "int", high: int = 10, den: int = 7
) -> dict[int, Fraction]:
    """Random positive weights: integers in [1, high], or rationals p/q with q <= den."""
    rng = rng_for(seed, "weights", kind, high, den)
    out = {}
    for e in H.edges:
        if kind == "int":
            out[e] = Fraction(rng.randint(1, high))
        elif kind == "rational":
            out[e] = Fraction(rng.randint(1, high * den), rng.randint(1, den))
        elif kind == "unit":
            out[e] = Fraction(1)
        else:
            raise ValueError(f"unknown weight kind {kind!r}")
    return out


def generate(kind: str, params: dict, seed: int) -> Hypergraph:
    """Dispatch by name, as used by the command line and experiment specs."""
    params = dict(params)
    if kind == "random":
        return random_hypergraph(seed=seed, **params)
    if kind == "ring":
        return ring(seed=seed if params.pop("shuffle", False) else None, **params)
    if kind == "forests":
        return union_of_forests(seed=seed, **params)[0]
    if kind == "dense":
        return dense_splitting_instance(seed=seed, **params)
    if kind == "disjoint":
        return disjoint_edges(**params)
    if kind == "star":
        return star(**params)
    raise InfeasibleParams(f"unknown generator {kind!r}")
