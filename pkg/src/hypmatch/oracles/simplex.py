"""Exact rational simplex for the fractional matching polytope.

The LP is ``max sum_e a(e) h(e)`` subject to ``sum_{e in N(v)} h(e) <= 1`` and
``h >= 0``.  The right-hand side is all ones, so the slack basis is feasible and
no phase one is needed.  Pivoting uses Bland's rule, which cannot cycle.  The
optimal tableau also yields an optimal dual vector, which callers can check
independently (dual feasibility plus equal objective certifies optimality).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..core import Hypergraph


class TooLarge(ValueError):
    """The instance exceeds an oracle's size cap."""


@dataclass
class LPInstance:
    """Row-per-vertex, column-per-edge view of the fractional matching LP."""

    rows: list[int]  # vertex ids with at least one incident edge
    columns: list[int]  # edge ids
    matrix: list[list[Fraction]]  # matrix[i][j] = 1 iff columns[j] contains rows[i]
    objective: list[Fraction]

    @classmethod
    def build(cls, H: Hypergraph, a: Mapping[int, Fraction]) -> "LPInstance":
        columns = list(H.edges)
        rows = [v for v in H.vertices if H.degree(v) > 0]
        index = {v: i for i, v in enumerate(rows)}
        matrix = [[Fraction(0)] * len(columns) for _ in rows]
        for j, e in enumerate(columns):
            for v in H.edges[e]:
                matrix[index[v]][j] = Fraction(1)
        return cls(rows, columns, matrix, [Fraction(a[e]) for e in columns])


@dataclass
class LPSolution:
    value: Fraction
    primal: dict[int, Fraction]  # edge id -> h(e)
    dual: dict[int, Fraction]  # vertex id -> y(v)
    pivots: int

    def dual_value(self) -> Fraction:
        return sum(self.dual.values(), Fraction(0))


def solve_packing(lp: LPInstance) -> LPSolution:
    """Maximize ``objective . x`` subject to ``matrix x <= 1``, ``x >= 0``."""
    m_rows = len(lp.rows)
    n_cols = len(lp.columns)
    width = n_cols + m_rows
    tableau = []
    for i in range(m_rows):
        row = list(lp.matrix[i]) + [Fraction(0)] * m_rows + [Fraction(1)]
        row[n_cols + i] = Fraction(1)
        tableau.append(row)
    # reduced-cost row for z - c.x = 0
    z = [-c for c in lp.objective] + [Fraction(0)] * m_rows + [Fraction(0)]
    basis = [n_cols + i for i in range(m_rows)]
    pivots = 0
    while True:
        entering = next((j for j in range(width) if z[j] < 0), None)
        if entering is None:
            break
        best = None
        for i in range(m_rows):
            coef = tableau[i][entering]
            if coef > 0:
                ratio = tableau[i][-1] / coef
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # cannot happen: every column has a positive entry
            raise ArithmeticError("unbounded fractional matching LP")
        leave = best[1]
        pivot_row = tableau[leave]
        pivot = pivot_row[entering]
        if pivot != 1:
            pivot_row = [x / pivot for x in pivot_row]
            tableau[leave] = pivot_row
        for i in range(m_rows):
            if i != leave:
                factor = tableau[i][entering]
                if factor:
                    row = tableau[i]
                    tableau[i] = [x - factor * p for x, p in zip(row, pivot_row)]
        factor = z[entering]
        z = [x - factor * p for x, p in zip(z, pivot_row)]
        basis[leave] = entering
        pivots += 1
    primal = {e: Fraction(0) for e in lp.columns}
    for i, var in enumerate(basis):
        if var < n_cols:
            primal[lp.columns[var]] = tableau[i][-1]
    dual = {v: z[n_cols + i] for i, v in enumerate(lp.rows)}
    return LPSolution(z[-1], primal, dual, pivots)


def exact_fractional_opt(
    H: Hypergraph, a: Mapping[int, Fraction], max_edges: int = 30, max_vertices: int = 30
) -> Fraction:
    """a*(H), the maximum weight of a fractional matching, as an exact rational."""
    return exact_fractional_solution(H, a, max_edges, max_vertices).value


def exact_fractional_solution(
    H: Hypergraph, a: Mapping[int, Fraction], max_edges: int = 30, max_vertices: int = 30
) -> LPSolution:
    lp = LPInstance.build(H, a)
    if len(lp.columns) > max_edges or len(lp.rows) > max_vertices:
        raise TooLarge(
            f"LP oracle capped at {max_edges} edges / {max_vertices} vertices, "
            f"got {len(lp.columns)} / {len(lp.rows)}"
        )
    return solve_packing(lp)


def check_dual(H: Hypergraph, a: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> bool:
    """Is y a feasible dual, i.e. y >= 0 and sum_{v in e} y(v) >= a(e) for all e?"""
    if any(val < 0 for val in y.values()):
        return False
    return all(sum((y.get(v, Fraction(0)) for v in vs), Fraction(0)) >= a[e] for e, vs in H.edges.items())
