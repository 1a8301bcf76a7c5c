"""Exact fractional edge covers.

The LP (minimise total weight, every attribute covered by weight >= 1,
weights in [0, 1]) is solved with a small two-phase simplex over
`fractions.Fraction`, so the optimum comes back as an exact rational.
Bland's rule keeps the pivoting finite.
"""
from __future__ import annotations

from fractions import Fraction

from .model import Query

_ZERO = Fraction(0)
_ONE = Fraction(1)


class _Unbounded(Exception):
    pass


def _pivot(tableau: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    pivot = tableau[row][col]
    tableau[row] = [v / pivot for v in tableau[row]]
    for r, current in enumerate(tableau):
        if r != row and current[col] != 0:
            factor = current[col]
            tableau[r] = [a - factor * b for a, b in zip(current, tableau[row])]
    basis[row] = col


def _run_simplex(tableau: list[list[Fraction]], basis: list[int], cost: list[Fraction]) -> None:
    m = len(tableau)
    n = len(cost)
    while True:
        cb = [cost[basis[i]] for i in range(m)]
        entering = None
        for j in range(n):
            if j in basis:
                continue
            reduced = cost[j] - sum(cb[i] * tableau[i][j] for i in range(m))
            if reduced < 0:
                entering = j  # Bland: smallest improving index
                break
        if entering is None:
            return
        leaving = None
        best: Fraction | None = None
        for i in range(m):
            if tableau[i][entering] > 0:
                ratio = tableau[i][-1] / tableau[i][entering]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best = ratio
                    leaving = i
        if leaving is None:
            raise _Unbounded
        _pivot(tableau, basis, leaving, entering)


def lp_min(rows: list[list[Fraction]], rhs: list[Fraction], cost: list[Fraction]) -> tuple[Fraction, list[Fraction]]:
    """min cost . x  subject to  rows . x = rhs, x >= 0, rhs >= 0."""
    m = len(rows)
    n = len(cost)
    tableau = [list(rows[i]) + [_ZERO] * m + [rhs[i]] for i in range(m)]
    for i in range(m):
        tableau[i][n + i] = _ONE
    basis = list(range(n, n + m))

    phase1 = [_ZERO] * n + [_ONE] * m
    _run_simplex(tableau, basis, phase1)
    if sum(tableau[i][-1] for i in range(m) if basis[i] >= n) != 0:
        raise ValueError("infeasible linear program")

    # Pivot any degenerate artificial out of the basis, or drop its row.
    for i in range(m - 1, -1, -1):
        if basis[i] >= n:
            col = next((j for j in range(n) if tableau[i][j] != 0), None)
            if col is None:
                del tableau[i]
                del basis[i]
            else:
                _pivot(tableau, basis, i, col)
    m = len(tableau)
    tableau = [row[:n] + [row[-1]] for row in tableau]

    _run_simplex(tableau, basis, list(cost))
    x = [_ZERO] * n
    for i in range(m):
        x[basis[i]] = tableau[i][-1]
    return sum(c * v for c, v in zip(cost, x)), x


def fractional_edge_cover(query: Query) -> Fraction:
    """Smallest total relation weight covering every attribute at least once,
    weights within [0, 1].  Exact rational."""
    rels = query.relations
    attrs = query.attributes
    m = len(rels)
    n = m + len(attrs) + m  # weights, coverage surplus, cap slack

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for k, attr in enumerate(attrs):
        row = [_ZERO] * n
        for i, rel in enumerate(rels):
            if attr in rel.attribute_set:
                row[i] = _ONE
        row[m + k] = -_ONE
        rows.append(row)
        rhs.append(_ONE)
    for i in range(m):
        row = [_ZERO] * n
        row[i] = _ONE
        row[m + len(attrs) + i] = _ONE
        rows.append(row)
        rhs.append(_ONE)

    cost = [_ONE] * m + [_ZERO] * (n - m)
    value, _ = lp_min(rows, rhs, cost)
    return value


def agm_bound_holds(witness_size: int, result_count: int, rho: Fraction) -> bool:
    """Check witness_size >= result_count ** (1/rho) in exact integers:
    size^num >= count^den for rho = num/den."""
    if result_count == 0:
        return True
    return witness_size ** rho.numerator >= result_count ** rho.denominator
