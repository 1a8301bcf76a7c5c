"""Witness construction.

The shared core walks the components of the existential graph: atoms
made of output attributes alone contribute the projections of the result
set, and every other component contributes, per projected result, the
single cheapest full join result of its subquery.  That procedure is
optimal on head-cluster queries and within a factor of twice the atom
count under head domination.  A greedy cover loop handles queries with
one non-output attribute, and the baseline unions one single-result
witness per result row.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .densest import min_price_candidate
from .engine import evaluate, full_join_results
from .errors import InternalInconsistency, PreconditionViolated, ResultNotFound
from .linprog import fractional_edge_cover
from .model import Database, Query, Row, Witness
from .structure import existential_components, has_head_cluster, has_head_domination, join_tree


@dataclass(frozen=True)
class SolveReport:
    """A witness plus the context needed to judge it."""

    witness: Witness
    algorithm: str
    db_size: int
    result_count: int
    claimed_ratio_bound: Fraction | float | None
    rho_star: Fraction | None = None

    @property
    def witness_size(self) -> int:
        return self.witness.size

    def to_json_dict(self) -> dict:
        bound: object
        if self.claimed_ratio_bound is None:
            bound = None
        elif isinstance(self.claimed_ratio_bound, Fraction):
            bound = str(self.claimed_ratio_bound)
        else:
            bound = self.claimed_ratio_bound
        return {
            "algorithm": self.algorithm,
            "witness_size": self.witness_size,
            "db_size": self.db_size,
            "result_count": self.result_count,
            "claimed_ratio_bound": bound,
            "rho_star": str(self.rho_star) if self.rho_star is not None else None,
        }


def witness_for_result(query: Query, db: Database, result: Row) -> Witness:
    """One tuple per relation reproducing a single result row: the
    lexicographically smallest full join result projecting onto it."""
    if set(result.attributes) != query.head_set:
        raise ValueError(f"{result} is not a row over the head attributes")
    matches = full_join_results(query, db, fixed=result)
    if not matches:
        raise ResultNotFound(result)
    best = matches[0]
    parts = {r.name: [best.project(r.attributes)] for r in query.relations}
    return Witness.build(query, parts, "single_result")


def _head_only_parts(query: Query, results: frozenset[Row]) -> dict[str, set[Row]]:
    """Atoms inside the head contribute exactly the result projections;
    every witness must contain them."""
    parts: dict[str, set[Row]] = {}
    for schema in query.relations:
        if schema.attribute_set <= query.head_set:
            parts[schema.name] = {t.project(schema.attributes) for t in results}
    return parts


def _component_walk(query: Query, db: Database, algorithm: str) -> Witness:
    results = evaluate(query, db)
    parts: dict[str, set[Row]] = {}
    if results:
        parts = _head_only_parts(query, results)
        for comp in existential_components(query):
            sub = query.subquery(comp.output_attributes, comp.relations)
            sub_db = db.restrict(comp.relations)
            for projected in sorted({t.project(comp.output_attributes) for t in results}):
                piece = witness_for_result(sub, sub_db, projected)
                for name, rows in piece.tuples.items():
                    parts.setdefault(name, set()).update(rows)
    return Witness.build(query, parts, algorithm)


def _report(query: Query, db: Database, witness: Witness,
            bound: Fraction | float | None, rho: Fraction | None = None) -> SolveReport:
    return SolveReport(
        witness=witness,
        algorithm=witness.algorithm,
        db_size=db.size,
        result_count=len(evaluate(query, db)),
        claimed_ratio_bound=bound,
        rho_star=rho,
    )


def solve_exact_head_cluster(query: Query, db: Database) -> SolveReport:
    """Minimum witness for queries where every existential component is
    dominated by each of its members."""
    if not has_head_cluster(query):
        raise PreconditionViolated("query is not head-cluster")
    witness = _component_walk(query, db, "exact")
    return _report(query, db, witness, Fraction(1))


def solve_approx_head_domination(query: Query, db: Database) -> SolveReport:
    """Witness within 2 * (number of atoms) of the optimum for queries
    whose existential components all have a dominating relation."""
    if not has_head_domination(query):
        raise PreconditionViolated("query is not head-dominated")
    witness = _component_walk(query, db, "approx")
    return _report(query, db, witness, Fraction(2 * len(query.relations)))


def solve_greedy_single_nonoutput(query: Query, db: Database) -> SolveReport:
    """Price-driven cover for queries with exactly one non-output
    attribute.  Repeatedly buys the globally cheapest tuple selection at
    a single join value (ties to the smallest value) until every result
    is reproduced.  Logarithmic approximation in the result count."""
    if len(query.non_output) != 1:
        raise PreconditionViolated("query must have exactly one non-output attribute")
    b_attr = query.non_output[0]
    results = evaluate(query, db)
    parts = _head_only_parts(query, results)
    b_values = sorted({row[b_attr]
                       for schema in query.relations if b_attr in schema.attribute_set
                       for row in db.instances[schema.name]})
    covered: frozenset[Row] = frozenset()
    while covered != results:
        best = None
        for b_value in b_values:
            candidate = min_price_candidate(query, db, b_value, covered, results)
            if candidate is not None and (best is None or candidate.price < best.price):
                best = candidate
        if best is None:
            raise InternalInconsistency("uncovered results reachable at no join value")
        for name, rows in best.subsets.items():
            parts.setdefault(name, set()).update(rows)
        covered |= best.new_results
    witness = Witness.build(query, parts, "greedy")
    bound = 1.0 + math.log(max(1, len(results)))
    return _report(query, db, witness, bound)


def solve_baseline_union(query: Query, db: Database) -> SolveReport:
    """Union of one single-result witness per result row.  Size is at most
    (number of atoms) * min(N, result count); the claimed ratio bound is
    N ** (1 - 1/rho) for the fractional edge cover number rho."""
    results = evaluate(query, db)
    parts: dict[str, set[Row]] = {}
    for t in sorted(results):
        piece = witness_for_result(query, db, t)
        for name, rows in piece.tuples.items():
            parts.setdefault(name, set()).update(rows)
    witness = Witness.build(query, parts, "baseline")
    rho = fractional_edge_cover(query)
    bound = float(db.size) ** float(1 - Fraction(1) / rho) if db.size else 0.0
    return _report(query, db, witness, bound, rho)


def remove_dangling(query: Query, db: Database) -> Database:
    """Drop tuples joining into no full result.  Full acyclic queries
    only: one semijoin sweep towards the join-tree root and one back."""
    if not query.is_full:
        raise PreconditionViolated("dangling removal requires a full query")
    tree = join_tree(query)
    if tree is None:
        raise PreconditionViolated("dangling removal requires an acyclic query")
    instances = {name: set(rows) for name, rows in db.instances.items()}

    def semijoin(keep: str, against: str) -> None:
        shared = sorted(query.schema(keep).attribute_set & query.schema(against).attribute_set)
        present = {row.project(shared) for row in instances[against]}
        instances[keep] = {row for row in instances[keep] if row.project(shared) in present}

    for child, parent in tree.parents:  # ears removed leaf-first
        semijoin(parent, child)
    for child, parent in reversed(tree.parents):
        semijoin(child, parent)
    return Database({name: frozenset(rows) for name, rows in instances.items()})
