"""Path queries as directed Steiner forest instances.

A query whose atoms chain two output endpoints through non-output
attributes becomes a layered digraph: one layer per attribute, one node
per value, one unit-weight edge per tuple.  Result rows become demand
pairs, a witness becomes an edge set connecting every demand, and any
demand-connecting edge set pulls back to a witness of the same size.
"""
from __future__ import annotations

from dataclasses import dataclass

from .engine import evaluate
from .errors import NotALineQuery, UnreachableDemand
from .model import Database, Query, Row, Witness


@dataclass(frozen=True)
class DsfEdge:
    id: int
    source: str
    target: str
    weight: int
    relation: str
    row: Row


@dataclass(frozen=True)
class DsfInstance:
    chain: tuple[str, ...]
    relation_order: tuple[str, ...]
    nodes: tuple[str, ...]
    edges: tuple[DsfEdge, ...]
    demands: tuple[tuple[str, str], ...]


def _chain_order(query: Query) -> tuple[tuple[str, ...], tuple[str, ...]]:
    holders: dict[str, list[str]] = {}
    for schema in query.relations:
        if len(schema.attributes) != 2:
            raise NotALineQuery(f"{schema.name} is not binary")
        for a in schema.attributes:
            holders.setdefault(a, []).append(schema.name)
    for a, rels in holders.items():
        if len(rels) > 2:
            raise NotALineQuery(f"attribute {a} appears in more than two atoms")
    ends = sorted(a for a, rels in holders.items() if len(rels) == 1)
    if len(ends) != 2:
        raise NotALineQuery("atoms do not chain into a single path")
    if query.head_set != frozenset(ends):
        raise NotALineQuery("output attributes must be exactly the path endpoints")

    chain = [ends[0]]
    order: list[str] = []
    previous: str | None = None
    while True:
        candidates = [r for r in holders[chain[-1]] if r != previous]
        if not candidates:
            break
        previous = candidates[0]
        order.append(previous)
        other = [a for a in query.schema(previous).attributes if a != chain[-1]]
        chain.append(other[0])
    if len(order) != len(query.relations):
        raise NotALineQuery("atoms do not chain into a single path")
    return tuple(chain), tuple(order)


def line_to_dsf(query: Query, db: Database) -> DsfInstance:
    chain, order = _chain_order(query)
    nodes: set[str] = set()
    edges: list[DsfEdge] = []
    for hop, name in enumerate(order):
        for row in sorted(db.instances[name]):
            source = f"{hop}:{row[chain[hop]]}"
            target = f"{hop + 1}:{row[chain[hop + 1]]}"
            nodes.update((source, target))
            edges.append(DsfEdge(len(edges), source, target, 1, name, row))
    last = len(chain) - 1
    demands = sorted((f"0:{t[chain[0]]}", f"{last}:{t[chain[last]]}")
                     for t in evaluate(query, db))
    return DsfInstance(chain, order, tuple(sorted(nodes)), tuple(edges), tuple(demands))


def _reaches(instance: DsfInstance, target: str) -> set[str]:
    incoming: dict[str, list[DsfEdge]] = {}
    for edge in instance.edges:
        incoming.setdefault(edge.target, []).append(edge)
    seen = {target}
    frontier = [target]
    while frontier:
        node = frontier.pop()
        for edge in incoming.get(node, []):
            if edge.source not in seen:
                seen.add(edge.source)
                frontier.append(edge.source)
    return seen


def dsf_per_pair_paths(instance: DsfInstance) -> frozenset[int]:
    """One path per demand, each the lexicographically smallest among the
    demand's paths; returns the union of their edge ids."""
    outgoing: dict[str, list[DsfEdge]] = {}
    for edge in instance.edges:
        outgoing.setdefault(edge.source, []).append(edge)
    reach_cache: dict[str, set[str]] = {}
    chosen: set[int] = set()
    for source, target in instance.demands:
        if target not in reach_cache:
            reach_cache[target] = _reaches(instance, target)
        reach = reach_cache[target]
        if source not in reach:
            raise UnreachableDemand((source, target))
        node = source
        while node != target:
            step = min((e for e in outgoing[node] if e.target in reach),
                       key=lambda e: (e.target, e.id))
            chosen.add(step.id)
            node = step.target
    return frozenset(chosen)


def edges_connect_demands(instance: DsfInstance, edge_ids: frozenset[int]) -> bool:
    """Whether the edge selection routes every demand pair."""
    outgoing: dict[str, list[DsfEdge]] = {}
    for edge in instance.edges:
        if edge.id in edge_ids:
            outgoing.setdefault(edge.source, []).append(edge)
    for source, target in instance.demands:
        seen = {source}
        frontier = [source]
        found = False
        while frontier and not found:
            node = frontier.pop()
            for edge in outgoing.get(node, []):
                if edge.target == target:
                    found = True
                    break
                if edge.target not in seen:
                    seen.add(edge.target)
                    frontier.append(edge.target)
        if not found:
            return False
    return True


def witness_to_edge_ids(instance: DsfInstance, witness: Witness) -> frozenset[int]:
    return frozenset(e.id for e in instance.edges
                     if e.row in witness.tuples.get(e.relation, frozenset()))


def pull_back(query: Query, instance: DsfInstance, edge_ids: frozenset[int]) -> Witness:
    parts: dict[str, set[Row]] = {}
    for edge in instance.edges:
        if edge.id in edge_ids:
            parts.setdefault(edge.relation, set()).add(edge.row)
    return Witness.build(query, parts, "dsf")


def dsf_to_json_dict(instance: DsfInstance) -> dict:
    return {
        "spec": "1",
        "chain": list(instance.chain),
        "relation_order": list(instance.relation_order),
        "nodes": list(instance.nodes),
        "edges": [{
            "id": e.id,
            "from": e.source,
            "to": e.target,
            "weight": e.weight,
            "relation": e.relation,
            "row": dict(e.row.items),
        } for e in instance.edges],
        "demands": [{"from": s, "to": t} for s, t in instance.demands],
    }
