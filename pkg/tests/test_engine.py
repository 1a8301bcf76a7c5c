"""Join evaluation against an independent nested-loop reference."""
import random

import pytest

from witness_lab.engine import evaluate, full_join_results, is_witness
from witness_lab.errors import NotASubDatabase
from witness_lab.model import Database, Row, Witness
from witness_lab.qparser import parse_query

from corpus import (
    CATALOG,
    WORKED_RESULTS,
    WORKED_SINGLE_WITNESS,
    build_db,
    worked_example,
    naive_evaluate,
    random_db,
    random_query,
    rows_to_tuples,
)


def test_worked_example_results_frozen():
    query, db = worked_example()
    assert rows_to_tuples(query, evaluate(query, db)) == WORKED_RESULTS


def test_empty_relation_empties_result():
    query, db = worked_example()
    hollow = Database({**db.instances, "R3": frozenset()})
    assert evaluate(query, hollow) == frozenset()


def test_boolean_query_yields_empty_row():
    query = parse_query("Q() :- R(A, B)")
    db = Database.build(query, {"R": [{"A": "1", "B": "2"}]})
    assert evaluate(query, db) == frozenset({Row(())})
    assert evaluate(query, Database.build(query, {})) == frozenset()


@pytest.mark.parametrize("name,text,_", CATALOG, ids=[c[0] for c in CATALOG])
def test_matches_reference_on_catalog(name, text, _):
    query = parse_query(text)
    rng = random.Random(hash(name) & 0xFFFF)
    for _round in range(5):
        db = random_db(query, rng)
        assert rows_to_tuples(query, evaluate(query, db)) == naive_evaluate(query, db)


def test_matches_reference_on_random_queries():
    rng = random.Random(411)
    for _ in range(150):
        query = random_query(rng)
        db = random_db(query, rng, max_rows=4)
        assert rows_to_tuples(query, evaluate(query, db)) == naive_evaluate(query, db)


def test_full_join_binds_every_attribute():
    query, db = worked_example()
    rows = full_join_results(query, db)
    assert len(rows) == len(set(rows))
    for row in rows:
        assert set(row.attributes) == set(query.attributes)
        for schema in query.relations:
            assert row.project(schema.attributes) in db.instances[schema.name]


def test_full_join_fixed_restricts_to_one_result():
    query, db = worked_example()
    fixed = Row.make({"A": "a1", "C": "c1", "F": "f1"})
    rows = full_join_results(query, db, fixed=fixed)
    assert rows
    for row in rows:
        assert row.project(query.head) == fixed
    assert full_join_results(query, db, fixed=Row.make(
        {"A": "a1", "C": "c2", "F": "f1"})) == []


def test_is_witness_accepts_single_result_cover():
    query, db = worked_example()
    single = {name: {Row.make(dict(zip(query.schema(name).attributes, row)))
                     for row in rows}
              for name, rows in WORKED_SINGLE_WITNESS.items()}
    witness = Witness.build(query, single, "frozen")
    sub_query = query  # same body, restricted data
    assert not is_witness(sub_query, db, witness)  # misses two results
    full = Witness.build(query, db.instances, "copy")
    assert is_witness(query, db, full)


def test_is_witness_rejects_foreign_tuples():
    query, db = worked_example()
    alien = Witness.build(query, {"R1": [Row.make({"A": "zz", "B": "zz"})]}, "bad")
    with pytest.raises(NotASubDatabase):
        is_witness(query, db, alien)


def test_is_witness_empty_on_empty_result():
    query = parse_query("Q(A) :- R(A, B), S(B)")
    db = Database.build(query, {"R": [{"A": "1", "B": "2"}]})  # S empty
    assert is_witness(query, db, Witness.build(query, {}, "empty"))
