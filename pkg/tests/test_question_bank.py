import json
import random
import string

import pytest

from preassess.errors import MissingLeafQuestion, ParseError, UnknownLeaf
from preassess.question_bank import QuizItem, load_bank, normalize_answer


def test_normalize_collapses_whitespace():
    assert normalize_answer("SELECT  *\t FROM\n staff ;") == \
        "select * from staff"
    assert normalize_answer("  select * from staff") == "select * from staff"


def test_normalize_consumes_trailing_terminators():
    assert normalize_answer("select 1;") == "select 1"
    assert normalize_answer("select 1 ; ") == "select 1"
    assert normalize_answer("select 1;;;") == "select 1"
    assert normalize_answer("select 1 ; ;") == "select 1"
    # Semicolons inside the statement are untouched.
    assert normalize_answer("begin; select 1") == "begin; select 1"


def test_normalize_preserves_quoted_case():
    assert normalize_answer("SELECT name FROM staff WHERE name = 'Ann';") == \
        "select name from staff where name = 'Ann'"
    assert normalize_answer("UPDATE t SET x = 'O''Brien'") == \
        "update t set x = 'O''Brien'"


def test_normalize_unterminated_quote_keeps_tail_case():
    assert normalize_answer("SELECT 'Ann") == "select 'Ann"


def test_normalize_degenerate_inputs():
    assert normalize_answer("") == ""
    assert normalize_answer("   ") == ""
    assert normalize_answer(";") == ""
    assert normalize_answer(" ; ; ") == ""


def test_normalize_is_idempotent_on_random_strings():
    rng = random.Random(8)
    alphabet = string.ascii_letters + string.digits + " \t\n';*=,"
    for _ in range(1000):
        raw = "".join(
            rng.choice(alphabet) for _ in range(rng.randint(0, 40))
        )
        once = normalize_answer(raw)
        assert normalize_answer(once) == once


def test_item_marks_by_normalized_equality():
    item = QuizItem(
        leaf="x",
        prompt="?",
        accepted=[normalize_answer("SELECT * FROM staff")],
    )
    assert item.is_correct("select * from staff")
    assert item.is_correct("  SELECT   *   FROM   staff ;")
    assert not item.is_correct("select * from personnel")
    assert not item.is_correct("")


def test_sample_bank_covers_sample_graph(sample_bank, sample_graph):
    leaves = [
        leaf.id for parent in sample_graph.parents for leaf in parent.leaves
    ]
    assert sorted(sample_bank.items) == sorted(leaves)
    item = sample_bank.item_for("delete_select")
    assert item.is_correct(
        "DELETE FROM staff WHERE id IN (SELECT id FROM old_staff);"
    )
    assert not item.is_correct("delete from staff")


def test_quoted_answers_keep_case(sample_bank):
    item = sample_bank.item_for("insert_value")
    assert any("'Ann'" in accepted for accepted in item.accepted)
    assert not item.is_correct(
        next(a for a in item.accepted if "'Ann'" in a).replace("'Ann'", "'ann'")
    )


def test_item_for_unknown_leaf(sample_bank):
    with pytest.raises(UnknownLeaf):
        sample_bank.item_for("drop_table")


def bank_payload(sample_graph):
    return {
        leaf.id: {"prompt": f"write {leaf.id}", "accepted": ["select 1"]}
        for parent in sample_graph.parents
        for leaf in parent.leaves
    }


def test_load_bank_rejects_extra_leaf(sample_graph):
    payload = bank_payload(sample_graph)
    payload["ghost"] = {"prompt": "?", "accepted": ["x"]}
    with pytest.raises(UnknownLeaf):
        load_bank(json.dumps(payload), sample_graph)


def test_load_bank_rejects_missing_leaf(sample_graph):
    payload = bank_payload(sample_graph)
    del payload["update_where"]
    with pytest.raises(MissingLeafQuestion):
        load_bank(json.dumps(payload), sample_graph)


def test_load_bank_rejects_malformed_entries(sample_graph):
    with pytest.raises(ParseError):
        load_bank("not json", sample_graph)
    with pytest.raises(ParseError):
        load_bank("[]", sample_graph)

    payload = bank_payload(sample_graph)
    payload["update_where"] = {"prompt": "", "accepted": ["x"]}
    with pytest.raises(ParseError):
        load_bank(json.dumps(payload), sample_graph)

    payload = bank_payload(sample_graph)
    payload["update_where"] = {"prompt": "?", "accepted": []}
    with pytest.raises(ParseError):
        load_bank(json.dumps(payload), sample_graph)

    payload = bank_payload(sample_graph)
    payload["update_where"] = {"prompt": "?", "accepted": ["x", 3]}
    with pytest.raises(ParseError):
        load_bank(json.dumps(payload), sample_graph)


def test_load_bank_normalizes_accepted(sample_graph):
    payload = bank_payload(sample_graph)
    payload["update_set"] = {
        "prompt": "?",
        "accepted": ["  UPDATE t SET x = 1 ;"],
    }
    bank = load_bank(json.dumps(payload), sample_graph)
    assert bank.item_for("update_set").accepted == ["update t set x = 1"]
