#!/usr/bin/env python3
"""Tests for the semantic-memory store.

Covers:
- TSV parsing, node kinds and format errors with line numbers
- neighborhood queries (radius, excluded categories, unknown labels)
- dump/parse round trip and fixture counts
"""

from collections import Counter

import pytest
from check_fixture_counts import count
from conftest import KB_PATH, make_kb

from services.knowledge import (
    KnowledgeBase,
    KnowledgeFormatError,
    KnowledgeNode,
    NodeKind,
    Relation,
    dump_kb,
    load_kb,
    neighbors,
    normalize_label,
    parse_kb,
)

# ============================================================================
# Parsing
# ============================================================================


def test_parse_assigns_ids_in_first_mention_order():
    kb = make_kb("tea RelatedTo hot", "tea IS_A drink")
    assert [n.label for n in kb.nodes()] == ["tea", "hot", "drink"]
    assert [n.id for n in kb.nodes()] == [1, 2, 3]
    assert kb.stats() == (3, 2, 2)


def test_empty_text_gives_empty_kb():
    assert parse_kb("").stats() == (0, 0, 0)


def test_kind_lines_set_node_kind():
    kb = parse_kb("@kind\thot\tfeature\ntea\tHasProperty\thot\t0.9\n")
    kinds = {n.label: n.kind for n in kb.nodes()}
    assert kinds == {"tea": NodeKind.CONCEPT, "hot": NodeKind.FEATURE}


def test_labels_are_normalized():
    kb = parse_kb("Green  Tea\tIS_A\tDrink\t1.0\n")
    assert "green_tea" in kb
    assert kb.ids_for("GREEN TEA") == kb.ids_for("green_tea")
    assert normalize_label("  Iced   Tea ") == "iced_tea"


def test_comments_and_blank_lines_are_skipped():
    kb = parse_kb("# header\n\ntea\tIS_A\tdrink\t1.0\n   \n# trailing\n")
    assert kb.stats() == (2, 1, 1)


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("tea\tIS_A\tdrink\n", 1, "expected 4 tab-separated fields"),
        ("tea\tIS_A\tdrink\t1.0\ncup\tIS_A\tthing\tlots\n", 2, "weight is not a number"),
        ("tea\tIS_A\tdrink\t1.5\n", 1, "weight outside (0, 1]"),
        ("tea\tIS_A\tdrink\t0\n", 1, "weight outside (0, 1]"),
        ("tea\tIS_A\tdrink\t1.0\n#\ntea\tIS_A\tdrink\t0.5\n", 3, "first on line 1"),
        ("@kind\ttea\tgadget\ntea\tIS_A\tdrink\t1.0\n", 1, "unknown node kind"),
        ("@kind\tzebra\tconcept\ntea\tIS_A\tdrink\t1.0\n", 1, "dangling kind declaration"),
        ("@kind\ttea\tlemma\n@kind\ttea\tfeature\ntea\tIS_A\tdrink\t1.0\n", 2, "already declared"),
    ],
)
def test_format_errors_report_line(text, line, fragment):
    with pytest.raises(KnowledgeFormatError) as exc:
        parse_kb(text, "kb.tsv")
    assert exc.value.line == line
    assert fragment in str(exc.value)
    assert str(exc.value).startswith(f"kb.tsv:{line}: ")


def test_same_pair_in_two_categories_is_allowed():
    kb = make_kb("tea RelatedTo cup", "tea AtLocation cup")
    assert kb.stats() == (2, 2, 2)


def test_missing_file_is_a_format_error(tmp_path):
    with pytest.raises(KnowledgeFormatError, match="file not found"):
        load_kb(tmp_path / "nope.tsv")


def test_constructor_rejects_dangling_endpoints():
    with pytest.raises(ValueError, match="Dangling"):
        KnowledgeBase([KnowledgeNode(1, "tea", NodeKind.CONCEPT)], [Relation(1, "IS_A", 2)])


# ============================================================================
# Neighborhoods
# ============================================================================


def test_neighbors_are_undirected_and_exclude_query():
    kb = make_kb("tea RelatedTo hot", "tea IS_A drink", "coffee IS_A drink")
    assert neighbors(kb, "tea") == {"hot", "drink"}
    assert neighbors(kb, "drink") == {"tea", "coffee"}


def test_radius_two_reaches_further():
    kb = make_kb("tea RelatedTo hot", "tea IS_A drink", "coffee IS_A drink")
    assert kb.neighbors("tea", radius=2) == {"hot", "drink", "coffee"}


def test_is_a_chain_by_hops():
    kb = make_kb("apple IS_A fruit", "fruit IS_A food")
    assert kb.neighbors("apple", radius=1) == {"fruit"}
    assert kb.neighbors("apple", radius=2) == {"fruit", "food"}


def test_radius_below_one_rejected():
    with pytest.raises(ValueError):
        make_kb("tea IS_A drink").neighbors("tea", radius=0)


def test_unknown_label_has_no_neighbors():
    assert make_kb("tea IS_A drink").neighbors("zzz") == set()


def test_excluded_categories_are_not_traversed():
    kb = make_kb("tea RelatedTo hot", "tea IS_A drink")
    assert kb.neighbors("tea", exclude=["RelatedTo"]) == {"drink"}


def test_self_loop_does_not_add_query():
    kb = make_kb("tea RelatedTo tea", "tea IS_A drink")
    assert kb.neighbors("tea") == {"drink"}


def test_fixture_neighborhood_of_cold(kb):
    assert kb.neighbors("cold") == {
        "hot", "warm", "winter", "weather", "ice", "shiver", "comfort", "flu", "chill",
    }


# ============================================================================
# Round trip & fixture
# ============================================================================


def _relation_multiset(kb: KnowledgeBase) -> Counter:
    return Counter(
        (kb.node(r.source).label, r.category, kb.node(r.target).label, r.weight)
        for r in kb.relations()
    )


def test_dump_then_parse_preserves_graph(kb):
    again = parse_kb(dump_kb(kb))
    assert again.stats() == kb.stats()
    assert _relation_multiset(again) == _relation_multiset(kb)
    assert {(n.label, n.kind) for n in again.nodes()} == {(n.label, n.kind) for n in kb.nodes()}


def test_fixture_counts_match_text_scan(kb):
    assert kb.stats() == count(KB_PATH) == (144, 213, 17)


def test_default_instance_is_cached():
    assert KnowledgeBase.get_instance() is KnowledgeBase.get_instance()
