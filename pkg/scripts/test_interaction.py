#!/usr/bin/env python3
"""Tests for templated responses and the utterance -> skill -> execution pipeline."""

import pytest
from conftest import make_world, table

from services.interaction import (
    Intent,
    ResponseTemplate,
    TemplateError,
    handle_utterance,
    humanize,
    load_templates,
    respond,
)


@pytest.fixture
def handle(kb, lib, lexicon, templates, config):
    def call(text, world, **overrides):
        cfg = config.model_copy(update=overrides) if overrides else config
        return handle_utterance(text, kb, world, lib, cfg, lexicon, templates)

    return call


# ============================================================================
# Templates
# ============================================================================


def test_shipped_templates_cover_every_intent(templates):
    assert set(templates) == set(Intent)
    assert templates[Intent.MISSING_OBJECT].slots == {"object"}
    assert templates[Intent.NO_ASSOCIATION].slots == set()
    assert templates[Intent.TIMED_OUT].slots == {"skill", "object"}


def test_humanize_splits_camel_case():
    assert humanize("TeaMaking") == "Tea Making"
    assert humanize("SandwichMaking") == "Sandwich Making"
    assert humanize("Bread1") == "Bread1"
    assert humanize(3) == "3"


def test_respond_fills_slots(templates):
    assert respond(templates[Intent.SKILL_STARTED], {"skill": "TeaMaking"}) == (
        "Starting Tea Making Skill."
    )


def test_respond_requires_every_slot():
    template = ResponseTemplate(Intent.MISSING_OBJECT, "I cannot find the {object}.")
    with pytest.raises(TemplateError, match="object"):
        respond(template, {"skill": "TeaMaking"})


@pytest.mark.parametrize(
    "body, fragment",
    [
        ("done\tFinished.\n", "no template for"),
        ("dance\tLet's dance.\n", "unknown intent 'dance'"),
        ("done Finished.\n", "expected intent<TAB>template"),
        ("done\t  \n", "expected intent<TAB>template"),
    ],
)
def test_bad_template_files(tmp_path, body, fragment):
    path = tmp_path / "templates.tsv"
    path.write_text(body, encoding="utf-8")
    with pytest.raises(TemplateError, match=fragment):
        load_templates(path)


def test_missing_template_file(tmp_path):
    with pytest.raises(TemplateError, match="not found"):
        load_templates(tmp_path / "none.tsv")


# ============================================================================
# Pipeline
# ============================================================================


def test_cold_makes_tea(handle, scenario):
    result = handle("It is cold outside", scenario("kitchen"))

    assert result.outcome == "done"
    assert result.decision.tagged_words == ["cold"]
    assert result.decision.winning_object == "Tea"
    assert result.decision.chosen_skill == "TeaMaking"
    assert result.decision.shares["Tea"] == pytest.approx(100.0)
    assert result.decision.score == pytest.approx(3 / 19)
    assert result.response == "Starting Tea Making Skill. Finished Tea Making Skill."
    assert result.trace.events[0].event == "skill_chosen"
    assert result.trace.completed_objects() == ["Cup", "Tea", "Sugar"]


def test_hunger_makes_a_sandwich(handle, scenario):
    result = handle("I am hungry", scenario("kitchen"))
    assert result.decision.winning_object == "Meat"
    assert result.decision.chosen_skill == "SandwichMaking"
    assert result.outcome == "done"
    assert result.trace.completed_objects() == ["Bread1", "Meat", "Bread2"]


def test_thirst_makes_tea_via_cup(handle, scenario):
    result = handle("I am thirsty", scenario("kitchen"))
    assert result.decision.tagged_words == ["thirst"]
    assert result.decision.winning_object == "Cup"
    assert result.decision.chosen_skill == "TeaMaking"


def test_unrelated_cue_asks_for_clarification_without_acting(handle, scenario):
    world = scenario("kitchen")
    before = world.snapshot()
    result = handle("the sky is blue", world)

    assert result.outcome == "no_association"
    assert result.decision is None
    assert result.response == "I could not relate that to anything on the table."
    assert result.trace.events == []
    assert world.snapshot() == before


def test_object_outside_every_skill_is_no_association(handle):
    world = make_world(table("Teapot"))
    result = handle("It is hot", world)
    assert result.outcome == "no_association"
    assert world.perceive()[0].name == "Teapot"


def test_empty_table_is_no_association(handle):
    assert handle("It is cold outside", make_world([])).outcome == "no_association"


def test_missing_cup_is_reported(handle):
    result = handle("It is cold outside", make_world(table("Tea", "Sugar", "Teapot")))
    assert result.outcome == "deadlock"
    assert result.response == "Starting Tea Making Skill. I cannot find the Cup."


def test_small_budget_times_out_naming_the_object(handle, scenario):
    result = handle("It is cold outside", scenario("kitchen"), max_ticks=2)
    assert result.outcome == "timeout"
    assert result.response == (
        "Starting Tea Making Skill. "
        "I could not finish the Tea Making Skill in time, still waiting on the Cup."
    )


def test_next_utterance_after_timeout_starts_clean(handle, scenario):
    world = scenario("kitchen")
    handle("It is cold outside", world, max_ticks=2)
    assert not world.any_busy()

    result = handle("I am hungry", world)
    assert result.outcome == "done"
    assert result.trace.completed_objects() == ["Bread1", "Meat", "Bread2"]
    assert world.objects["Cup"].available
    assert "Cup" in [o.name for o in world.perceive()]


def test_empty_utterance_rejected(handle, scenario):
    with pytest.raises(ValueError):
        handle("   ", scenario("kitchen"))
