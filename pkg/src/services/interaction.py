"""
Single-turn interaction: utterance in, decision plus executed skill and a
templated verbal response out.
"""

import logging
import re
import string
from collections.abc import Mapping
from dataclasses import dataclass
from enum import StrEnum
from pathlib import Path
from typing import Any, Literal

from models import DATA_DIR, Decision, ExecutionTrace, RunConfig
from services.engine import (
    UnknownObject,
    build_instance,
    choose_skill,
    pending_objects,
    run_until_done,
    start_skill,
)
from services.knowledge import KnowledgeBase
from services.lexicon import Lexicon
from services.lingual import Utterance, analyze
from services.recipe import SkillLibrary
from services.similarity import NoAssociation, item_scores, normalized_shares, score_matrix
from services.world import WorldState

logger = logging.getLogger(__name__)

DEFAULT_TEMPLATES_PATH = DATA_DIR / "templates.tsv"

_CAMEL_BOUNDARY = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")


class TemplateError(ValueError):
    pass


class Intent(StrEnum):
    SKILL_STARTED = "skill_started"
    NO_ASSOCIATION = "no_association"
    MISSING_OBJECT = "missing_object"
    DONE = "done"
    TIMED_OUT = "timed_out"


@dataclass(frozen=True, slots=True)
class ResponseTemplate:
    intent: Intent
    template: str

    @property
    def slots(self) -> set[str]:
        return {name for _, name, _, _ in string.Formatter().parse(self.template) if name}


Templates = Mapping[Intent, ResponseTemplate]


def load_templates(path: Path | str = DEFAULT_TEMPLATES_PATH) -> dict[Intent, ResponseTemplate]:
    """Read ``intent<TAB>template`` lines; every intent must be covered."""
    path = Path(path)
    if not path.exists():
        raise TemplateError(f"Template file not found: {path}")

    templates: dict[Intent, ResponseTemplate] = {}
    for line_no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip() or raw.startswith("#"):
            continue
        intent_name, sep, text = raw.partition("\t")
        if not sep or not text.strip():
            raise TemplateError(f"{path}:{line_no}: expected intent<TAB>template")
        try:
            intent = Intent(intent_name.strip())
        except ValueError:
            raise TemplateError(f"{path}:{line_no}: unknown intent {intent_name!r}") from None
        templates[intent] = ResponseTemplate(intent, text.strip())

    missing = [i.value for i in Intent if i not in templates]
    if missing:
        raise TemplateError(f"{path}: no template for {', '.join(missing)}")
    return templates


def humanize(value: Any) -> str:
    """``TeaMaking`` -> ``Tea Making``; other values pass through ``str``."""
    return _CAMEL_BOUNDARY.sub(" ", str(value))


def respond(template: ResponseTemplate, slots: Mapping[str, Any]) -> str:
    missing = template.slots - set(slots)
    if missing:
        raise TemplateError(f"{template.intent}: no value for {', '.join(sorted(missing))}")
    return template.template.format(**{key: humanize(value) for key, value in slots.items()})


# ============================================================================
# Pipeline
# ============================================================================


Outcome = Literal["done", "deadlock", "timeout", "no_association"]


@dataclass(slots=True)
class InteractionResult:
    decision: Decision | None
    response: str
    trace: ExecutionTrace
    outcome: Outcome


def handle_utterance(
    text: str,
    kb: KnowledgeBase,
    world: WorldState,
    lib: SkillLibrary,
    config: RunConfig,
    lexicon: Lexicon | None = None,
    templates: Templates | None = None,
) -> InteractionResult:
    """
    Decide, then act: the world is only touched once a skill has been chosen.

    Raises ValueError for an empty utterance.
    """
    utterance = Utterance(text)
    templates = templates or load_templates(config.templates)
    words = analyze(utterance.text, lexicon)
    perceived = [p.name for p in world.perceive()]
    lemmas = [w.lemma for w in words]
    logger.debug("Tagged words %s over %s", lemmas, perceived)

    def clarify(reason: str) -> InteractionResult:
        logger.info("🤔 No skill for %r: %s", text, reason)
        response = respond(templates[Intent.NO_ASSOCIATION], {})
        return InteractionResult(None, response, ExecutionTrace(), "no_association")

    if not perceived:
        return clarify("nothing on the table")

    table = score_matrix(kb, words, perceived, config.radius, config.exclude_categories)
    scores = item_scores(table, config.aggregate)
    try:
        choice = choose_skill(scores, perceived, lib)
    except (NoAssociation, UnknownObject) as e:
        return clarify(str(e))

    decision = Decision(
        utterance=text,
        tagged_words=lemmas,
        winning_object=choice.obj,
        score=choice.score,
        chosen_skill=choice.skill,
        scores=scores,
        shares=normalized_shares(scores, perceived),
    )
    logger.info("🎯 %s", decision.summary())

    instance = build_instance(lib, list(world.robots), config.threshold)
    trace = ExecutionTrace(events=[start_skill(instance, choice)])
    run_until_done(instance, world, config.max_ticks, trace)

    parts = [respond(templates[Intent.SKILL_STARTED], {"skill": choice.skill})]
    last = trace.events[-1].detail
    match trace.outcome:
        case "done":
            parts.append(respond(templates[Intent.DONE], {"skill": choice.skill}))
        case "deadlock" if last.get("missing"):
            parts.append(respond(templates[Intent.MISSING_OBJECT], {"object": last["missing"][0]}))
        case _:
            waiting = last.get("pending") or pending_objects(instance) or [choice.obj]
            slots = {"skill": choice.skill, "object": waiting[0]}
            parts.append(respond(templates[Intent.TIMED_OUT], slots))

    return InteractionResult(decision, " ".join(parts), trace, trace.outcome or "timeout")
