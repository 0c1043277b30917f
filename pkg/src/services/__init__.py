"""cogtask services module."""

from .engine import (
    TaskInstance,
    build_instance,
    choose_skill,
    run_until_done,
    tick,
)
from .interaction import handle_utterance, respond
from .knowledge import KnowledgeBase, load_kb, neighbors
from .lingual import analyze, extract_tagged_words, pos_tag, tokenize
from .recipe import SkillLibrary, TaskNode, parse_recipe, register_skill, serialize_recipe
from .similarity import NoAssociation, jaccard, normalized_shares, score_matrix, signature
from .world import WorldState, load_scenario, perceive, pick_and_place

__all__ = [
    # Knowledge store
    "KnowledgeBase",
    "load_kb",
    "neighbors",
    # Lingual perception
    "analyze",
    "extract_tagged_words",
    "pos_tag",
    "tokenize",
    # Similarity
    "NoAssociation",
    "jaccard",
    "normalized_shares",
    "score_matrix",
    "signature",
    # Recipes
    "SkillLibrary",
    "TaskNode",
    "parse_recipe",
    "register_skill",
    "serialize_recipe",
    # Engine
    "TaskInstance",
    "build_instance",
    "choose_skill",
    "run_until_done",
    "tick",
    # World
    "WorldState",
    "load_scenario",
    "perceive",
    "pick_and_place",
    # Interaction
    "handle_utterance",
    "respond",
]
