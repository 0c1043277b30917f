"""Shared fixtures for the cogtask test suite."""

import sys
from pathlib import Path

import pytest

SCRIPTS_DIR = Path(__file__).resolve().parent
ROOT = SCRIPTS_DIR.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(SCRIPTS_DIR))

from models import DATA_DIR, RunConfig, ScenarioFile  # noqa: E402
from services.interaction import load_templates  # noqa: E402
from services.knowledge import KnowledgeBase, load_kb, parse_kb  # noqa: E402
from services.lexicon import load_lexicon  # noqa: E402
from services.recipe import SkillLibrary, load_skills  # noqa: E402
from services.world import WorldState, load_scenario  # noqa: E402

SCENARIOS_DIR = DATA_DIR / "scenarios"
KB_PATH = DATA_DIR / "kb" / "semantic_memory.tsv"

TEA_SCENARIOS = ["tea_1", "tea_2", "tea_3"]
SANDWICH_SCENARIOS = ["sandwich_1", "sandwich_2", "sandwich_3"]


@pytest.fixture(scope="session")
def kb() -> KnowledgeBase:
    return load_kb(KB_PATH)


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon(DATA_DIR / "lexicon")


@pytest.fixture(scope="session")
def templates():
    return load_templates(DATA_DIR / "templates.tsv")


@pytest.fixture
def lib() -> SkillLibrary:
    return load_skills(DATA_DIR / "skills")


@pytest.fixture
def scenario():
    """Factory: scenario name -> freshly loaded WorldState."""

    def load(name: str, seed: int = 0) -> WorldState:
        return load_scenario(SCENARIOS_DIR / f"{name}.toml", seed=seed)

    return load


@pytest.fixture
def config(tmp_path) -> RunConfig:
    return RunConfig(mode="run", out=tmp_path / "trace.jsonl")


def make_kb(*triples: str) -> KnowledgeBase:
    """Build a KB from ``"source category target"`` strings (weight 1.0)."""
    lines = ["\t".join([*t.split(), "1.0"]) for t in triples]
    return parse_kb("\n".join(lines))


def make_world(objects, robots=None, place_targets=None, jitter=0, seed=0) -> WorldState:
    """Build a world from plain dicts without touching the filesystem."""
    scenario = ScenarioFile.model_validate(
        {
            "robots": robots or [{"id": "baxter", "x": 0.0, "y": 0.0, "z": 0.0, "speed": 0.25}],
            "objects": objects,
            "place_targets": place_targets or {"default": [0.5, 0.0, 0.0]},
            "sim": {"jitter": jitter},
        }
    )
    return WorldState(scenario, seed=seed)


def table(*names: str) -> list[dict]:
    """Objects in a row along x, tagged in the given order."""
    return [
        {"name": name, "tag": i + 1, "x": 0.1 * (i + 1), "y": 0.2, "z": 0.0}
        for i, name in enumerate(names)
    ]
