"""Pydantic models for cogtask configuration, decisions, traces and scenario files."""

import os
from collections.abc import Mapping
from enum import StrEnum
from pathlib import Path
from typing import Any, Literal, Self

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
ENV_PREFIX = "COGTASK_"

Pose = tuple[float, float, float]


# ============================================================================
# Run Configuration
# ============================================================================


class RunConfig(BaseModel):
    """Everything a CLI invocation needs; CLI flag > COGTASK_* env var > default."""

    mode: Literal["run", "repl", "score", "validate"] = "run"
    kb: Path = Field(DATA_DIR / "kb" / "semantic_memory.tsv", description="Knowledge TSV")
    skills: Path = Field(DATA_DIR / "skills", description="Directory of *.recipe files")
    scenario: Path = Field(DATA_DIR / "scenarios" / "kitchen.toml", description="Scenario TOML")
    lexicon: Path = Field(DATA_DIR / "lexicon", description="Tag lexicon directory")
    templates: Path = Field(DATA_DIR / "templates.tsv", description="Response templates")
    out: Path = Field(Path("trace.jsonl"), description="JSONL trace output")
    radius: int = Field(1, ge=1, description="Signature neighborhood radius in hops")
    threshold: float = Field(0.5, gt=0.0, le=1.0, description="Activation threshold")
    seed: int = Field(0, description="Seed for simulated action jitter")
    max_ticks: int = Field(200, ge=1, description="Tick budget per skill execution")
    aggregate: Literal["max", "sum"] = Field("max", description="Per-item score over words")
    exclude_categories: list[str] = Field(
        default_factory=list, description="Relation categories not traversed"
    )

    @field_validator("exclude_categories", mode="before")
    @classmethod
    def _split_categories(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [part.strip() for part in value.split(",") if part.strip()]
        return value

    @model_validator(mode="after")
    def _check_paths(self) -> Self:
        if self.mode in ("run", "repl", "score"):
            for name in ("kb", "skills", "scenario"):
                path = getattr(self, name)
                if not path.exists():
                    raise ValueError(f"{name} path does not exist: {path}")
        return self

    @classmethod
    def from_sources(
        cls, cli: Mapping[str, Any] | None = None, env: Mapping[str, str] | None = None
    ) -> Self:
        """Merge CLI values over ``COGTASK_<FIELD>`` environment values over defaults."""
        env = os.environ if env is None else env
        values: dict[str, Any] = {}
        for name in cls.model_fields:
            raw = env.get(f"{ENV_PREFIX}{name.upper()}")
            if raw is not None and raw != "":
                values[name] = raw
        for name, value in (cli or {}).items():
            if value is not None:
                values[name] = value
        return cls(**values)


# ============================================================================
# Decisions & Traces
# ============================================================================


class Decision(BaseModel):
    """Outcome of the semantic half of the pipeline for one utterance."""

    utterance: str
    tagged_words: list[str] = Field(default_factory=list, description="Lemmas in utterance order")
    winning_object: str
    score: float = Field(..., ge=0.0, description="Winning object's aggregated score")
    chosen_skill: str
    scores: dict[str, float] = Field(default_factory=dict, description="Item -> aggregated score")
    shares: dict[str, float] = Field(default_factory=dict, description="Item -> percentage")

    def summary(self) -> str:
        words = ", ".join(self.tagged_words) or "-"
        return (
            f"words: {words} | object: {self.winning_object} ({self.score:.7f}, "
            f"{self.shares.get(self.winning_object, 0.0):.2f}%) | skill: {self.chosen_skill}"
        )


class EventKind(StrEnum):
    SKILL_CHOSEN = "skill_chosen"
    SELECTED = "selected"
    ACTIVATED = "activated"
    CLAIMED = "claimed"
    ACTION_STARTED = "action_started"
    ACTION_DONE = "action_done"
    NODE_DONE = "node_done"
    MISSING_OBJECT = "missing_object"
    DEADLOCK = "deadlock"
    TIMEOUT = "timeout"


class TraceEvent(BaseModel):
    """One trace line; field order is the JSONL key order."""

    tick: int = Field(..., ge=0)
    robot: str | None = None
    node: str | None = None
    event: EventKind
    detail: dict[str, Any] = Field(default_factory=dict)


class ExecutionTrace(BaseModel):
    """Ordered event log of one skill execution."""

    events: list[TraceEvent] = Field(default_factory=list)
    outcome: Literal["done", "deadlock", "timeout"] | None = None

    def of(self, *kinds: EventKind) -> list[TraceEvent]:
        return [e for e in self.events if e.event in kinds]

    def completed_objects(self) -> list[str]:
        """Objects in action_done order."""
        return [e.detail["object"] for e in self.of(EventKind.ACTION_DONE)]

    def claimed_objects(self) -> list[str]:
        return [e.detail["object"] for e in self.of(EventKind.CLAIMED)]

    def to_jsonl(self) -> str:
        return "".join(event.model_dump_json() + "\n" for event in self.events)

    @classmethod
    def from_jsonl(cls, text: str) -> Self:
        events = [TraceEvent.model_validate_json(line) for line in text.splitlines() if line]
        return cls(events=events)

    def write(self, path: Path | str) -> None:
        Path(path).write_text(self.to_jsonl(), encoding="utf-8")


# ============================================================================
# Scenario Files
# ============================================================================


class ScenarioObject(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = Field(..., pattern=r"^[A-Za-z][A-Za-z0-9_]*$")
    tag: int = Field(..., ge=0, description="AR tag id")
    x: float
    y: float
    z: float = 0.0
    present: bool = True


class ScenarioRobot(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(..., min_length=1)
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    speed: float = Field(..., gt=0.0, description="Meters per tick")


class SimSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    jitter: int = Field(0, ge=0, description="Max extra random ticks per action")


class ScenarioFile(BaseModel):
    """Declarative tabletop setup."""

    model_config = ConfigDict(extra="forbid")

    robots: list[ScenarioRobot] = Field(default_factory=list)
    objects: list[ScenarioObject] = Field(default_factory=list)
    place_targets: dict[str, Pose] = Field(default_factory=dict)
    sim: SimSettings = Field(default_factory=SimSettings)

    @model_validator(mode="after")
    def _unique(self) -> Self:
        for label, values in (
            ("object name", [o.name for o in self.objects]),
            ("tag id", [o.tag for o in self.objects]),
            ("robot id", [r.id for r in self.robots]),
        ):
            seen: set[Any] = set()
            for value in values:
                if value in seen:
                    raise ValueError(f"duplicate {label}: {value}")
                seen.add(value)
        return self
