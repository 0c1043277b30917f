"""
Discrete-event tabletop world: tagged objects, robot arms and timed pick-and-place.

Perception is perfect: every present, unconsumed object is visible. Actions
take ``ceil(travel / speed) + 1`` ticks, where the extra tick is the grasp.
"""

import logging
import math
import random
import tomllib
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Self

from pydantic import ValidationError

from models import Pose, ScenarioFile

logger = logging.getLogger(__name__)


class ScenarioError(ValueError):
    pass


class MissingObject(RuntimeError):
    """The requested object is not on the table (absent or already used)."""

    def __init__(self, obj: str):
        super().__init__(f"Object not available: {obj}")
        self.obj = obj


class Rejected(RuntimeError):
    """The robot cannot take the action right now."""


@dataclass(slots=True)
class WorldObject:
    name: str
    tag_id: int
    pose: Pose
    present: bool = True
    consumed: bool = False

    @property
    def available(self) -> bool:
        return self.present and not self.consumed


@dataclass(slots=True)
class RobotSim:
    id: str
    arm_pose: Pose
    speed: float
    busy: bool = False
    holding: str | None = None


@dataclass(frozen=True, slots=True)
class PerceivedObject:
    name: str
    tag_id: int
    pose: Pose


@dataclass(frozen=True, slots=True)
class ActionHandle:
    robot: str
    obj: str
    target: Pose
    start: int
    finish: int


@dataclass(frozen=True, slots=True)
class CompletionNotice:
    robot: str
    obj: str
    tick: int


def action_duration(arm: Pose, obj: Pose, target: Pose, speed: float) -> int:
    """Travel ticks (rounded up) plus one grasp tick."""
    travel = math.dist(arm, obj) + math.dist(obj, target)
    return math.ceil(round(travel / speed, 9)) + 1


class WorldState:
    """Objects, robots and pending actions advanced one tick at a time."""

    def __init__(self, scenario: ScenarioFile, seed: int = 0, source: Path | None = None):
        self.scenario = scenario
        self.seed = seed
        self.source = source
        self._build()

    def _build(self) -> None:
        self.objects: dict[str, WorldObject] = {
            o.name: WorldObject(o.name, o.tag, (o.x, o.y, o.z), present=o.present)
            for o in self.scenario.objects
        }
        self.robots: dict[str, RobotSim] = {
            r.id: RobotSim(r.id, (r.x, r.y, r.z), r.speed) for r in self.scenario.robots
        }
        self.place_targets: dict[str, Pose] = dict(self.scenario.place_targets)
        self.jitter = self.scenario.sim.jitter
        self.clock = 0
        self._pending: list[ActionHandle] = []
        self._rng = random.Random(self.seed)

    # ------------------------------------------------------------------
    # Perception
    # ------------------------------------------------------------------

    def perceive(self) -> list[PerceivedObject]:
        """Present, unconsumed objects ordered by tag id."""
        visible = sorted((o for o in self.objects.values() if o.available), key=lambda o: o.tag_id)
        return [PerceivedObject(o.name, o.tag_id, o.pose) for o in visible]

    def any_busy(self) -> bool:
        return any(robot.busy for robot in self.robots.values())

    def target_for(self, skill: str | None, robot_id: str) -> Pose:
        """Placement pose for a skill: its own target, else ``default``, else stay put."""
        if skill and skill in self.place_targets:
            return self.place_targets[skill]
        if "default" in self.place_targets:
            return self.place_targets["default"]
        return self.robots[robot_id].arm_pose

    # ------------------------------------------------------------------
    # Actions
    # ------------------------------------------------------------------

    def pick_and_place(self, robot_id: str, obj: str, target: Pose) -> ActionHandle:
        robot = self.robots.get(robot_id)
        if robot is None:
            raise Rejected(f"Unknown robot: {robot_id}")
        if robot.busy:
            raise Rejected(f"Robot {robot_id} is busy with {robot.holding}")

        item = self.objects.get(obj)
        if item is None or not item.available:
            raise MissingObject(obj)
        if any(handle.obj == obj for handle in self._pending):
            raise Rejected(f"{obj} is already being moved")

        duration = action_duration(robot.arm_pose, item.pose, target, robot.speed)
        if self.jitter:
            duration += self._rng.randint(0, self.jitter)

        handle = ActionHandle(robot_id, obj, tuple(target), self.clock, self.clock + duration)
        self._pending.append(handle)
        robot.busy = True
        robot.holding = obj
        logger.debug("%s picks %s (ticks %d -> %d)", robot_id, obj, handle.start, handle.finish)
        return handle

    def step(self) -> list[CompletionNotice]:
        """Advance the clock one tick and deliver completions due now."""
        self.clock += 1
        due = sorted(
            (h for h in self._pending if h.finish <= self.clock), key=lambda h: (h.finish, h.robot)
        )
        notices: list[CompletionNotice] = []
        for handle in due:
            self._pending.remove(handle)
            item = self.objects[handle.obj]
            item.pose = handle.target
            item.consumed = True
            robot = self.robots[handle.robot]
            robot.arm_pose = handle.target
            robot.busy = False
            robot.holding = None
            notices.append(CompletionNotice(handle.robot, handle.obj, self.clock))
        return notices

    def cancel_pending(self) -> list[ActionHandle]:
        """Abort in-flight actions: robots go idle where they stand, objects stay put."""
        cancelled = sorted(self._pending, key=lambda h: (h.start, h.robot))
        self._pending.clear()
        for handle in cancelled:
            robot = self.robots[handle.robot]
            robot.busy = False
            robot.holding = None
            logger.debug("%s drops %s (due at %d)", handle.robot, handle.obj, handle.finish)
        return cancelled

    # ------------------------------------------------------------------
    # Session helpers
    # ------------------------------------------------------------------

    def reset(self) -> None:
        """Reload the scenario (from its file when there is one)."""
        if self.source is not None:
            self.scenario = _read_scenario(self.source)
        self._build()

    def snapshot(self) -> dict[str, Any]:
        return {
            "clock": self.clock,
            "objects": {
                n: (o.pose, o.present, o.consumed) for n, o in sorted(self.objects.items())
            },
            "robots": {
                r: (s.arm_pose, s.busy, s.holding) for r, s in sorted(self.robots.items())
            },
            "pending": list(self._pending),
        }

    def describe(self) -> str:
        """Human-readable table state."""
        lines = [f"clock: {self.clock}"]
        for obj in sorted(self.objects.values(), key=lambda o: o.tag_id):
            status = "consumed" if obj.consumed else ("on table" if obj.present else "absent")
            x, y, z = obj.pose
            lines.append(f"  [{obj.tag_id}] {obj.name:<10} {status:<9} ({x:.2f}, {y:.2f}, {z:.2f})")
        for robot in sorted(self.robots.values(), key=lambda r: r.id):
            state = f"holding {robot.holding}" if robot.busy else "idle"
            lines.append(f"  robot {robot.id}: {state}")
        return "\n".join(lines)

    def copy(self) -> Self:
        clone = type(self)(self.scenario, self.seed, self.source)
        clone.objects = {n: replace(o) for n, o in self.objects.items()}
        clone.robots = {r: replace(s) for r, s in self.robots.items()}
        clone.clock = self.clock
        clone._pending = list(self._pending)
        return clone


# ============================================================================
# Loading
# ============================================================================


def _read_scenario(path: Path) -> ScenarioFile:
    if not path.exists():
        raise ScenarioError(f"Scenario not found: {path}")
    try:
        with path.open("rb") as f:
            raw = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ScenarioError(f"{path}: {e}") from e
    try:
        return ScenarioFile.model_validate(raw)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'scenario'}: {err['msg']}"
            for err in e.errors()
        )
        raise ScenarioError(f"{path}: {problems}") from None


def load_scenario(path: Path | str, seed: int = 0) -> WorldState:
    """Load a TOML scenario file into a fresh world."""
    path = Path(path)
    world = WorldState(_read_scenario(path), seed=seed, source=path)
    logger.info(
        "🗺️ Loaded scenario %s: %d objects, %d robots",
        path.name,
        len(world.objects),
        len(world.robots),
    )
    return world


def perceive(world: WorldState) -> list[PerceivedObject]:
    return world.perceive()


def pick_and_place(world: WorldState, robot_id: str, obj: str, target: Pose) -> ActionHandle:
    return world.pick_and_place(robot_id, obj, target)
