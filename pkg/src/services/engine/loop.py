"""Skill choice and the synchronous tick loop that drives a task instance."""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from models import EventKind, ExecutionTrace, TraceEvent
from services.engine.spreading import (
    refresh_active,
    select_or_children,
    spread_activation,
    update_activation_potential,
)
from services.engine.state import ROOT_ID, TaskInstance
from services.recipe import NodeKind, SkillLibrary
from services.similarity import NoAssociation
from services.world import MissingObject, Rejected, WorldState

logger = logging.getLogger(__name__)

STALL_TICKS = 3
DEFAULT_MAX_TICKS = 200


class UnknownObject(ValueError):
    """The winning object is not part of any registered skill."""


@dataclass(frozen=True, slots=True)
class SkillChoice:
    skill: str
    obj: str
    score: float


# ============================================================================
# Skill selection
# ============================================================================


def choose_skill(
    scores: Mapping[str, float], available: Sequence[str], lib: SkillLibrary
) -> SkillChoice:
    """
    Pick the highest-scoring available object and the skill that uses it.

    Ties go to the first object in ``available`` (table order). An object
    used by several skills resolves to the earliest registered one.
    """
    if not available:
        raise ValueError("No available items to choose from")
    missing = [item for item in available if item not in scores]
    if missing:
        raise ValueError(f"Items without a score: {', '.join(missing)}")

    winner = available[0]
    for item in available[1:]:
        if scores[item] > scores[winner]:
            winner = item
    if scores[winner] <= 0.0:
        raise NoAssociation("no semantic association between the cue and any available item")

    skills = lib.skills_for(winner)
    if not skills:
        raise UnknownObject(f"{winner} is not used by any registered skill")
    if len(skills) > 1:
        logger.warning("%s appears in %s; using %s", winner, ", ".join(skills), skills[0])

    return SkillChoice(skill=skills[0], obj=winner, score=scores[winner])


def build_instance(
    lib: SkillLibrary, robots: Sequence[str], threshold: float = 0.5
) -> TaskInstance:
    """Fresh instance over every registered skill, one replica per robot."""
    if len(lib) == 0:
        raise ValueError("Skill library is empty")
    return TaskInstance(lib.root(), robots, threshold)


def start_skill(instance: TaskInstance, choice: SkillChoice) -> TraceEvent:
    """Commit ``instance`` to the chosen skill and describe the choice."""
    skill_node = instance.choose(choice.skill)
    return TraceEvent(
        tick=instance.tick,
        node=skill_node,
        event=EventKind.SKILL_CHOSEN,
        detail={"skill": choice.skill, "object": choice.obj, "score": round(choice.score, 7)},
    )


# ============================================================================
# Tick
# ============================================================================


def _claimable(instance: TaskInstance, robot: str) -> str | None:
    best: str | None = None
    best_potential = 0.0
    for leaf in instance.chosen_leaves():
        state = instance.at(robot, leaf)
        if not state.active or state.done or leaf in instance.claims:
            continue
        if state.activation_potential > best_potential:
            best, best_potential = leaf, state.activation_potential
    return best


def _is_active(instance: TaskInstance, leaf: str) -> bool:
    return any(instance.at(r, leaf).active for r in instance.robots)


def pending_objects(instance: TaskInstance) -> list[str]:
    """Objects of unfinished chosen leaves; claimed or active ones first, then tree order."""
    pending = [leaf for leaf in instance.chosen_leaves() if not instance.is_done(leaf)]
    running = [leaf for leaf in pending if leaf in instance.claims or _is_active(instance, leaf)]
    rest = [leaf for leaf in pending if leaf not in running]
    return [instance.obj(leaf) for leaf in running + rest]


def _missing_objects(instance: TaskInstance) -> list[str]:
    """Objects of unfinished chosen leaves that cannot be seen, active ones first."""
    pending = [
        leaf
        for leaf in instance.chosen_leaves()
        if not instance.is_done(leaf) and instance.obj(leaf) not in instance.perceived
    ]
    active = [leaf for leaf in pending if _is_active(instance, leaf)]
    return [instance.obj(leaf) for leaf in (active or pending)]


def _internal_done(instance: TaskInstance, node_id: str) -> bool:
    children = instance.children[node_id]
    match instance.kind(node_id):
        case NodeKind.OR:
            return any(instance.is_done(c) for c in children)
        case NodeKind.SKILL_ROOT:
            return instance.chosen_skill is not None and instance.is_done(
                instance.skill_ids[instance.chosen_skill]
            )
        case _:
            return all(instance.is_done(c) for c in children)


def tick(instance: TaskInstance, world: WorldState) -> list[TraceEvent]:
    """
    Run one deterministic cycle and return its events.

    Phases: perceive, potentials (bottom-up), OR selection, spreading
    (top-down), active flags, claims, world step with done broadcast,
    internal completion, stall check.
    """
    if instance.chosen_skill is None:
        raise ValueError("No skill chosen")
    if instance.outcome is not None:
        return []

    instance.tick += 1
    t = instance.tick
    events: list[TraceEvent] = []

    def emit(event: EventKind, node: str | None, robot: str | None = None, **detail) -> None:
        events.append(TraceEvent(tick=t, robot=robot, node=node, event=event, detail=detail))

    instance.perceived = frozenset(p.name for p in world.perceive())

    for robot in instance.robots:
        update_activation_potential(instance, robot)

    for robot in instance.robots:
        for sel in select_or_children(instance, robot):
            emit(
                EventKind.SELECTED,
                sel.node,
                robot,
                child=sel.child,
                potential=sel.potential,
                reselection=sel.reselection,
                tie=sel.tie,
            )

    for robot in instance.robots:
        spread_activation(instance, robot)
        for node_id in refresh_active(instance, robot):
            emit(EventKind.ACTIVATED, node_id, robot)

    for leaf in instance.chosen_leaves():
        if leaf in instance.reported_missing or leaf in instance.claims:
            continue
        if any(
            instance.at(r, leaf).active and instance.at(r, leaf).activation_potential == 0.0
            for r in instance.robots
        ):
            instance.reported_missing.add(leaf)
            logger.info("⚠️ %s is needed but not on the table", instance.obj(leaf))
            emit(EventKind.MISSING_OBJECT, leaf, object=instance.obj(leaf))

    claimed = False
    for robot in instance.robots:
        if world.robots[robot].busy:
            continue
        leaf = _claimable(instance, robot)
        if leaf is None:
            continue
        obj = instance.obj(leaf)
        try:
            target = world.target_for(instance.chosen_skill, robot)
            handle = world.pick_and_place(robot, obj, target)
        except MissingObject:
            instance.reported_missing.add(leaf)
            emit(EventKind.MISSING_OBJECT, leaf, robot, object=obj)
            continue
        except Rejected as e:
            logger.debug("Claim on %s by %s rejected: %s", leaf, robot, e)
            continue
        instance.claims[leaf] = robot
        claimed = True
        emit(EventKind.CLAIMED, leaf, robot, object=obj)
        emit(
            EventKind.ACTION_STARTED,
            leaf,
            robot,
            object=obj,
            target=list(handle.target),
            finish=handle.finish,
        )

    notices = world.step()
    for notice in notices:
        leaf = next(
            (
                leaf
                for leaf, owner in instance.claims.items()
                if owner == notice.robot
                and instance.obj(leaf) == notice.obj
                and not instance.is_done(leaf)
            ),
            None,
        )
        if leaf is None:
            logger.debug("Ignoring completion of %s by %s", notice.obj, notice.robot)
            continue
        instance.mark_done(leaf)
        emit(EventKind.ACTION_DONE, leaf, notice.robot, object=notice.obj)
        emit(EventKind.NODE_DONE, leaf, notice.robot)

    for node_id in instance.postorder():
        if instance.kind(node_id) == NodeKind.LEAF or instance.is_done(node_id):
            continue
        if _internal_done(instance, node_id):
            instance.mark_done(node_id)
            emit(EventKind.NODE_DONE, node_id)

    if instance.root_done:
        instance.outcome = "done"
        logger.info("✓ %s finished at tick %d", instance.chosen_skill, t)
        return events

    progressed = claimed or bool(notices) or world.any_busy()
    instance.stalled_ticks = 0 if progressed else instance.stalled_ticks + 1
    if instance.stalled_ticks >= STALL_TICKS:
        instance.outcome = "deadlock"
        missing = _missing_objects(instance)
        logger.warning("Deadlock in %s; missing: %s", instance.chosen_skill, missing or "none")
        emit(EventKind.DEADLOCK, ROOT_ID, missing=missing, stalled_ticks=instance.stalled_ticks)

    return events


def run_until_done(
    instance: TaskInstance,
    world: WorldState,
    max_ticks: int = DEFAULT_MAX_TICKS,
    trace: ExecutionTrace | None = None,
) -> ExecutionTrace:
    """
    Tick until the root is done, a deadlock is detected or ``max_ticks`` run out.

    On timeout any in-flight action is cancelled so the world is left with
    idle robots and no completion that a later run could pick up.
    """
    if max_ticks < 1:
        raise ValueError(f"max_ticks must be >= 1, got {max_ticks}")
    if instance.chosen_skill is None:
        raise ValueError("No skill chosen")

    trace = trace if trace is not None else ExecutionTrace()
    for _ in range(max_ticks):
        trace.events.extend(tick(instance, world))
        if instance.outcome is not None:
            break
    else:
        instance.outcome = "timeout"
        pending = pending_objects(instance)
        cancelled = [handle.obj for handle in world.cancel_pending()]
        logger.warning("Timed out after %d ticks in %s", max_ticks, instance.chosen_skill)
        trace.events.append(
            TraceEvent(
                tick=instance.tick,
                node=ROOT_ID,
                event=EventKind.TIMEOUT,
                detail={"max_ticks": max_ticks, "pending": pending, "cancelled": cancelled},
            )
        )

    trace.outcome = instance.outcome
    return trace
