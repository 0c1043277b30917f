"""
Activation spreading over one robot's replica.

Bottom-up, nodes report status (potential, done, active) to their parents.
Top-down, active nodes pass their activation level to the children that
should run next:

    SkillRoot -> the chosen skill only
    Skill     -> every unfinished child
    THEN      -> the leftmost unfinished child
    AND       -> every unfinished child
    OR        -> the latched child

Potentials aggregate the other way: THEN takes its leftmost unfinished
child, AND the minimum over unfinished children, OR the maximum, Skill its
children's minimum and SkillRoot the chosen skill. Finished nodes report 0.
"""

import logging
from dataclasses import dataclass

from services.engine.state import ROOT_ID, ActivationMessage, StatusMessage, TaskInstance
from services.recipe import NodeKind

logger = logging.getLogger(__name__)

ROOT_ACTIVATION = 1.0


@dataclass(frozen=True, slots=True)
class OrSelection:
    node: str
    child: str
    potential: float
    reselection: bool
    tie: bool


def status_messages(instance: TaskInstance, robot: str) -> list[StatusMessage]:
    """What every node currently reports to its parent."""
    messages = []
    for node_id in instance.postorder():
        parent = instance.parent[node_id]
        if parent is None:
            continue
        state = instance.at(robot, node_id)
        messages.append(
            StatusMessage(
                source=node_id,
                target=parent,
                activation_potential=0.0 if state.done else state.activation_potential,
                done=state.done,
                active=state.active,
            )
        )
    return messages


def _leaf_potential(instance: TaskInstance, node_id: str) -> float:
    return 1.0 if instance.obj(node_id) in instance.perceived else 0.0


def _aggregate(instance: TaskInstance, node_id: str, inbox: list[StatusMessage]) -> float:
    pending = [m.activation_potential for m in inbox if not m.done]
    match instance.kind(node_id):
        case NodeKind.THEN:
            return pending[0] if pending else 0.0
        case NodeKind.AND | NodeKind.SKILL:
            return min(pending, default=0.0)
        case NodeKind.OR:
            return max(pending, default=0.0)
        case NodeKind.SKILL_ROOT:
            if instance.chosen_skill is None:
                return 0.0
            chosen = instance.skill_ids[instance.chosen_skill]
            return next((m.activation_potential for m in inbox if m.source == chosen), 0.0)
        case _:
            raise ValueError(f"Not an internal node: {node_id}")


def update_activation_potential(instance: TaskInstance, robot: str) -> None:
    """Recompute potentials bottom-up on ``robot``'s replica."""
    inboxes: dict[str, list[StatusMessage]] = {}
    for node_id in instance.postorder():
        state = instance.at(robot, node_id)
        if state.done:
            state.activation_potential = 0.0
        elif instance.kind(node_id) == NodeKind.LEAF:
            state.activation_potential = _leaf_potential(instance, node_id)
        else:
            state.activation_potential = _aggregate(instance, node_id, inboxes.get(node_id, []))

        parent = instance.parent[node_id]
        if parent is not None:
            inboxes.setdefault(parent, []).append(
                StatusMessage(
                    node_id, parent, state.activation_potential, state.done, state.active
                )
            )


def select_or_children(instance: TaskInstance, robot: str) -> list[OrSelection]:
    """
    Latch a child for every unfinished OR node in the chosen skill.

    A latched child stays selected until it is done, or until its potential
    drops to 0 while a sibling could still run.
    """
    selections = []
    for node_id in instance.chosen_subtree():
        if instance.kind(node_id) != NodeKind.OR or instance.at(robot, node_id).done:
            continue

        candidates = [
            (child, instance.at(robot, child).activation_potential)
            for child in instance.children[node_id]
            if not instance.at(robot, child).done
        ]
        if not candidates:
            continue

        latched = instance.or_choice.get((robot, node_id))
        best = max(p for _, p in candidates)
        if latched is not None:
            current = instance.at(robot, latched).activation_potential
            if current > 0.0 or best == 0.0 or instance.at(robot, latched).done:
                continue

        child, potential = next((c, p) for c, p in candidates if p == best)
        tie = sum(1 for _, p in candidates if p == best) > 1
        instance.or_choice[(robot, node_id)] = child
        if tie:
            logger.debug("%s tie at %.1f on %s, taking leftmost %s", robot, best, node_id, child)
        selections.append(OrSelection(node_id, child, potential, latched is not None, tie))
    return selections


def _targets(instance: TaskInstance, robot: str, node_id: str) -> list[str]:
    pending = [c for c in instance.children[node_id] if not instance.at(robot, c).done]
    match instance.kind(node_id):
        case NodeKind.SKILL_ROOT:
            if instance.chosen_skill is None:
                return []
            return [instance.skill_ids[instance.chosen_skill]]
        case NodeKind.SKILL | NodeKind.AND:
            return pending
        case NodeKind.THEN:
            return pending[:1]
        case NodeKind.OR:
            latched = instance.or_choice.get((robot, node_id))
            return [latched] if latched in pending else []
        case _:
            return []


def spread_activation(instance: TaskInstance, robot: str) -> list[ActivationMessage]:
    """Reset levels and push activation down from the root on ``robot``'s replica."""
    if instance.chosen_skill is None:
        raise ValueError("No skill chosen")

    for node_id in instance.nodes:
        instance.at(robot, node_id).activation_level = 0.0
    instance.at(robot, ROOT_ID).activation_level = ROOT_ACTIVATION

    messages: list[ActivationMessage] = []

    def visit(node_id: str) -> None:
        state = instance.at(robot, node_id)
        if state.done or state.activation_level <= instance.threshold:
            return
        for child in _targets(instance, robot, node_id):
            message = ActivationMessage(node_id, child, state.activation_level)
            child_state = instance.at(robot, child)
            child_state.activation_level = max(
                child_state.activation_level, message.activation_level
            )
            messages.append(message)
            visit(child)

    visit(ROOT_ID)
    return messages


def refresh_active(instance: TaskInstance, robot: str) -> list[str]:
    """Re-derive every active flag; returns nodes that just became active."""
    activated = []
    for node_id in instance.nodes:
        state = instance.at(robot, node_id)
        active = state.activation_level > instance.threshold and not state.done
        if active and not state.active:
            activated.append(node_id)
        state.active = active
    return activated
