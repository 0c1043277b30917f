"""
Activation-spreading task engine.

Modules:
- state: NodeState, messages and the replicated TaskInstance
- spreading: bottom-up potentials, OR latching, top-down activation
- loop: skill choice, tick and run_until_done
"""

from services.similarity import NoAssociation

from .loop import (
    DEFAULT_MAX_TICKS,
    STALL_TICKS,
    SkillChoice,
    UnknownObject,
    build_instance,
    choose_skill,
    pending_objects,
    run_until_done,
    start_skill,
    tick,
)
from .spreading import (
    OrSelection,
    refresh_active,
    select_or_children,
    spread_activation,
    status_messages,
    update_activation_potential,
)
from .state import (
    ROOT_ID,
    ActivationMessage,
    NodeState,
    StatusMessage,
    TaskInstance,
    node_key,
)

__all__ = [
    "DEFAULT_MAX_TICKS",
    "ROOT_ID",
    "STALL_TICKS",
    "ActivationMessage",
    "NoAssociation",
    "NodeState",
    "OrSelection",
    "SkillChoice",
    "StatusMessage",
    "TaskInstance",
    "UnknownObject",
    "build_instance",
    "choose_skill",
    "node_key",
    "pending_objects",
    "refresh_active",
    "run_until_done",
    "select_or_children",
    "spread_activation",
    "start_skill",
    "status_messages",
    "tick",
    "update_activation_potential",
]
