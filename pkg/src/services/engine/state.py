"""Per-robot node state and the task instance that owns every replica."""

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from typing import Literal

from services.recipe import NodeKind, TaskNode

ROOT_ID = "SkillRoot"

Outcome = Literal["done", "deadlock", "timeout"]


@dataclass(slots=True)
class NodeState:
    activation_level: float = 0.0
    activation_potential: float = 0.0
    active: bool = False
    done: bool = False


@dataclass(frozen=True, slots=True)
class ActivationMessage:
    """Parent -> child."""

    source: str
    target: str
    activation_level: float


@dataclass(frozen=True, slots=True)
class StatusMessage:
    """Child -> parent."""

    source: str
    target: str
    activation_potential: float
    done: bool
    active: bool


def node_key(node: TaskNode, skill: str | None) -> str:
    """Stable trace id: ``SkillRoot`` or ``<Skill>.<preorder>:<label>``."""
    if node.kind == NodeKind.SKILL_ROOT:
        return ROOT_ID
    return f"{skill}.{node.node_id}:{node.label}"


class TaskInstance:
    """
    One execution of the skill tree with a state replica per robot.

    Structure (``nodes``, ``parent``, ``children``) is shared by all replicas;
    ``state[(robot, node_id)]`` holds the per-replica values. Claims and the
    perceived object set are instance-wide.
    """

    def __init__(self, tree: TaskNode, robots: Sequence[str], threshold: float = 0.5):
        if tree.kind != NodeKind.SKILL_ROOT:
            raise ValueError("Task instance needs a SkillRoot tree")
        if not robots:
            raise ValueError("Task instance needs at least one robot")
        if len(set(robots)) != len(robots):
            raise ValueError("Robot ids must be unique")
        if not 0.0 < threshold <= 1.0:
            raise ValueError(f"threshold must be in (0, 1], got {threshold}")

        self.tree = tree
        self.robots: tuple[str, ...] = tuple(sorted(robots))
        self.threshold = threshold
        self.chosen_skill: str | None = None
        self.tick = 0

        self.nodes: dict[str, TaskNode] = {}
        self.parent: dict[str, str | None] = {}
        self.children: dict[str, tuple[str, ...]] = {}
        self.skill_ids: dict[str, str] = {}
        self._index(tree, None, None)

        self.state: dict[tuple[str, str], NodeState] = {
            (robot, node_id): NodeState() for robot in self.robots for node_id in self.nodes
        }
        self.perceived: frozenset[str] = frozenset()
        self.claims: dict[str, str] = {}
        self.or_choice: dict[tuple[str, str], str] = {}
        self.reported_missing: set[str] = set()
        self.stalled_ticks = 0
        self.outcome: Outcome | None = None

    def _index(self, node: TaskNode, parent: str | None, skill: str | None) -> str:
        if node.kind == NodeKind.SKILL:
            skill = node.name
        node_id = node_key(node, skill)
        if node_id in self.nodes:
            raise ValueError(f"Duplicate node id {node_id}; number the tree first")
        self.nodes[node_id] = node
        self.parent[node_id] = parent
        if node.kind == NodeKind.SKILL:
            self.skill_ids[node.name] = node_id
        self.children[node_id] = tuple(self._index(c, node_id, skill) for c in node.children)
        return node_id

    # ------------------------------------------------------------------
    # Structure queries
    # ------------------------------------------------------------------

    def at(self, robot: str, node_id: str) -> NodeState:
        return self.state[(robot, node_id)]

    def kind(self, node_id: str) -> NodeKind:
        return self.nodes[node_id].kind

    def subtree(self, node_id: str) -> Iterator[str]:
        """Preorder ids under (and including) ``node_id``."""
        yield node_id
        for child in self.children[node_id]:
            yield from self.subtree(child)

    def postorder(self, node_id: str = ROOT_ID) -> Iterator[str]:
        for child in self.children[node_id]:
            yield from self.postorder(child)
        yield node_id

    def chosen_subtree(self) -> list[str]:
        if self.chosen_skill is None:
            return []
        return list(self.subtree(self.skill_ids[self.chosen_skill]))

    def chosen_leaves(self) -> list[str]:
        return [n for n in self.chosen_subtree() if self.kind(n) == NodeKind.LEAF]

    def obj(self, node_id: str) -> str:
        return self.nodes[node_id].obj or ""

    # ------------------------------------------------------------------
    # Lifecycle
    # ------------------------------------------------------------------

    def choose(self, skill: str) -> str:
        """Commit to a skill; returns the skill's node id."""
        if skill not in self.skill_ids:
            raise ValueError(f"Unknown skill: {skill}")
        if self.chosen_skill is not None and self.chosen_skill != skill:
            raise ValueError(f"Skill already chosen: {self.chosen_skill}")
        self.chosen_skill = skill
        return self.skill_ids[skill]

    def is_done(self, node_id: str) -> bool:
        return self.at(self.robots[0], node_id).done

    def mark_done(self, node_id: str) -> None:
        """Done broadcast: set on every replica."""
        for robot in self.robots:
            state = self.at(robot, node_id)
            state.done = True
            state.active = False

    @property
    def root_done(self) -> bool:
        return self.is_done(ROOT_ID)

    def done_flags(self, robot: str) -> dict[str, bool]:
        return {node_id: self.at(robot, node_id).done for node_id in self.nodes}
