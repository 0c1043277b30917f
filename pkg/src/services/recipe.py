"""
Skill recipes: hierarchical task trees written as parenthesized infix strings.

Grammar (one operator kind per parenthesized level):

    expr := leaf | '(' expr (OP expr)+ ')'
    leaf := '(' ACTION IDENT ')'
    OP   := THEN | AND | OR

Recipe files hold one skill each:

    skill: TeaMaking
    ((PicknPlace Cup) THEN ((PicknPlace Tea) AND (PicknPlace Sugar)))
"""

import dataclasses
import logging
import re
from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path
from typing import Self

from services.similarity import item_lemma

logger = logging.getLogger(__name__)

RECIPE_SUFFIX = ".recipe"

IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_TOKENS = re.compile(r"\(|\)|[^\s()]+")


class NodeKind(StrEnum):
    SKILL_ROOT = "SkillRoot"
    SKILL = "Skill"
    THEN = "THEN"
    AND = "AND"
    OR = "OR"
    LEAF = "ObjectLeaf"


class Action(StrEnum):
    """Manipulation verbs a leaf can carry."""

    PICK_N_PLACE = "PicknPlace"


OPERATORS = {NodeKind.THEN, NodeKind.AND, NodeKind.OR}


class RecipeSyntaxError(ValueError):
    """Malformed recipe text; ``position`` is a character offset."""

    def __init__(self, message: str, position: int | None = None):
        suffix = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{suffix}")
        self.position = position


class SkillRegistrationError(ValueError):
    pass


# ============================================================================
# Task tree
# ============================================================================


@dataclass(frozen=True, slots=True)
class TaskNode:
    """
    Immutable task tree node.

    ``node_id`` is a preorder index assigned by :func:`number_tree`. It is
    excluded from equality so that structurally identical trees compare equal.
    """

    kind: NodeKind
    children: tuple["TaskNode", ...] = ()
    action: Action | None = None
    obj: str | None = None
    name: str | None = None
    node_id: int = field(default=-1, compare=False)

    def __post_init__(self) -> None:
        match self.kind:
            case NodeKind.LEAF:
                if self.children:
                    raise ValueError("Object leaf cannot have children")
                if self.action is None or not self.obj or not IDENT.fullmatch(self.obj):
                    raise ValueError(f"Object leaf needs an action and an identifier: {self.obj!r}")
            case NodeKind.THEN | NodeKind.AND | NodeKind.OR:
                if len(self.children) < 2:
                    raise ValueError(f"{self.kind} node needs at least 2 children")
            case NodeKind.SKILL:
                if not self.children or not self.name:
                    raise ValueError("Skill node needs a name and at least one child")
            case NodeKind.SKILL_ROOT:
                if any(child.kind != NodeKind.SKILL for child in self.children):
                    raise ValueError("SkillRoot children must all be Skill nodes")

    @classmethod
    def leaf(cls, obj: str, action: Action = Action.PICK_N_PLACE) -> Self:
        return cls(NodeKind.LEAF, action=action, obj=obj)

    @classmethod
    def op(cls, kind: NodeKind, *children: "TaskNode") -> Self:
        return cls(kind, children=tuple(children))

    @property
    def is_leaf(self) -> bool:
        return self.kind == NodeKind.LEAF

    @property
    def label(self) -> str:
        match self.kind:
            case NodeKind.LEAF:
                return self.obj or ""
            case NodeKind.SKILL:
                return self.name or ""
            case _:
                return str(self.kind)

    def walk(self) -> Iterator["TaskNode"]:
        """Preorder traversal."""
        yield self
        for child in self.children:
            yield from child.walk()

    def leaves(self) -> list["TaskNode"]:
        return [node for node in self.walk() if node.is_leaf]

    def size(self) -> int:
        return sum(1 for _ in self.walk())


def number_tree(tree: TaskNode, start: int = 0) -> TaskNode:
    """Copy of ``tree`` with preorder node ids starting at ``start``."""
    counter = start

    def visit(node: TaskNode) -> TaskNode:
        nonlocal counter
        node_id = counter
        counter += 1
        children = tuple(visit(child) for child in node.children)
        return dataclasses.replace(node, children=children, node_id=node_id)

    return visit(tree)


# ============================================================================
# Parsing
# ============================================================================


class _Parser:
    """Recursive-descent parser over (token, position) pairs."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = [(m.group(), m.start()) for m in _TOKENS.finditer(text)]
        self.i = 0

    def peek(self) -> tuple[str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, open_at: int | None = None) -> tuple[str, int]:
        token = self.peek()
        if token is None:
            raise RecipeSyntaxError("unbalanced parentheses: unclosed '('", open_at)
        self.i += 1
        return token

    def parse(self) -> TaskNode:
        if not self.tokens:
            raise RecipeSyntaxError("empty recipe")
        tree = self.expr()
        trailing = self.peek()
        if trailing is not None:
            token, pos = trailing
            if token == ")":
                raise RecipeSyntaxError("unbalanced parentheses: unexpected ')'", pos)
            raise RecipeSyntaxError(f"unexpected trailing input {token!r}", pos)
        return tree

    def expr(self) -> TaskNode:
        token, open_at = self.take()
        if token != "(":
            raise RecipeSyntaxError(f"expected '(' but found {token!r}", open_at)

        head, pos = self.take(open_at)
        if head == ")":
            raise RecipeSyntaxError("empty parentheses", pos)
        if head != "(":
            return self._leaf(head, pos, open_at)

        self.i -= 1
        children = [self.expr()]
        kind: NodeKind | None = None
        while True:
            token, pos = self.take(open_at)
            if token == ")":
                break
            try:
                op = NodeKind(token)
            except ValueError:
                op = None
            if op not in OPERATORS:
                raise RecipeSyntaxError(f"expected THEN, AND or OR but found {token!r}", pos)
            if kind is not None and op != kind:
                raise RecipeSyntaxError(
                    f"ambiguous mix of {kind} and {op} in one group; add parentheses", pos
                )
            kind = op
            children.append(self.expr())

        if kind is None:
            raise RecipeSyntaxError("group needs an operator between expressions", open_at)
        return TaskNode(kind, children=tuple(children))

    def _leaf(self, head: str, pos: int, open_at: int) -> TaskNode:
        try:
            action = Action(head)
        except ValueError:
            raise RecipeSyntaxError(f"unknown action {head!r}", pos) from None
        obj, obj_pos = self.take(open_at)
        if not IDENT.fullmatch(obj):
            raise RecipeSyntaxError(f"invalid object name {obj!r}", obj_pos)
        close, close_pos = self.take(open_at)
        if close != ")":
            raise RecipeSyntaxError(f"expected ')' after object but found {close!r}", close_pos)
        return TaskNode.leaf(obj, action)


def parse_recipe(text: str) -> TaskNode:
    """Parse a recipe expression into a numbered task tree."""
    return number_tree(_Parser(text).parse())


def serialize_recipe(tree: TaskNode) -> str:
    """Canonical recipe text for an expression tree."""
    match tree.kind:
        case NodeKind.LEAF:
            return f"({tree.action} {tree.obj})"
        case NodeKind.THEN | NodeKind.AND | NodeKind.OR:
            return "(" + f" {tree.kind} ".join(serialize_recipe(c) for c in tree.children) + ")"
        case _:
            raise ValueError(f"{tree.kind} nodes have no recipe form")


def load_recipe_file(path: Path | str) -> tuple[str, TaskNode]:
    """Read a ``skill: <Name>`` header followed by the recipe expression."""
    path = Path(path)
    lines = [
        line.strip()
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise RecipeSyntaxError(f"{path}: empty recipe file")

    key, _, name = lines[0].partition(":")
    name = name.strip()
    if key.strip().lower() != "skill" or not IDENT.fullmatch(name):
        raise RecipeSyntaxError(f"{path}: first line must be 'skill: <Name>'")

    try:
        tree = parse_recipe(" ".join(lines[1:]))
    except RecipeSyntaxError as e:
        raise RecipeSyntaxError(f"{path}: {e}") from e
    return name, tree


# ============================================================================
# Skill library
# ============================================================================


class SkillLibrary:
    """
    Registered skills plus an object -> skill-name index.

    Registration order is preserved and used to resolve objects that appear
    in more than one skill.
    """

    def __init__(self) -> None:
        self._skills: dict[str, TaskNode] = {}
        self.object_index: dict[str, set[str]] = {}

    def __len__(self) -> int:
        return len(self._skills)

    def __contains__(self, name: str) -> bool:
        return name in self._skills

    @property
    def names(self) -> list[str]:
        return list(self._skills)

    @property
    def skills(self) -> dict[str, TaskNode]:
        return dict(self._skills)

    def get(self, name: str) -> TaskNode:
        return self._skills[name]

    def register(self, name: str, tree: TaskNode | None) -> Self:
        if not name or not IDENT.fullmatch(name):
            raise SkillRegistrationError(f"Invalid skill name: {name!r}")
        if name in self._skills:
            raise SkillRegistrationError(f"Skill already registered: {name}")
        if tree is None or not tree.leaves():
            raise SkillRegistrationError(f"Skill {name} has an empty task tree")
        if tree.kind in (NodeKind.SKILL, NodeKind.SKILL_ROOT):
            raise SkillRegistrationError(f"Skill {name} must wrap a recipe expression")

        self._skills[name] = number_tree(tree)
        self._rebuild_index()
        logger.debug("Registered skill %s (%d leaves)", name, len(tree.leaves()))
        return self

    def _rebuild_index(self) -> None:
        index: dict[str, set[str]] = {}
        for name, tree in self._skills.items():
            for leaf in tree.leaves():
                index.setdefault(leaf.obj, set()).add(name)
        self.object_index = index

    def skills_for(self, obj: str) -> list[str]:
        """Skills whose tree contains ``obj``; falls back to lemma matching."""
        exact = self.object_index.get(obj, set())
        if exact:
            return [name for name in self._skills if name in exact]

        lemma = item_lemma(obj)
        return [
            name
            for name, tree in self._skills.items()
            if any(item_lemma(leaf.obj) == lemma for leaf in tree.leaves())
        ]

    def root(self) -> TaskNode:
        """SkillRoot over every registered skill, numbered in preorder."""
        skills = tuple(
            TaskNode(NodeKind.SKILL, children=(tree,), name=name)
            for name, tree in self._skills.items()
        )
        return number_tree(TaskNode(NodeKind.SKILL_ROOT, children=skills))


def register_skill(lib: SkillLibrary, name: str, tree: TaskNode) -> SkillLibrary:
    return lib.register(name, tree)


def load_skills(directory: Path | str) -> SkillLibrary:
    """Register every ``*.recipe`` file in ``directory``, sorted by file name."""
    directory = Path(directory)
    if not directory.is_dir():
        raise SkillRegistrationError(f"Skills directory not found: {directory}")

    lib = SkillLibrary()
    for path in sorted(directory.glob(f"*{RECIPE_SUFFIX}")):
        name, tree = load_recipe_file(path)
        lib.register(name, tree)
    logger.info("✓ Loaded %d skills from %s", len(lib), directory)
    return lib
