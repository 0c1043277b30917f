"""
Semantic memory backed by a labeled networkx graph.

Knowledge is stored as concept-relationship-concept and
concept-relationship-feature triples in a TSV file:

    source<TAB>category<TAB>target<TAB>weight
    @kind<TAB>label<TAB>{synset|lemma|concept|feature}

Lines starting with ``#`` are comments. Nodes are created on first mention
and default to ``concept`` unless an ``@kind`` line says otherwise.
"""

import logging
import re
from collections.abc import Iterable
from dataclasses import dataclass
from enum import StrEnum
from functools import lru_cache
from pathlib import Path
from typing import Self

import networkx as nx

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent.parent.parent / "data"
DEFAULT_KB_PATH = DATA_DIR / "kb" / "semantic_memory.tsv"

_WHITESPACE = re.compile(r"\s+")


class NodeKind(StrEnum):
    """Semantic memory node taxonomy."""

    SYNSET = "synset"
    LEMMA = "lemma"
    CONCEPT = "concept"
    FEATURE = "feature"


class KnowledgeFormatError(ValueError):
    """Raised when a knowledge file violates the triple format."""

    def __init__(self, message: str, path: Path | str | None = None, line: int | None = None):
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            location = f"line {line}: "
        super().__init__(f"{location}{message}")
        self.path = path
        self.line = line


def normalize_label(text: str) -> str:
    """Lowercase, trim and collapse inner whitespace to a single underscore."""
    return _WHITESPACE.sub("_", text.strip().lower())


@dataclass(frozen=True, slots=True)
class KnowledgeNode:
    id: int
    label: str
    kind: NodeKind


@dataclass(frozen=True, slots=True)
class Relation:
    source: int
    category: str
    target: int
    weight: float = 1.0


class KnowledgeBase:
    """
    Immutable semantic-memory graph.

    Edges live in a frozen ``MultiDiGraph`` keyed by relation category, so a
    (source, category, target) triple can exist only once. Neighborhood
    queries run on an undirected projection: an edge is traversable from
    either endpoint.
    """

    def __init__(
        self,
        nodes: Iterable[KnowledgeNode] = (),
        relations: Iterable[Relation] = (),
    ) -> None:
        graph = nx.MultiDiGraph()
        self._by_label: dict[str, set[int]] = {}

        for node in nodes:
            if node.id in graph:
                raise ValueError(f"Duplicate node id: {node.id}")
            if not node.label or node.label != normalize_label(node.label):
                raise ValueError(f"Label not normalized: {node.label!r}")
            graph.add_node(node.id, label=node.label, kind=node.kind)
            self._by_label.setdefault(node.label, set()).add(node.id)

        for rel in relations:
            if rel.source not in graph or rel.target not in graph:
                raise ValueError(f"Dangling relation endpoint: {rel}")
            if graph.has_edge(rel.source, rel.target, key=rel.category):
                raise ValueError(f"Duplicate relation: {rel}")
            if not 0.0 < rel.weight <= 1.0:
                raise ValueError(f"Relation weight outside (0, 1]: {rel}")
            graph.add_edge(rel.source, rel.target, key=rel.category, weight=rel.weight)

        self.graph = nx.freeze(graph)
        self._undirected_cache: dict[frozenset[str], nx.Graph] = {}

    # ------------------------------------------------------------------
    # Accessors
    # ------------------------------------------------------------------

    @property
    def categories(self) -> set[str]:
        return {key for _, _, key in self.graph.edges(keys=True)}

    def node(self, node_id: int) -> KnowledgeNode:
        attrs = self.graph.nodes[node_id]
        return KnowledgeNode(node_id, attrs["label"], attrs["kind"])

    def nodes(self) -> list[KnowledgeNode]:
        return [self.node(node_id) for node_id in sorted(self.graph.nodes)]

    def relations(self) -> list[Relation]:
        return [
            Relation(u, key, v, data["weight"])
            for u, v, key, data in self.graph.edges(keys=True, data=True)
        ]

    def ids_for(self, label: str) -> set[int]:
        return set(self._by_label.get(normalize_label(label), ()))

    def __contains__(self, label: str) -> bool:
        return bool(self.ids_for(label))

    def stats(self) -> tuple[int, int, int]:
        """(node count, relation count, category count)."""
        return (
            self.graph.number_of_nodes(),
            self.graph.number_of_edges(),
            len(self.categories),
        )

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def _undirected(self, exclude: frozenset[str]) -> nx.Graph:
        view = self._undirected_cache.get(exclude)
        if view is None:
            view = nx.Graph()
            view.add_nodes_from(self.graph.nodes)
            view.add_edges_from(
                (u, v) for u, v, key in self.graph.edges(keys=True) if key not in exclude
            )
            self._undirected_cache[exclude] = view
        return view

    def neighbors(
        self,
        label: str,
        radius: int = 1,
        exclude: Iterable[str] = (),
    ) -> set[str]:
        """
        Labels reachable from any node carrying ``label`` within ``radius`` hops.

        The query label itself is never part of the result. Unknown labels
        yield an empty set.
        """
        if radius < 1:
            raise ValueError(f"radius must be >= 1, got {radius}")

        label = normalize_label(label)
        sources = self._by_label.get(label)
        if not sources:
            return set()

        undirected = self._undirected(frozenset(exclude))
        found: set[str] = set()
        for source in sorted(sources):
            reach = nx.single_source_shortest_path_length(undirected, source, cutoff=radius)
            found.update(self.graph.nodes[node_id]["label"] for node_id in reach)
        found.discard(label)
        return found

    @classmethod
    @lru_cache(maxsize=1)
    def get_instance(cls) -> Self:
        """Get the repository fixture knowledge base (cached)."""
        return load_kb(DEFAULT_KB_PATH)


# ============================================================================
# File I/O
# ============================================================================


def _parse_weight(raw: str, path: Path | str, line_no: int) -> float:
    try:
        weight = float(raw)
    except ValueError:
        raise KnowledgeFormatError(f"weight is not a number: {raw!r}", path, line_no) from None
    if not 0.0 < weight <= 1.0:
        raise KnowledgeFormatError(f"weight outside (0, 1]: {weight}", path, line_no)
    return weight


def parse_kb(text: str, path: Path | str = "<string>") -> KnowledgeBase:
    """Parse knowledge TSV text into a KnowledgeBase."""
    kinds: dict[str, tuple[NodeKind, int]] = {}
    triples: list[tuple[str, str, str, float, int]] = []
    seen: dict[tuple[str, str, str], int] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        fields = [f.strip() for f in raw.split("\t")]

        if fields[0] == "@kind":
            if len(fields) != 3:
                raise KnowledgeFormatError("kind line needs 3 tab-separated fields", path, line_no)
            label = normalize_label(fields[1])
            try:
                kind = NodeKind(fields[2].lower())
            except ValueError:
                raise KnowledgeFormatError(
                    f"unknown node kind: {fields[2]!r}", path, line_no
                ) from None
            if not label:
                raise KnowledgeFormatError("empty label in kind line", path, line_no)
            previous = kinds.get(label)
            if previous and previous[0] != kind:
                raise KnowledgeFormatError(
                    f"{label!r} already declared as {previous[0]} on line {previous[1]}",
                    path,
                    line_no,
                )
            kinds[label] = (kind, line_no)
            continue

        if len(fields) != 4:
            raise KnowledgeFormatError(
                f"expected 4 tab-separated fields, got {len(fields)}", path, line_no
            )
        source, category, target = normalize_label(fields[0]), fields[1], normalize_label(fields[2])
        if not source or not target or not category:
            raise KnowledgeFormatError("empty source, category or target", path, line_no)
        weight = _parse_weight(fields[3], path, line_no)

        triple = (source, category, target)
        if triple in seen:
            raise KnowledgeFormatError(
                f"duplicate triple {source} {category} {target} (first on line {seen[triple]})",
                path,
                line_no,
            )
        seen[triple] = line_no
        triples.append((source, category, target, weight, line_no))

    ids: dict[str, int] = {}
    for source, _, target, _, _ in triples:
        for label in (source, target):
            if label not in ids:
                ids[label] = len(ids) + 1

    for label, (_, line_no) in kinds.items():
        if label not in ids:
            raise KnowledgeFormatError(
                f"dangling kind declaration: {label!r} is never used by a triple", path, line_no
            )

    nodes = [
        KnowledgeNode(node_id, label, kinds.get(label, (NodeKind.CONCEPT, 0))[0])
        for label, node_id in ids.items()
    ]
    relations = [
        Relation(ids[source], category, ids[target], weight)
        for source, category, target, weight, _ in triples
    ]
    return KnowledgeBase(nodes, relations)


def load_kb(path: Path | str) -> KnowledgeBase:
    """Load a knowledge TSV file from disk."""
    path = Path(path)
    if not path.exists():
        raise KnowledgeFormatError("file not found", path)

    logger.info("📚 Loading knowledge base from %s...", path)
    kb = parse_kb(path.read_text(encoding="utf-8"), path)
    n_nodes, n_edges, n_categories = kb.stats()
    logger.info(
        "✓ Loaded %d nodes, %d relations (%d categories)", n_nodes, n_edges, n_categories
    )
    return kb


def dump_kb(kb: KnowledgeBase) -> str:
    """Serialize a KnowledgeBase back to the TSV triple format."""
    lines = ["# source\tcategory\ttarget\tweight"]
    for node in kb.nodes():
        if node.kind != NodeKind.CONCEPT:
            lines.append(f"@kind\t{node.label}\t{node.kind}")
    for rel in kb.relations():
        source = kb.node(rel.source).label
        target = kb.node(rel.target).label
        lines.append(f"{source}\t{rel.category}\t{target}\t{rel.weight!r}")
    return "\n".join(lines) + "\n"


def neighbors(
    kb: KnowledgeBase, label: str, radius: int = 1, exclude: Iterable[str] = ()
) -> set[str]:
    """Module-level form of :meth:`KnowledgeBase.neighbors`."""
    return kb.neighbors(label, radius, exclude)
