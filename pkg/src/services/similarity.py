"""
Semantic similarity between tagged words and tabletop items.

Both sides of the comparison become semantic signatures: the term plus its
knowledge-graph neighborhood within ``radius`` hops. The similarity index is
the Jaccard ratio of the two signatures.
"""

import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Literal

from services.knowledge import KnowledgeBase, normalize_label
from services.lingual import TaggedWord

_TRAILING_DIGITS = re.compile(r"\d+$")

Aggregate = Literal["max", "sum"]


class NoAssociation(ValueError):
    """Every available item scored zero against the utterance."""


def item_lemma(name: str) -> str:
    """World object name -> KB lemma (``Bread1`` -> ``bread``)."""
    label = normalize_label(name)
    return _TRAILING_DIGITS.sub("", label) or label


@dataclass(frozen=True, slots=True)
class SemanticSignature:
    term: str
    members: frozenset[str]
    radius: int = 1

    def __post_init__(self) -> None:
        if self.term not in self.members:
            raise ValueError(f"Signature of {self.term!r} must contain the term itself")


@dataclass(frozen=True, slots=True)
class ScoreTable:
    """Tagged-word (rows) x item (columns) similarity matrix."""

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    cells: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            raise ValueError("Row and column labels must be unique")
        if len(self.cells) != len(self.rows) or any(len(r) != len(self.cols) for r in self.cells):
            raise ValueError("Score table is not a complete matrix")
        if any(not 0.0 <= v <= 1.0 for r in self.cells for v in r):
            raise ValueError("Score outside [0, 1]")

    def cell(self, row: str, col: str) -> float:
        return self.cells[self.rows.index(row)][self.cols.index(col)]

    def row(self, row: str) -> dict[str, float]:
        return dict(zip(self.cols, self.cells[self.rows.index(row)], strict=True))

    def to_tsv(self, precision: int = 7) -> str:
        """Table layout: words vertical, items horizontal."""
        lines = ["\t".join(("", *self.cols))]
        for label, values in zip(self.rows, self.cells, strict=True):
            lines.append("\t".join((label, *(f"{v:.{precision}f}" for v in values))))
        return "\n".join(lines) + "\n"


def parse_score_tsv(text: str) -> ScoreTable:
    """Read back a table written by :meth:`ScoreTable.to_tsv`."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        return ScoreTable((), (), ())
    cols = tuple(lines[0].split("\t")[1:])
    rows: list[str] = []
    cells: list[tuple[float, ...]] = []
    for line in lines[1:]:
        label, *values = line.split("\t")
        rows.append(label)
        cells.append(tuple(float(v) for v in values))
    return ScoreTable(tuple(rows), cols, tuple(cells))


# ============================================================================
# Similarity index
# ============================================================================


def signature(
    kb: KnowledgeBase, term: str, radius: int = 1, exclude: Iterable[str] = ()
) -> SemanticSignature:
    """Term plus its radius-hop neighborhood; unknown terms give a singleton."""
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    term = normalize_label(term)
    members = frozenset({term} | kb.neighbors(term, radius, exclude))
    return SemanticSignature(term=term, members=members, radius=radius)


def jaccard(a: SemanticSignature, b: SemanticSignature) -> float:
    """|A ∩ B| / |A ∪ B|."""
    union = a.members | b.members
    if not union:
        return 0.0
    return len(a.members & b.members) / len(union)


def score_matrix(
    kb: KnowledgeBase,
    words: Sequence[TaggedWord | str],
    items: Sequence[str],
    radius: int = 1,
    exclude: Iterable[str] = (),
) -> ScoreTable:
    """Jaccard score of every tagged word against every item."""
    if not items:
        raise ValueError("score_matrix needs at least one item")
    exclude = frozenset(exclude)

    rows = tuple(
        dict.fromkeys(w.lemma if isinstance(w, TaggedWord) else normalize_label(w) for w in words)
    )
    item_sigs = {
        name: signature(kb, item_lemma(name), radius, exclude) for name in dict.fromkeys(items)
    }
    cells = []
    for lemma in rows:
        word_sig = signature(kb, lemma, radius, exclude)
        cells.append(tuple(jaccard(word_sig, item_sigs[name]) for name in item_sigs))
    return ScoreTable(rows=rows, cols=tuple(item_sigs), cells=tuple(cells))


def item_scores(table: ScoreTable, mode: Aggregate = "max") -> dict[str, float]:
    """Collapse the word rows into one score per item."""
    result: dict[str, float] = {}
    for j, col in enumerate(table.cols):
        column = [row[j] for row in table.cells]
        if not column:
            result[col] = 0.0
        elif mode == "sum":
            result[col] = sum(column)
        else:
            result[col] = max(column)
    return result


def normalized_shares(row: Mapping[str, float], available: Sequence[str]) -> dict[str, float]:
    """
    Each available item's share of the summed score, in percent.

    Items missing from ``row`` but listed as available are looked up by
    their lemma-equivalent column (``Bread1`` falls back to ``Bread``).
    """
    by_lemma: dict[str, float] = {}
    for name, score in row.items():
        by_lemma.setdefault(item_lemma(name), score)

    scores = {
        name: row[name] if name in row else by_lemma.get(item_lemma(name), 0.0)
        for name in available
    }
    total = sum(scores.values())
    if total <= 0.0:
        raise NoAssociation("no semantic association between the cue and any available item")
    return {name: 100.0 * score / total for name, score in scores.items()}
