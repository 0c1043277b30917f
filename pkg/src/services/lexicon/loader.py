"""Load the tag lexicon, stopword list and lemma-alias table from disk."""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Self

logger = logging.getLogger(__name__)

LEXICON_DIR = Path(__file__).resolve().parent.parent.parent.parent / "data" / "lexicon"


def _content_lines(path: Path):
    """Yield (line number, stripped line) for non-blank, non-comment lines."""
    for line_no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield line_no, raw.rstrip("\n")


def _read_pairs(path: Path) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for line_no, line in _content_lines(path):
        fields = [f.strip() for f in line.split("\t")]
        if len(fields) != 2 or not all(fields):
            raise ValueError(f"{path}:{line_no}: expected 2 tab-separated fields")
        pairs[fields[0].lower()] = fields[1]
    return pairs


@dataclass(frozen=True, slots=True)
class Lexicon:
    """Tag lexicon, stopwords and lemma aliases used by the tagger."""

    tags: dict[str, str] = field(default_factory=dict)
    stopwords: frozenset[str] = frozenset()
    aliases: dict[str, str] = field(default_factory=dict)

    def tag_for(self, token: str) -> str | None:
        """Exact lookup first, then lowercase."""
        return self.tags.get(token) or self.tags.get(token.lower())

    @classmethod
    @lru_cache(maxsize=1)
    def get_instance(cls) -> Self:
        """Get the repository lexicon (cached)."""
        return load_lexicon(LEXICON_DIR)


def load_lexicon(directory: Path | str) -> Lexicon:
    """
    Load ``lexicon.tsv``, ``stopwords.txt`` and ``lemma_aliases.tsv``.

    Missing stopword or alias files are treated as empty.
    """
    directory = Path(directory)
    lexicon_path = directory / "lexicon.tsv"
    if not lexicon_path.exists():
        raise ValueError(f"Lexicon not found: {lexicon_path}")

    logger.info("📚 Loading lexicon from %s...", directory)
    tags = _read_pairs(lexicon_path)

    stop_path = directory / "stopwords.txt"
    stopwords = (
        frozenset(line.strip().lower() for _, line in _content_lines(stop_path))
        if stop_path.exists()
        else frozenset()
    )

    alias_path = directory / "lemma_aliases.tsv"
    aliases = _read_pairs(alias_path) if alias_path.exists() else {}

    logger.info(
        "✓ Loaded %d tags, %d stopwords, %d aliases", len(tags), len(stopwords), len(aliases)
    )
    return Lexicon(tags=tags, stopwords=stopwords, aliases=aliases)
