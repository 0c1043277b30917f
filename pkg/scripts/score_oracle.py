#!/usr/bin/env python3
"""Brute-force Jaccard scores straight from the knowledge TSV.

Reads the triple file line by line (no graph library, no parser from src/)
and recomputes radius-1 signatures by scanning every edge. Used by the test
suite as an independent oracle and runnable by hand:

    python scripts/score_oracle.py cold hungry -- tea cup bread1
"""

import re
import sys
from pathlib import Path

KB_PATH = Path(__file__).resolve().parent.parent / "data" / "kb" / "semantic_memory.tsv"


def label(text: str) -> str:
    return "_".join(text.lower().split())


def item_label(name: str) -> str:
    base = re.sub(r"\d+$", "", label(name))
    return base or label(name)


def load_triples(path: Path = KB_PATH) -> list[tuple[str, str, str]]:
    triples = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        if not raw.strip() or raw.lstrip().startswith("#") or raw.startswith("@kind"):
            continue
        source, category, target, _weight = raw.split("\t")
        triples.append((label(source), category.strip(), label(target)))
    return triples


def brute_signature(triples: list[tuple[str, str, str]], term: str) -> set[str]:
    members = {term}
    for source, _, target in triples:
        if source == term:
            members.add(target)
        if target == term:
            members.add(source)
    return members


def brute_score(triples: list[tuple[str, str, str]], word: str, item: str) -> float:
    a = brute_signature(triples, label(word))
    b = brute_signature(triples, item_label(item))
    return len(a & b) / len(a | b)


def brute_matrix(words: list[str], items: list[str], path: Path = KB_PATH) -> list[list[float]]:
    triples = load_triples(path)
    return [[brute_score(triples, w, i) for i in items] for w in words]


def main(argv: list[str]) -> None:
    if "--" not in argv:
        print(__doc__)
        sys.exit(1)
    split = argv.index("--")
    words, items = argv[:split], argv[split + 1 :]
    print("\t".join(["", *items]))
    for word, row in zip(words, brute_matrix(words, items), strict=True):
        print("\t".join([label(word), *(f"{v:.7f}" for v in row)]))


if __name__ == "__main__":
    main(sys.argv[1:])
