#!/usr/bin/env python3
"""Count nodes, relations and categories in the knowledge fixture by plain text scan.

    python scripts/check_fixture_counts.py [path/to/kb.tsv]
"""

import sys
from pathlib import Path

KB_PATH = Path(__file__).resolve().parent.parent / "data" / "kb" / "semantic_memory.tsv"


def count(path: Path = KB_PATH) -> tuple[int, int, int]:
    labels: set[str] = set()
    categories: set[str] = set()
    relations = 0
    for raw in path.read_text(encoding="utf-8").splitlines():
        if not raw.strip() or raw.lstrip().startswith("#") or raw.startswith("@kind"):
            continue
        source, category, target, _ = raw.split("\t")
        labels.update(("_".join(source.lower().split()), "_".join(target.lower().split())))
        categories.add(category.strip())
        relations += 1
    return len(labels), relations, len(categories)


if __name__ == "__main__":
    path = Path(sys.argv[1]) if len(sys.argv) > 1 else KB_PATH
    nodes, relations, categories = count(path)
    print(f"{path}: {nodes} nodes, {relations} relations, {categories} categories")
