"""
Lexicon package - tag tables and file loaders for lingual perception.

This package provides:
- Data constants (TAG_CLASSES, SUFFIX_RULES, UPOS_FOR_CLASS)
- The Lexicon bundle (tag lexicon, stopwords, lemma aliases)

Usage:
    from services.lexicon import Lexicon, TAG_CLASSES
"""

from .data import (
    DEFAULT_TAG,
    SUFFIX_RULES,
    TAG_CLASSES,
    UPOS_FOR_CLASS,
    WordClass,
)
from .loader import LEXICON_DIR, Lexicon, load_lexicon

__all__ = [
    # Data
    "DEFAULT_TAG",
    "SUFFIX_RULES",
    "TAG_CLASSES",
    "UPOS_FOR_CLASS",
    "WordClass",
    # Loader
    "LEXICON_DIR",
    "Lexicon",
    "load_lexicon",
]
