"""Data constants for lingual perception - tag classes and suffix rules."""

from enum import StrEnum


class WordClass(StrEnum):
    """Content-word classes kept from an utterance."""

    NOUN = "noun"
    VERB = "verb"
    ADJECTIVE = "adjective"


# Penn Treebank tag prefix -> content-word class
TAG_CLASSES: dict[str, WordClass] = {
    "NN": WordClass.NOUN,    # NN, NNS, NNP, NNPS
    "VB": WordClass.VERB,    # VB, VBD, VBG, VBN, VBP, VBZ
    "JJ": WordClass.ADJECTIVE,  # JJ, JJR, JJS
}

# Universal POS handed to lemminflect for each class
UPOS_FOR_CLASS: dict[WordClass, str] = {
    WordClass.NOUN: "NOUN",
    WordClass.VERB: "VERB",
    WordClass.ADJECTIVE: "ADJ",
}

# Unknown-word fallback, checked in order: (suffix, tag)
SUFFIX_RULES: tuple[tuple[str, str], ...] = (
    ("ing", "VBG"),
    ("ly", "RB"),
    ("ish", "JJ"),
    ("y", "JJ"),
)

DEFAULT_TAG = "NN"
