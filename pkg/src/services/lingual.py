"""Lingual perception: utterance -> tokens -> POS tags -> tagged content words."""

import re
import time
from dataclasses import dataclass, field

from lemminflect import getLemma

from services.knowledge import normalize_label
from services.lexicon import (
    DEFAULT_TAG,
    SUFFIX_RULES,
    TAG_CLASSES,
    UPOS_FOR_CLASS,
    Lexicon,
    WordClass,
)

# Letter/digit runs in any script with an optional apostrophe part (I'm, don't, café)
_TOKEN = re.compile(r"[^\W_]+(?:'[^\W_]+)?")


@dataclass(frozen=True, slots=True)
class Utterance:
    """A typed utterance standing in for the echoic stream."""

    text: str
    timestamp: int = field(default_factory=time.monotonic_ns)

    def __post_init__(self) -> None:
        if not self.text or not self.text.strip():
            raise ValueError("Utterance text is empty")


@dataclass(frozen=True, slots=True)
class TaggedWord:
    """A noun, verb or adjective extracted from an utterance."""

    token: str
    tag: str
    klass: WordClass
    lemma: str


def word_class(tag: str) -> WordClass | None:
    """NN* -> noun, VB* -> verb, JJ* -> adjective; anything else -> None."""
    return TAG_CLASSES.get(tag[:2])


def tokenize(utterance: Utterance | str) -> list[str]:
    """Split into word tokens, dropping punctuation and keeping case."""
    text = utterance.text if isinstance(utterance, Utterance) else utterance
    return _TOKEN.findall(text)


def _suffix_tag(token: str) -> str:
    lower = token.lower()
    for suffix, tag in SUFFIX_RULES:
        if lower.endswith(suffix) and len(lower) > len(suffix):
            return tag
    return DEFAULT_TAG


def pos_tag(tokens: list[str], lexicon: Lexicon) -> list[tuple[str, str]]:
    """Tag every token: lexicon lookup, then suffix heuristics, then NN."""
    return [(token, lexicon.tag_for(token) or _suffix_tag(token)) for token in tokens]


def lemmatize(token: str, klass: WordClass, aliases: dict[str, str] | None = None) -> str:
    """Alias table first, then lemminflect, then the lowercase surface."""
    lower = token.lower()
    if aliases and lower in aliases:
        return normalize_label(aliases[lower])
    lemmas = getLemma(lower, upos=UPOS_FOR_CLASS[klass])
    return normalize_label(lemmas[0] if lemmas else lower)


def extract_tagged_words(
    tagged: list[tuple[str, str]],
    stopwords: frozenset[str] | set[str],
    aliases: dict[str, str] | None = None,
) -> list[TaggedWord]:
    """
    Keep NN*/VB*/JJ* tokens that are not stopwords by surface or by lemma.

    Utterance order is preserved and repeated lemmas are dropped.
    """
    words: list[TaggedWord] = []
    seen_lemmas: set[str] = set()

    for token, tag in tagged:
        klass = word_class(tag)
        if klass is None or token.lower() in stopwords:
            continue
        lemma = lemmatize(token, klass, aliases)
        if lemma in stopwords or lemma in seen_lemmas:
            continue
        seen_lemmas.add(lemma)
        words.append(TaggedWord(token=token, tag=tag, klass=klass, lemma=lemma))

    return words


def analyze(text: str, lexicon: Lexicon | None = None) -> list[TaggedWord]:
    """Run the full lingual pipeline on raw text."""
    lexicon = lexicon or Lexicon.get_instance()
    tokens = tokenize(Utterance(text))
    return extract_tagged_words(pos_tag(tokens, lexicon), lexicon.stopwords, lexicon.aliases)
