"""Document text to sparse term vectors.

Pipeline: tokenize, drop stop words, stem, count stems, prune rare stems,
normalize by the document's surviving term count. Everything here is a
pure function; vectors are plain stem->weight maps safe to share across
threads.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Iterable

from .porter import stem

# maximal runs of alphanumerics (unicode kept as-is, underscore excluded)
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# raw stem counts below this are pruned from the vector
MIN_STEM_COUNT = 2


@dataclass(frozen=True)
class RawDocument:
    """One fetched document: pre-extracted plain text plus bookkeeping."""

    doc_id: str
    uri: str
    text: str
    fetched_at: date


@dataclass
class TermVector:
    """Sparse stem->weight map; weights are fractions of the document's
    surviving term count, so each is in (0, 1] and they sum to at most 1."""

    doc_id: str
    weights: dict[str, float] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.weights)

    def norm(self) -> float:
        return math.sqrt(math.fsum(w * w for _, w in sorted(self.weights.items())))


def tokenize(text: str) -> list[str]:
    """Lower-case maximal alphanumeric runs, in document order."""
    return _TOKEN_RE.findall(text.lower())


def remove_stopwords(tokens: Iterable[str], stoplist: frozenset[str]) -> list[str]:
    return [t for t in tokens if t not in stoplist]


def load_stoplist(path: str | Path) -> frozenset[str]:
    """One word per line, UTF-8; blank lines and '#' comments ignored."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.split("#", 1)[0].strip()
        if word:
            words.add(word.lower())
    return frozenset(words)


def default_stoplist() -> frozenset[str]:
    return load_stoplist(Path(__file__).parent / "data" / "stoplist.txt")


def build_vector(doc: RawDocument, stoplist: frozenset[str]) -> TermVector:
    """Vectorize one document.

    The weight denominator is the count of all surviving (stop-filtered,
    stemmed) tokens, taken before rare-stem pruning, which is why weights
    sum to at most 1 rather than exactly 1.
    """
    stems = [stem(t) for t in remove_stopwords(tokenize(doc.text), stoplist)]
    stems = [s for s in stems if s]  # stemming can erase 1-letter tokens
    total = len(stems)
    if total == 0:
        return TermVector(doc.doc_id)
    counts = Counter(stems)
    weights = {
        s: n / total
        for s, n in sorted(counts.items())
        if n >= MIN_STEM_COUNT
    }
    return TermVector(doc.doc_id, weights)


def cosine(a: TermVector, b: TermVector) -> float:
    """Cosine similarity over the sparse maps, in [0, 1].

    Sums run over sorted keys with fsum, so the value depends only on the
    map contents, never on insertion order.
    """
    if not a.weights or not b.weights:
        return 0.0
    if a.weights == b.weights:
        return 1.0
    small, large = (a.weights, b.weights) if len(a.weights) <= len(b.weights) else (b.weights, a.weights)
    dot = math.fsum(w * large[s] for s, w in sorted(small.items()) if s in large)
    if dot == 0.0:
        return 0.0
    return min(1.0, dot / (a.norm() * b.norm()))
