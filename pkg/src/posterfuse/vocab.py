"""Corpus word histogram with a capped dictionary, truncated to a top-n vocabulary.

The histogram counts total occurrences of each normalized token across the
corpus. The dictionary is capped (default 500k distinct words): once full,
previously unseen words are dropped (existing words keep counting). The
vocabulary is the top-n words by count, ties broken lexicographically,
which fixes the index order of the text vectors.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .datamodel import TextAnnotation

DEFAULT_CAP = 500_000
DEFAULT_TOP_N = 3000

_SPLIT = re.compile(r"[^0-9a-z]+")


class VocabularyError(ValueError):
    pass


def tokenize(annotation: TextAnnotation | Iterable[str]) -> list[str]:
    """Normalize tokens: lowercase, split on non-alphanumeric, drop empties.

    No stop-word removal; article words stay in.
    """
    tokens = annotation.tokens if isinstance(annotation, TextAnnotation) else annotation
    out = []
    for raw in tokens:
        for piece in _SPLIT.split(raw.lower()):
            if piece:
                out.append(piece)
    return out


@dataclass
class WordHistogram:
    counts: Counter = field(default_factory=Counter)
    cap: int = DEFAULT_CAP
    overflow_dropped: int = 0

    def add(self, annotation: TextAnnotation | Iterable[str]) -> None:
        for token in tokenize(annotation):
            if token in self.counts:
                self.counts[token] += 1
            elif len(self.counts) < self.cap:
                self.counts[token] = 1
            else:
                self.overflow_dropped += 1

    def merge(self, other: "WordHistogram") -> None:
        """Commutative merge of shard counts (cap re-applied on sorted words)."""
        merged = self.counts + other.counts
        if len(merged) > self.cap:
            keep = sorted(merged.items(), key=lambda kv: (-kv[1], kv[0]))[: self.cap]
            self.overflow_dropped += len(merged) - self.cap
            merged = Counter(dict(keep))
        self.counts = merged
        self.overflow_dropped += other.overflow_dropped


def build_histogram(annotations: Iterable[TextAnnotation], cap: int = DEFAULT_CAP) -> WordHistogram:
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    hist = WordHistogram(cap=cap)
    for annotation in annotations:
        hist.add(annotation)
    return hist


@dataclass(frozen=True)
class Vocabulary:
    words: tuple[str, ...]
    source_counts: tuple[int, ...]
    index: dict = field(repr=False, hash=False, compare=False, default=None)

    def __post_init__(self):
        if len(set(self.words)) != len(self.words):
            raise VocabularyError("vocabulary words must be unique")
        object.__setattr__(self, "index", {w: i for i, w in enumerate(self.words)})

    def __len__(self):
        return len(self.words)


def truncate_top_k(hist: WordHistogram, n: int = DEFAULT_TOP_N) -> Vocabulary:
    """Top-n words by count descending, ties by ascending word; deterministic."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ranked = sorted(hist.counts.items(), key=lambda kv: (-kv[1], kv[0]))[:n]
    return Vocabulary(
        words=tuple(w for w, _ in ranked),
        source_counts=tuple(c for _, c in ranked),
    )


def save_vocabulary(vocab: Vocabulary, path) -> None:
    """One `word<TAB>count` per line; line order = vector index order."""
    with open(path, "w", encoding="utf-8") as f:
        for word, count in zip(vocab.words, vocab.source_counts):
            f.write(f"{word}\t{count}\n")


def load_vocabulary(path) -> Vocabulary:
    words, counts, seen = [], [], set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise VocabularyError(f"{path}:{lineno}: expected 'word<TAB>count'")
            word, count_str = parts
            try:
                count = int(count_str)
            except ValueError:
                raise VocabularyError(f"{path}:{lineno}: bad count {count_str!r}") from None
            if word in seen:
                raise VocabularyError(f"{path}:{lineno}: duplicate word {word!r}")
            seen.add(word)
            words.append(word)
            counts.append(count)
    return Vocabulary(words=tuple(words), source_counts=tuple(counts))
