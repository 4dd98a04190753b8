"""Text-count encoding, appearance features, and their fusion.

A text vector holds per-image word occurrence counts over a fixed
vocabulary, stored sparse (index -> count) because almost all entries are
zero. Fusion concatenates the appearance vector with the k-scaled text
vector: appearance segment first, then entry 2048+i = k * counts[i].
No other normalization is applied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datamodel import DatasetManifest, TextAnnotation, binary_target
from .storage import StorageError, read_annotation, read_feature
from .vocab import Vocabulary, tokenize

DEFAULT_APPEARANCE_DIM = 2048
DEFAULT_K = 0.5


class EncodingError(ValueError):
    pass


@dataclass(frozen=True)
class FusionConfig:
    k: float = DEFAULT_K
    appearance_dim: int = DEFAULT_APPEARANCE_DIM
    n: int = 3000

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"k must be >= 0, got {self.k}")
        if self.appearance_dim < 1 or self.n < 1:
            raise ValueError("dimensions must be >= 1")

    @property
    def fused_dim(self) -> int:
        return self.appearance_dim + self.n


@dataclass(frozen=True)
class TextVector:
    n: int
    entries: dict  # index -> count, counts >= 1

    def to_dense(self, dtype=np.float64) -> np.ndarray:
        dense = np.zeros(self.n, dtype=dtype)
        for idx, count in self.entries.items():
            dense[idx] = count
        return dense


def encode_text(annotation: TextAnnotation, vocab: Vocabulary) -> TextVector:
    """Count occurrences of each vocabulary word; OOV tokens contribute nothing."""
    if len(vocab) == 0:
        raise EncodingError("vocabulary is empty")
    entries: dict = {}
    index = vocab.index
    for token in tokenize(annotation):
        i = index.get(token)
        if i is not None:
            entries[i] = entries.get(i, 0) + 1
    return TextVector(n=len(vocab), entries=entries)


def fuse(v_a: np.ndarray, v_t: TextVector, cfg: FusionConfig) -> np.ndarray:
    """Concatenate appearance vector with k-scaled text counts (float64)."""
    v_a = np.asarray(v_a, dtype=np.float64).ravel()
    if v_a.size != cfg.appearance_dim:
        raise EncodingError(
            f"appearance dim mismatch: expected {cfg.appearance_dim}, got {v_a.size}"
        )
    if v_t.n != cfg.n:
        raise EncodingError(f"text dim mismatch: expected {cfg.n}, got {v_t.n}")
    fused = np.empty(cfg.fused_dim, dtype=np.float64)
    fused[: cfg.appearance_dim] = v_a
    text = fused[cfg.appearance_dim :]
    text[:] = 0.0
    for idx, count in v_t.entries.items():
        text[idx] = cfg.k * count
    return fused


def encode_dataset(manifest: DatasetManifest, vocab: Vocabulary, cfg: FusionConfig):
    """Encode every record into a (N, appearance_dim + n) matrix plus targets.

    Row order equals manifest order. File errors are re-raised naming the
    offending sample id.
    """
    n_samples = len(manifest)
    X = np.empty((n_samples, cfg.fused_dim), dtype=np.float64)
    y = np.empty(n_samples, dtype=np.int64)
    for row, record in enumerate(manifest):
        try:
            v_a = read_feature(record.feature_ref)
            annotation = read_annotation(record.annotation_ref, expected_id=record.id)
        except (OSError, StorageError) as e:
            raise EncodingError(f"sample {record.id!r}: {e}") from e
        X[row] = fuse(v_a, encode_text(annotation, vocab), cfg)
        y[row] = binary_target(record)
    return X, y
