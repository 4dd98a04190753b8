"""Bit-exact on-disk formats shared with the feature extractor.

Feature file: 8-byte magic ``AVEC0001``, uint32 LE dim, then dim float32 LE
values (file length is exactly 12 + 4*dim bytes). Annotation file: JSON
object ``{"id": ..., "tokens": [...]}``. Both are written atomically
(temp file + rename) so concurrent readers never see partial files.
"""

from __future__ import annotations

import json
import os
import struct
import tempfile

import numpy as np

from .datamodel import TextAnnotation

FEATURE_MAGIC = b"AVEC0001"
_HEADER = struct.Struct("<8sI")


class StorageError(ValueError):
    pass


def _atomic_write(path, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_feature(values, path) -> None:
    arr = np.asarray(values, dtype=np.float32).ravel()
    if not np.all(np.isfinite(arr)):
        raise StorageError(f"refusing to write non-finite feature values to {path}")
    _atomic_write(path, _HEADER.pack(FEATURE_MAGIC, arr.size) + arr.tobytes())


def read_feature(path) -> np.ndarray:
    """Read a feature file back as float32; validates magic, dim, finiteness."""
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < _HEADER.size:
        raise StorageError(f"{path}: truncated header ({len(data)} bytes)")
    magic, dim = _HEADER.unpack_from(data)
    if magic != FEATURE_MAGIC:
        raise StorageError(f"{path}: bad magic {magic!r}")
    expected = _HEADER.size + 4 * dim
    if len(data) != expected:
        raise StorageError(
            f"{path}: declared dim {dim} implies {expected} bytes, file has {len(data)}"
        )
    values = np.frombuffer(data, dtype="<f4", offset=_HEADER.size)
    if not np.all(np.isfinite(values)):
        raise StorageError(f"{path}: non-finite value in payload")
    return values.copy()


def write_annotation(annotation: TextAnnotation, path) -> None:
    payload = json.dumps(
        {"id": annotation.id, "tokens": list(annotation.tokens)}, ensure_ascii=False
    )
    _atomic_write(path, payload.encode("utf-8"))


def read_annotation(path, expected_id: str | None = None) -> TextAnnotation:
    """Parse an annotation file. An id mismatch is a warning, not an error."""
    with open(path, encoding="utf-8") as f:
        try:
            obj = json.load(f)
        except json.JSONDecodeError as e:
            raise StorageError(f"{path}: malformed JSON: {e}") from None
    if "tokens" not in obj or "id" not in obj:
        raise StorageError(f"{path}: missing 'id' or 'tokens' key")
    if not isinstance(obj["tokens"], list):
        raise StorageError(f"{path}: 'tokens' must be a list")
    annotation = TextAnnotation(id=str(obj["id"]), tokens=tuple(str(t) for t in obj["tokens"]))
    if expected_id is not None and annotation.id != expected_id:
        import warnings

        warnings.warn(
            f"{path}: annotation id {annotation.id!r} does not match manifest id {expected_id!r}"
        )
    return annotation
