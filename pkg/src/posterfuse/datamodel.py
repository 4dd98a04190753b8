"""Core domain types and dataset manifests.

A manifest is a JSON Lines file, one record per line:

    {"id": "...", "image_path": null, "category": "PoliticalPoster",
     "annotation_ref": "ann/x.json", "feature_ref": "feat/x.avec"}

Categories are a closed five-way taxonomy; the binary training target is
derived (1 for PoliticalPoster, 0 for everything else), never stored.
"""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass, field


class CategoryLabel(enum.Enum):
    POLITICAL_POSTER = "PoliticalPoster"
    POLITICAL_OTHER = "PoliticalOther"
    OFF_TOPIC = "OffTopic"
    NATURAL = "Natural"
    NON_POLITICAL_POSTER = "NonPoliticalPoster"


class ManifestError(ValueError):
    """Raised for malformed or inconsistent manifest files."""


@dataclass(frozen=True)
class SampleRecord:
    id: str
    category: CategoryLabel
    annotation_ref: str
    feature_ref: str
    image_path: str | None = None


@dataclass(frozen=True)
class TextAnnotation:
    """OCR output for one sample: an ordered token list (may be empty)."""

    id: str
    tokens: tuple[str, ...]


@dataclass
class DatasetManifest:
    records: list[SampleRecord]
    counts_by_category: Counter = field(init=False)

    def __post_init__(self):
        self.counts_by_category = Counter(r.category for r in self.records)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def binary_target(record: SampleRecord) -> int:
    """1 iff the record is a political poster, else 0."""
    return 1 if record.category is CategoryLabel.POLITICAL_POSTER else 0


def parse_record(obj: dict) -> SampleRecord:
    try:
        category = CategoryLabel(obj["category"])
    except ValueError:
        raise ManifestError(f"unknown category {obj['category']!r}") from None
    return SampleRecord(
        id=str(obj["id"]),
        category=category,
        annotation_ref=obj["annotation_ref"],
        feature_ref=obj["feature_ref"],
        image_path=obj.get("image_path"),
    )


def record_to_dict(record: SampleRecord) -> dict:
    return {
        "id": record.id,
        "image_path": record.image_path,
        "category": record.category.value,
        "annotation_ref": record.annotation_ref,
        "feature_ref": record.feature_ref,
    }


def load_manifest(path) -> DatasetManifest:
    """Parse a JSON Lines manifest, rejecting duplicate ids.

    Raises ManifestError with the offending line number / id.
    """
    records = []
    seen = set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise ManifestError(f"{path}:{lineno}: invalid JSON: {e}") from None
            try:
                record = parse_record(obj)
            except KeyError as e:
                raise ManifestError(f"{path}:{lineno}: missing key {e}") from None
            except ManifestError as e:
                raise ManifestError(f"{path}:{lineno}: {e}") from None
            if record.id in seen:
                raise ManifestError(f"{path}:{lineno}: duplicate id {record.id!r}")
            seen.add(record.id)
            records.append(record)
    return DatasetManifest(records)


def save_manifest(manifest: DatasetManifest, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for record in manifest.records:
            f.write(json.dumps(record_to_dict(record), ensure_ascii=False) + "\n")
