import json
import os

import numpy as np
import pytest

from posterfuse.datamodel import CategoryLabel, DatasetManifest, SampleRecord, load_manifest
from posterfuse.storage import write_annotation, write_feature
from posterfuse.datamodel import TextAnnotation

CATEGORIES = list(CategoryLabel)

# Word pools used when synthesizing annotations.
POLITICAL_WORDS = ["vote", "election", "campaign", "senate", "congress", "president"]
FILLER_WORDS = ["the", "a", "of", "sale", "music", "2020", "live", "tour", "city"]


def make_corpus_dir(tmp_path, n_samples=30, appearance_dim=8, seed=0):
    """Write a small on-disk corpus: manifest + feature + annotation files.

    Political posters get political words and a shifted appearance
    feature so toy training has something to find.
    """
    rng = np.random.default_rng(seed)
    feat_dir = tmp_path / "feat"
    ann_dir = tmp_path / "ann"
    feat_dir.mkdir(exist_ok=True)
    ann_dir.mkdir(exist_ok=True)
    records = []
    for i in range(n_samples):
        category = CATEGORIES[i % len(CATEGORIES)]
        sample_id = f"s{i:04d}"
        positive = category is CategoryLabel.POLITICAL_POSTER
        values = rng.normal(loc=1.5 if positive else 0.0, scale=1.0, size=appearance_dim)
        feature_ref = str(feat_dir / f"{sample_id}.avec")
        write_feature(values, feature_ref)
        if positive:
            tokens = list(rng.choice(POLITICAL_WORDS, size=4)) + list(
                rng.choice(FILLER_WORDS, size=2)
            )
        else:
            tokens = list(rng.choice(FILLER_WORDS, size=3))
        annotation_ref = str(ann_dir / f"{sample_id}.json")
        write_annotation(TextAnnotation(id=sample_id, tokens=tuple(tokens)), annotation_ref)
        records.append(
            SampleRecord(
                id=sample_id,
                category=category,
                annotation_ref=annotation_ref,
                feature_ref=feature_ref,
            )
        )
    manifest = DatasetManifest(records)
    manifest_path = tmp_path / "manifest.jsonl"
    with open(manifest_path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(
                json.dumps(
                    {
                        "id": r.id,
                        "image_path": None,
                        "category": r.category.value,
                        "annotation_ref": r.annotation_ref,
                        "feature_ref": r.feature_ref,
                    }
                )
                + "\n"
            )
    return manifest_path, manifest


@pytest.fixture
def corpus(tmp_path):
    manifest_path, manifest = make_corpus_dir(tmp_path)
    return {"path": manifest_path, "manifest": manifest, "dir": tmp_path}
