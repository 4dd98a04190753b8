import json

import pytest

from posterfuse.datamodel import (
    CategoryLabel,
    DatasetManifest,
    ManifestError,
    SampleRecord,
    binary_target,
    load_manifest,
)


def _record(id="a", category=CategoryLabel.POLITICAL_POSTER):
    return SampleRecord(id=id, category=category, annotation_ref="x.json", feature_ref="x.avec")


def _write_lines(path, objs):
    with open(path, "w") as f:
        for obj in objs:
            f.write(json.dumps(obj) + "\n")


def _line(id="a", category="PoliticalPoster"):
    return {
        "id": id,
        "image_path": None,
        "category": category,
        "annotation_ref": "x.json",
        "feature_ref": "x.avec",
    }


def test_load_manifest_three_lines(tmp_path):
    path = tmp_path / "m.jsonl"
    _write_lines(path, [_line("a"), _line("b", "Natural"), _line("c", "OffTopic")])
    manifest = load_manifest(path)
    assert len(manifest) == 3
    assert manifest.records[1].category is CategoryLabel.NATURAL


def test_load_manifest_duplicate_id(tmp_path):
    path = tmp_path / "m.jsonl"
    _write_lines(path, [_line("a"), _line("a")])
    with pytest.raises(ManifestError, match="duplicate id 'a'"):
        load_manifest(path)


def test_load_manifest_unknown_category(tmp_path):
    path = tmp_path / "m.jsonl"
    _write_lines(path, [_line("a", category="Poster")])
    with pytest.raises(ManifestError, match="unknown category"):
        load_manifest(path)


def test_load_manifest_reports_line_number(tmp_path):
    path = tmp_path / "m.jsonl"
    with open(path, "w") as f:
        f.write(json.dumps(_line("a")) + "\n")
        f.write("{not json\n")
    with pytest.raises(ManifestError, match=":2:"):
        load_manifest(path)


def test_binary_target_poster_is_one():
    assert binary_target(_record(category=CategoryLabel.POLITICAL_POSTER)) == 1


@pytest.mark.parametrize(
    "category",
    [
        CategoryLabel.POLITICAL_OTHER,
        CategoryLabel.OFF_TOPIC,
        CategoryLabel.NATURAL,
        CategoryLabel.NON_POLITICAL_POSTER,
    ],
)
def test_binary_target_others_are_zero(category):
    assert binary_target(_record(category=category)) == 0


def test_counts_by_category_tallies_records():
    records = [
        _record("a"),
        _record("b", CategoryLabel.NATURAL),
        _record("c", CategoryLabel.NATURAL),
    ]
    manifest = DatasetManifest(records)
    assert manifest.counts_by_category[CategoryLabel.NATURAL] == 2
    assert sum(manifest.counts_by_category.values()) == len(manifest)


def test_binary_target_partitions_manifest():
    records = [_record(str(i), c) for i, c in enumerate(list(CategoryLabel) * 3)]
    manifest = DatasetManifest(records)
    positives = [r for r in manifest if binary_target(r) == 1]
    negatives = [r for r in manifest if binary_target(r) == 0]
    assert len(positives) + len(negatives) == len(manifest)
    assert not set(r.id for r in positives) & set(r.id for r in negatives)
