"""Keyword x suffix crawl query plan with per-query image quotas.

The plan enumerates every (category, keyword, suffix) triple with the
number of images to collect for that query. Only the Party Ideologies
quotas are published, so those serve as the default for every category
and can be overridden per category. Crawling itself is out of scope; the
exported CSV is the deliverable.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

# Published per-keyword quotas (Party Ideologies).
DEFAULT_SUFFIX_QUOTAS = {
    "ad": 5,
    "poster": 20,
    "election poster": 40,
    "political poster": 40,
}


class CurationError(ValueError):
    pass


@dataclass(frozen=True)
class KeywordCategory:
    name: str
    keywords: tuple[str, ...]

    def __post_init__(self):
        seen = set()
        for kw in self.keywords:
            if kw in seen:
                raise CurationError(f"category {self.name!r}: duplicate keyword {kw!r}")
            seen.add(kw)


@dataclass(frozen=True)
class PlanEntry:
    category: str
    keyword: str
    suffix: str
    quota: int


@dataclass(frozen=True)
class QueryPlan:
    entries: tuple[PlanEntry, ...]

    @property
    def total_budget(self) -> int:
        return sum(e.quota for e in self.entries)


def generate_query_plan(
    categories,
    suffix_quotas: dict | None = None,
    category_overrides: dict | None = None,
) -> QueryPlan:
    """One entry per (keyword, suffix), ordered by (category, keyword, suffix).

    category_overrides maps a category name to its own suffix->quota map.
    """
    quotas = dict(suffix_quotas) if suffix_quotas else dict(DEFAULT_SUFFIX_QUOTAS)
    if not quotas:
        raise CurationError("suffix quota map is empty")
    overrides = category_overrides or {}
    for suffix, quota in quotas.items():
        if quota < 1:
            raise CurationError(f"quota for suffix {suffix!r} must be >= 1, got {quota}")
    entries = []
    for category in sorted(categories, key=lambda c: c.name):
        cat_quotas = overrides.get(category.name, quotas)
        for keyword in sorted(category.keywords):
            for suffix in sorted(cat_quotas):
                entries.append(
                    PlanEntry(category.name, keyword, suffix, cat_quotas[suffix])
                )
    return QueryPlan(tuple(entries))


def export_plan(plan: QueryPlan, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["category", "keyword", "suffix", "quota"])
        for entry in plan.entries:
            writer.writerow([entry.category, entry.keyword, entry.suffix, entry.quota])


def import_plan(path) -> QueryPlan:
    entries = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != ["category", "keyword", "suffix", "quota"]:
            raise CurationError(f"{path}: unexpected header {reader.fieldnames}")
        for row in reader:
            try:
                quota = int(row["quota"])
            except ValueError:
                raise CurationError(f"{path}: bad quota {row['quota']!r}") from None
            entries.append(PlanEntry(row["category"], row["keyword"], row["suffix"], quota))
    return QueryPlan(tuple(entries))


def load_keyword_dir(directory) -> list[KeywordCategory]:
    """Read one UTF-8 keyword file per category (one keyword per line);
    the file stem is the category name."""
    import os

    categories = []
    for name in sorted(os.listdir(directory)):
        path = os.path.join(directory, name)
        if not os.path.isfile(path):
            continue
        stem = os.path.splitext(name)[0]
        with open(path, encoding="utf-8") as f:
            keywords = tuple(line.strip() for line in f if line.strip())
        categories.append(KeywordCategory(name=stem, keywords=keywords))
    return categories
