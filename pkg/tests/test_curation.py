import pytest

from posterfuse.curation import (
    DEFAULT_SUFFIX_QUOTAS,
    CurationError,
    KeywordCategory,
    export_plan,
    generate_query_plan,
    import_plan,
    load_keyword_dir,
)


def ideology(keywords):
    return KeywordCategory(name="Parties Ideologies", keywords=tuple(keywords))


class TestGeneratePlan:
    def test_single_keyword_default_quotas(self):
        plan = generate_query_plan([ideology(["liberalism"])])
        assert len(plan.entries) == 4
        by_suffix = {e.suffix: e.quota for e in plan.entries}
        assert by_suffix == {"ad": 5, "poster": 20, "election poster": 40, "political poster": 40}

    def test_170_keywords_produce_680_entries(self):
        keywords = [f"ideology{i:03d}" for i in range(170)]
        plan = generate_query_plan([ideology(keywords)])
        assert len(plan.entries) == 680
        assert plan.total_budget == 170 * (5 + 20 + 40 + 40)

    def test_empty_category_list(self):
        plan = generate_query_plan([])
        assert plan.entries == ()
        assert plan.total_budget == 0

    def test_duplicate_keyword_rejected(self):
        with pytest.raises(CurationError, match="duplicate keyword"):
            ideology(["a", "a"])

    def test_deterministic_ordering(self):
        cats = [
            KeywordCategory(name="B", keywords=("z", "a")),
            KeywordCategory(name="A", keywords=("m",)),
        ]
        plan = generate_query_plan(cats, suffix_quotas={"poster": 2, "ad": 1})
        keys = [(e.category, e.keyword, e.suffix) for e in plan.entries]
        assert keys == sorted(keys)

    def test_category_override(self):
        cats = [ideology(["x"]), KeywordCategory(name="Cartoons", keywords=("cartoon",))]
        plan = generate_query_plan(cats, category_overrides={"Cartoons": {"poster": 3}})
        cartoon_entries = [e for e in plan.entries if e.category == "Cartoons"]
        assert len(cartoon_entries) == 1
        assert cartoon_entries[0].quota == 3

    def test_bad_quota_rejected(self):
        with pytest.raises(CurationError, match=">= 1"):
            generate_query_plan([ideology(["x"])], suffix_quotas={"ad": 0})

    def test_plan_size_formula(self):
        cats = [
            KeywordCategory(name="A", keywords=tuple(f"a{i}" for i in range(7))),
            KeywordCategory(name="B", keywords=tuple(f"b{i}" for i in range(11))),
        ]
        plan = generate_query_plan(cats)
        assert len(plan.entries) == (7 + 11) * len(DEFAULT_SUFFIX_QUOTAS)


class TestPlanIO:
    def test_csv_round_trip(self, tmp_path):
        plan = generate_query_plan([ideology(["liberalism", "socialism"])])
        path = tmp_path / "plan.csv"
        export_plan(plan, path)
        assert import_plan(path) == plan

    def test_single_entry_is_two_lines(self, tmp_path):
        plan = generate_query_plan([ideology(["x"])], suffix_quotas={"ad": 5})
        path = tmp_path / "plan.csv"
        export_plan(plan, path)
        assert path.read_text().strip().count("\n") == 1

    def test_comma_keyword_quoted(self, tmp_path):
        plan = generate_query_plan(
            [KeywordCategory(name="General", keywords=("vote, now",))],
            suffix_quotas={"ad": 1},
        )
        path = tmp_path / "plan.csv"
        export_plan(plan, path)
        assert '"vote, now"' in path.read_text()
        assert import_plan(path) == plan

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "plan.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(CurationError, match="unexpected header"):
            import_plan(path)


class TestKeywordDir:
    def test_loads_one_category_per_file(self, tmp_path):
        (tmp_path / "General.txt").write_text("vote\nelection\n")
        (tmp_path / "Cartoons.txt").write_text("political cartoon\n")
        cats = load_keyword_dir(tmp_path)
        assert [c.name for c in cats] == ["Cartoons", "General"]
        assert cats[1].keywords == ("vote", "election")
