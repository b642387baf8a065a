"""End-to-end smoke tests for the Python bindings."""

from fractions import Fraction

import pytest

import agraph


@pytest.fixture(scope="module")
def figure2():
    return agraph.load_file(agraph.fixture_path("figure2.agf"))


def test_blueover_table(figure2):
    table = agraph.enumerate_scenarios(figure2, "blueover")
    assert len(table) == 6
    norms = sorted(
        (row.achieved_weight, row.total_weight) for row in table.rows
    )
    assert norms == [(4, 8), (5, 8), (6, 8), (6, 8), (7, 8), (8, 8)]
    assert table.rows[0].score == Fraction(1)
    assert all(row.admissible for row in table.rows)


def test_reflection_matches_oracle(figure2):
    table = agraph.enumerate_scenarios(figure2, "reflection")
    oracle = agraph.brute_force_oracle(figure2, "reflection")
    assert table == oracle
    assert [row.score for row in table.rows] == [
        Fraction(1),
        Fraction(7, 8),
        Fraction(3, 4),
    ]


def test_neutralize_mandatory_empties_table(figure2):
    blocked = figure2.neutralize(["get_dev_add"])
    assert len(agraph.enumerate_scenarios(blocked, "blueover")) == 0
    assert len(agraph.enumerate_scenarios(blocked, "reflection")) == 0


def test_goal_percentage_modes():
    assert agraph.goal_percentage(Fraction(7, 8), "decimal") == "87.5%"
    assert agraph.goal_percentage(Fraction(7, 8), "paper") == "88%"
    assert agraph.goal_percentage(Fraction(1), "paper") == "100%"


def test_render_table_markdown(figure2):
    table = agraph.enumerate_scenarios(figure2, "blueover")
    text = agraph.render_table(table, "md", "paper")
    assert "| Access AT Comm |" in text
    assert "| 8/8 | 100% |" in text


def test_minimal_cut_sets(figure2):
    cuts = agraph.minimal_cut_sets(figure2, "blueover")
    assert cuts == [
        ["access_at_comm"],
        ["get_dev_add"],
        ["physical", "social_eng"],
    ]


def test_catalog_lookup():
    catalog = agraph.bundled_catalog()
    assert len(catalog) == 18
    hits = agraph.lookup(catalog, surface="bluetooth", name="Blueover")
    assert len(hits) == 1
    assert hits[0].mitigations == ["Keep device address secret"]


def test_recommend_prefers_shared_mandatory_node(figure2):
    ranked, warnings = agraph.recommend(
        figure2, ["blueover", "reflection"], agraph.bundled_catalog(), k=3
    )
    assert not warnings
    assert ranked[0].action.target == "get_dev_add"
    assert ranked[0].total_rows_eliminated == 9
    texts = [m for r in ranked[0].catalog_matches for m in r.mitigations]
    assert "Keep device address secret" in texts


def test_what_if_round_trip(figure2):
    result = agraph.what_if(figure2, "reflection", neutralize="social_eng")
    assert result.rows_eliminated == 2
    assert len(result.after) == 1
    assert result.after.rows[0].score == Fraction(3, 4)
    assert result.max_score_delta == Fraction(-1, 4)


def test_emit_round_trip(figure2):
    text = figure2.emit()
    again = agraph.load(text)
    assert again == figure2
    assert again.emit() == text


def test_invalid_text_reports_diagnostics():
    diags = agraph.validate_text("goal g \"Goal\"\nedge g -> g\n")
    assert any(d["severity"] == "error" for d in diags)
    with pytest.raises(ValueError):
        agraph.load("node broken\n")
