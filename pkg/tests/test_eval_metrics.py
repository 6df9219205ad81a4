import random

import pytest

from arguide.evalharness import (
    MetricsReport,
    StepOutcome,
    aggregate,
    aggregate_type_eval,
    load_outcomes,
    load_type_records,
    percentage_text,
)
from arguide.fixtureset import fixture_root


def table1_outcomes():
    return load_outcomes(fixture_root() / "outcomes" / "table1.json")


def table2_records():
    return load_type_records(fixture_root() / "outcomes" / "table2.json")


class TestUserQueryTable:
    def test_field_rows(self):
        report = aggregate(table1_outcomes())
        assert (report.plan_row("Text Instruction").total,
                report.plan_row("Text Instruction").correct) == (100, 96)
        assert report.plan_row("Text Instruction").percentage_text == "96.0%"
        assert (report.plan_row("Visual Type").total,
                report.plan_row("Visual Type").correct) == (100, 90)
        assert report.plan_row("Visual Type").percentage_text == "90.0%"
        assert report.plan_row("Key Component").percentage_text == "97.0%"

    def test_per_type_rows(self):
        report = aggregate(table1_outcomes())
        expected = {
            "Highlight": (40, 32, "80.0%"),
            "Movement": (20, 17, "85.0%"),
            "Hand Gesture": (14, 11, "78.6%"),
            "Tool": (4, 3, "75.0%"),
            "Widget": (5, 5, "100.0%"),
        }
        for label, (total, correct, pct) in expected.items():
            row = report.plan_row(label)
            assert (row.total, row.correct, row.percentage_text) == (total, correct, pct)

    def test_total_row(self):
        row = aggregate(table1_outcomes()).plan_row("Total")
        assert (row.total, row.correct, row.percentage_text) == (100, 65, "65.0%")

    def test_aggregation_order_independent(self):
        outcomes = table1_outcomes()
        shuffled = outcomes[:]
        random.Random(11).shuffle(shuffled)
        assert aggregate(shuffled) == aggregate(outcomes)

    def test_percentages_recomputed_not_stored(self):
        row = aggregate(table1_outcomes()).plan_row("Hand Gesture")
        # 11/14 rounds to one decimal at render time
        assert row.percentage == pytest.approx(78.6)

    def test_empty_bucket_renders_na(self):
        outcomes = [
            StepOutcome.from_verdicts("t", 0, 1, True, True, True, True),
        ]
        report = aggregate(outcomes)
        assert report.plan_row("Widget").total == 0
        assert report.plan_row("Widget").percentage_text == "n/a"

    def test_mislabeled_type_counts_only_in_type_row(self):
        good = StepOutcome.from_verdicts("t", 0, 1, True, True, True, True)
        bad_type = StepOutcome.from_verdicts("t", 1, 1, True, False, True, True)
        report = aggregate([good, bad_type])
        assert report.plan_row("Visual Type").correct == 1
        assert report.plan_row("Text Instruction").correct == 2
        assert report.plan_row("Key Component").correct == 2
        # the plan-incorrect step never reaches the guidance bucket
        assert report.plan_row("Highlight").total == 1


class TestBalancedTypeTable:
    def test_per_type_accuracy_values(self):
        report = aggregate_type_eval(table2_records())
        expected = {
            "Highlight": 90.0,
            "Translational Movement": 80.0,
            "Rotational Movement": 70.0,
            "Hand Gesture": 75.0,
            "Tool": 75.0,
            "Widget": 100.0,
        }
        assert [r.label for r in report.type_rows] == list(expected)
        for label, accuracy in expected.items():
            assert report.type_row(label).percentage == pytest.approx(accuracy)

    def test_component_sub_rows(self):
        report = aggregate_type_eval(table2_records())
        translational = report.type_row("Translational Movement")
        comp = {c.label: c for c in translational.components}
        assert comp["2D Box"].percentage == pytest.approx(100.0)
        assert comp["End Position"].percentage == pytest.approx(80.0)
        assert comp["End Position"].mean_latency_s is None
        assert comp["Segmentation"].mean_latency_s == pytest.approx(0.46)
        tool = report.type_row("Tool")
        tool_gen = {c.label: c for c in tool.components}["Tool Gen"]
        assert (tool_gen.total, tool_gen.correct) == (3, 1)
        assert tool_gen.mean_latency_s == pytest.approx(23.80)

    def test_latency_means(self):
        report = aggregate_type_eval(table2_records())
        assert report.type_row("Highlight").mean_latency_s == pytest.approx(3.29)
        assert report.type_row("Rotational Movement").mean_latency_s == pytest.approx(4.09)


def test_count_row_rejects_correct_above_total():
    from arguide.evalharness import CountRow

    with pytest.raises(ValueError):
        CountRow("x", 5, 6, "field")


def test_percentage_text_rounding():
    assert percentage_text(11, 14) == "78.6%"
    assert percentage_text(0, 0) == "n/a"
    assert percentage_text(1, 3) == "33.3%"
    assert percentage_text(2, 3) == "66.7%"
