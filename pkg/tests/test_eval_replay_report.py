import dataclasses
import json

import jsonschema
import pytest

from arguide.evalharness import (
    BundleFormatError,
    ConfigError,
    FixtureBundle,
    aggregate,
    aggregate_type_eval,
    emit_report,
    load_type_records,
    parse_csv,
    render_csv,
    render_structured,
    render_text,
    replay,
    report_schema,
)
from arguide.fixtureset import fixture_dir, fixture_root


@pytest.fixture(scope="module")
def reset_result():
    bundle = FixtureBundle.load(fixture_dir("printer-reset"))
    return replay(bundle, mode="mock")


class TestReplay:
    def test_all_steps_compile_with_expected_categories(self, reset_result):
        assert len(reset_result.outcomes) == 8
        assert all(o.end_to_end_correct for o in reset_result.outcomes)
        categories = [d.category for d in reset_result.details]
        assert categories[1:] == [
            "highlight",
            "tool",
            "movement",
            "highlight",
            "widget",
            "highlight",
            "gesture",
        ]

    def test_latencies_recorded(self, reset_result):
        assert reset_result.recorder.samples("plan")
        assert reset_result.recorder.samples("bbox", visual_type=1)
        for detail in reset_result.details:
            assert detail.vision_s is not None and detail.vision_s > 0
            assert detail.geometry_s is not None and detail.geometry_s > 0

    def test_replay_is_deterministic(self, reset_result):
        again = replay(FixtureBundle.load(fixture_dir("printer-reset")), mode="mock")
        assert again.outcomes == reset_result.outcomes
        assert [d.kinds for d in again.details] == [d.kinds for d in reset_result.details]
        # non-latency report bytes are identical across runs
        first = render_text(aggregate(list(reset_result.outcomes)))
        second = render_text(aggregate(list(again.outcomes)))
        assert first == second

    def test_mislabeled_type_counts_in_type_row_only(self):
        bundle = FixtureBundle.load(fixture_dir("printer-reset"))
        labels = list(bundle.labels)
        labels[2] = dataclasses.replace(labels[2], expected_visual_type=1)  # actually 4
        modified = dataclasses.replace(bundle, labels=tuple(labels))
        result = replay(modified, mode="mock")
        report = aggregate(list(result.outcomes))
        assert report.plan_row("Visual Type").correct == 7
        assert report.plan_row("Text Instruction").correct == 8
        assert report.plan_row("Key Component").correct == 8

    def test_live_mode_requires_config(self):
        bundle = FixtureBundle.load(fixture_dir("printer-reset"))
        with pytest.raises(ConfigError):
            replay(bundle, mode="live")

    def test_live_mode_requires_key_env(self, monkeypatch):
        from arguide.vision import LiveProviderConfig

        monkeypatch.delenv("ARGUIDE_API_KEY", raising=False)
        bundle = FixtureBundle.load(fixture_dir("printer-reset"))
        config = LiveProviderConfig(chat_endpoint="https://example.invalid/v1", chat_model="m")
        with pytest.raises(RuntimeError):
            replay(bundle, mode="live", live_config=config)

    def test_bundle_format_error_names_file(self, tmp_path):
        with pytest.raises(BundleFormatError) as err:
            FixtureBundle.load(tmp_path)
        assert "eval_labels.json" in str(err.value)


class TestReportWriters:
    def table1_report(self):
        from arguide.evalharness import load_outcomes

        return aggregate(load_outcomes(fixture_root() / "outcomes" / "table1.json"))

    def full_report(self):
        plan = self.table1_report()
        types = aggregate_type_eval(load_type_records(fixture_root() / "outcomes" / "table2.json"))
        return dataclasses.replace(plan, type_rows=types.type_rows)

    def test_text_table_layout(self):
        text = render_text(self.full_report())
        lines = text.splitlines()
        assert any(line.startswith("Text Instruction") and "96.0%" in line for line in lines)
        assert any(line.startswith("Highlight") and "80.0%" in line for line in lines)
        assert any(line.startswith("Total") and "65.0%" in line for line in lines)
        # grouped by rule lines: fields / types / total
        rules = [i for i, line in enumerate(lines) if set(line) == {"-"}]
        assert len(rules) >= 3
        assert "Rotational Movement" in text
        assert "  2D Box" in text

    def test_text_is_deterministic(self):
        assert render_text(self.full_report()) == render_text(self.full_report())

    def test_csv_round_trip(self):
        report = self.full_report()
        assert parse_csv(render_csv(report)) == report

    def test_structured_validates_against_schema(self):
        rendered = render_structured(self.full_report())
        jsonschema.validate(json.loads(rendered), report_schema())

    def test_emit_writes_file(self, tmp_path):
        out = tmp_path / "report.txt"
        emit_report(self.table1_report(), "text-table", out)
        assert out.read_text().startswith(" ")

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            emit_report(self.table1_report(), "yaml")
