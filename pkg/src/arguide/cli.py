"""Command-line interface: serve sessions, replay bundles, render reports."""

from __future__ import annotations

import dataclasses
import json
import logging
import sys
from pathlib import Path

import click

from .evalharness import (
    FixtureBundle,
    aggregate,
    aggregate_type_eval,
    emit_report,
    load_outcomes,
    load_type_records,
    replay,
)
from .fixtureset import fixture_dir, list_fixtures
from .guidance import export_json
from .session import ServiceRouter, SessionService, run_server
from .vision import Gateway, LiveProvider, LiveProviderConfig, MockProvider


def _load_live_config(path: str) -> LiveProviderConfig:
    doc = json.loads(Path(path).read_text())
    return LiveProviderConfig(
        chat_endpoint=doc["chat_endpoint"],
        chat_model=doc["chat_model"],
        segmentation_endpoint=doc.get("segmentation_endpoint"),
        api_key_env=doc.get("api_key_env", "ARGUIDE_API_KEY"),
        timeout_s=float(doc.get("timeout_s", 30.0)),
    )


def _resolve_bundle(bundle: str) -> Path:
    path = Path(bundle)
    return path if path.is_dir() else fixture_dir(bundle)


@click.group()
@click.option("--log-level", default="INFO", show_default=True)
def main(log_level: str) -> None:
    """Task-guidance engine: sessions, fixture replay, metric reports."""
    logging.basicConfig(level=getattr(logging, log_level.upper(), logging.INFO))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--tcp-port", default=8765, show_default=True)
@click.option("--ws-port", default=8766, show_default=True, type=int)
@click.option("--no-ws", is_flag=True, help="Disable the WebSocket listener.")
@click.option("--fixture-mode/--live-mode", default=True, show_default=True,
              help="Route provider calls to shipped fixture bundles.")
@click.option("--provider-config", type=click.Path(exists=True),
              help="Live provider config JSON (required with --live-mode).")
@click.option("--journal-dir", type=click.Path(), help="Append-only session journals.")
@click.option("--tick-interval", default=1.0, show_default=True,
              help="Timer tick interval in seconds.")
def serve(host, tcp_port, ws_port, no_ws, fixture_mode, provider_config, journal_dir, tick_interval):
    """Run the gr/1 session server."""
    if fixture_mode:
        def factory(fixture_id: str | None) -> SessionService:
            bundle = fixture_dir(fixture_id or "printer-reset")
            gateway = Gateway(MockProvider(bundle))
            return SessionService(gateway, journal_dir=journal_dir)

        def loader(bundle: str, scene: str):
            return MockProvider(fixture_dir(bundle)).load_scene(scene)
    else:
        if not provider_config:
            raise click.UsageError("--live-mode needs --provider-config")
        config = _load_live_config(provider_config)

        def factory(fixture_id: str | None) -> SessionService:
            return SessionService(Gateway(LiveProvider(config)), journal_dir=journal_dir)

        loader = None

    run_server(
        lambda: ServiceRouter(factory),
        host=host,
        tcp_port=tcp_port,
        ws_port=None if no_ws else ws_port,
        fixture_snapshot_loader=loader,
        tick_interval_s=tick_interval,
    )


@main.command("fixtures")
def fixtures_command() -> None:
    """List shipped fixture bundles."""
    for name in list_fixtures():
        click.echo(name)


@main.command("replay")
@click.argument("bundle")
@click.option("--mode", type=click.Choice(["mock", "live"]), default="mock", show_default=True)
@click.option("--provider-config", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), help="Write outcome records as JSON.")
def replay_command(bundle, mode, provider_config, out) -> None:
    """Replay a labeled bundle and score it against its labels."""
    live_config = _load_live_config(provider_config) if provider_config else None
    result = replay(FixtureBundle.load(_resolve_bundle(bundle)), mode=mode, live_config=live_config)
    correct = sum(o.end_to_end_correct for o in result.outcomes)
    click.echo(f"{result.bundle_id}: {correct}/{len(result.outcomes)} steps correct")
    for detail in result.details:
        status = detail.error or ",".join(detail.kinds)
        click.echo(f"  step {detail.step_index}: {status}")
    if out:
        doc = {
            "bundle_id": result.bundle_id,
            "outcomes": [dataclasses.asdict(o) for o in result.outcomes],
            "details": [dataclasses.asdict(d) for d in result.details],
        }
        Path(out).write_text(json.dumps(doc, indent=1))
        click.echo(f"outcomes written to {out}")


@main.command("aggregate")
@click.argument("outcome_files", nargs=-1, required=True)
@click.option("--type-records", type=click.Path(exists=True),
              help="Balanced per-type evaluation records JSON.")
@click.option("--out", type=click.Path(), help="Write the structured report JSON.")
def aggregate_command(outcome_files, type_records, out) -> None:
    """Aggregate outcome files into a metrics report."""
    outcomes = []
    for path in outcome_files:
        outcomes.extend(load_outcomes(path))
    report = aggregate(outcomes)
    if type_records:
        types = aggregate_type_eval(load_type_records(type_records))
        report = dataclasses.replace(report, type_rows=types.type_rows)
    rendered = emit_report(report, "structured", out)
    if not out:
        click.echo(rendered, nl=False)


@main.command("report")
@click.argument("outcome_files", nargs=-1, required=True)
@click.option("--type-records", type=click.Path(exists=True))
@click.option("--format", "fmt", type=click.Choice(["text-table", "csv", "structured"]),
              default="text-table", show_default=True)
@click.option("--out", type=click.Path())
def report_command(outcome_files, type_records, fmt, out) -> None:
    """Render a report from outcome files."""
    outcomes = []
    for path in outcome_files:
        outcomes.extend(load_outcomes(path))
    report = aggregate(outcomes)
    if type_records:
        types = aggregate_type_eval(load_type_records(type_records))
        report = dataclasses.replace(report, type_rows=types.type_rows)
    rendered = emit_report(report, fmt, out)
    if not out:
        click.echo(rendered, nl=False)


@main.command("export-golden")
@click.argument("out_dir", type=click.Path())
@click.option("--bundle", "bundles", multiple=True,
              default=("printer-clean", "printer-reset"), show_default=True)
def export_golden(out_dir, bundles) -> None:
    """Run full mock sessions and write per-step scene-graph documents."""
    out_root = Path(out_dir)
    for bundle_id in bundles:
        provider = MockProvider(fixture_dir(bundle_id))
        gateway = Gateway(provider, sleep=lambda _: None)
        service = SessionService(gateway)
        snaps = [provider.load_scene(sid) for sid in provider.scene_ids()]
        created = service.create_session(provider.canonical_query(), snaps[0])
        records = [created.first_step]
        for snap in snaps[1:]:
            records.append(service.advance(created.session_id, snap))
        bundle_dir = out_root / bundle_id
        bundle_dir.mkdir(parents=True, exist_ok=True)
        for record in records:
            path = bundle_dir / f"step_{record.step_index:02d}.json"
            path.write_text(export_json(record.export_doc))
        click.echo(f"{bundle_id}: {len(records)} steps -> {bundle_dir}")


if __name__ == "__main__":
    sys.exit(main())
