"""Command-line surface: serve the ingestion API, replay logs, synthesize
scripted sessions, and export reports."""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .analysis import analyze_store
from .eventlog import EventLogError, write_log
from .indicators import IndicatorConfig, parse_config_text
from .replay import replay
from .reports import REPORT_KINDS, export_report, render_figures, write_all_reports
from .service import (
    DEFAULT_BATCH_MAX,
    DEFAULT_MOBILE_MARKERS,
    ServiceConfig,
    create_app,
)
from .store import Store
from .synth import ARCHETYPES, synthesize, synthesize_study


def _load_config(path: str | None) -> IndicatorConfig:
    if path is None:
        return IndicatorConfig()
    return parse_config_text(Path(path).read_text(encoding="utf-8"))


@click.group()
def main() -> None:
    """Implicit interest indicators from web reading behavior."""


@main.command("ingest-serve")
@click.option("--port", default=8000, show_default=True, envvar="READLENS_PORT")
@click.option("--host", default="127.0.0.1", show_default=True, envvar="READLENS_HOST")
@click.option("--db", default="readlens.db", show_default=True, envvar="READLENS_DB")
@click.option("--batch-max", default=DEFAULT_BATCH_MAX, show_default=True, envvar="READLENS_BATCH_MAX")
@click.option(
    "--auto-create-users/--no-auto-create-users",
    default=True,
    show_default=True,
    envvar="READLENS_AUTO_CREATE_USERS",
)
@click.option(
    "--mobile-marker",
    "mobile_markers",
    multiple=True,
    help="User-agent token marking a mobile device; repeat to extend. Defaults to a standard list.",
)
def ingest_serve(port: int, host: str, db: str, batch_max: int, auto_create_users: bool, mobile_markers) -> None:
    """Start the HTTP ingestion service."""
    import uvicorn

    config = ServiceConfig(
        batch_max=batch_max,
        auto_create_users=auto_create_users,
        mobile_markers=tuple(m.lower() for m in mobile_markers) or DEFAULT_MOBILE_MARKERS,
    )
    app = create_app(Store(db), config)
    uvicorn.run(app, host=host, port=port)


@main.command("replay")
@click.option("--log", "log_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--db", default=":memory:", show_default=True, help="Persist the replayed store here.")
def replay_cmd(log_path: str, config_path: str | None, out_dir: str, db: str) -> None:
    """Replay an event log and write all report CSVs plus figures."""
    try:
        result = replay(log_path, _load_config(config_path), store_path=db)
    except EventLogError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    paths = write_all_reports(result, out_dir)
    figures = render_figures(result, out_dir)
    for path in [*paths.values(), *figures]:
        click.echo(str(path))
    click.echo(
        f"replayed: {len(result.indicator_values)} indicator values, "
        f"{len(result.correlations)} correlations, {len(result.predictions)} predictions"
    )


@main.command("synth")
@click.option("--archetype", required=True, type=click.Choice([*ARCHETYPES, "study"]))
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option(
    "--truth",
    "truth_path",
    default=None,
    type=click.Path(dir_okay=False),
    help="Also write the declared ground-truth indicator values as JSON.",
)
def synth_cmd(archetype: str, seed: int, out_path: str, truth_path: str | None) -> None:
    """Write a deterministic scripted-session event log."""
    if archetype == "study":
        write_log(out_path, synthesize_study(seed))
        click.echo(out_path)
        return
    scenario = synthesize(archetype, seed)
    write_log(out_path, scenario.records())
    click.echo(out_path)
    if truth_path:
        truth = [
            {
                "user_id": v.user_id,
                "session_id": v.session_id,
                "page_id": v.page_id,
                "fragment_id": v.fragment_id,
                "kind": v.kind.value,
                "value": v.value,
            }
            for v in scenario.expected
        ]
        Path(truth_path).write_text(json.dumps(truth, indent=2) + "\n", encoding="utf-8")
        click.echo(truth_path)


@main.command("report")
@click.option("--db", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--kind", required=True, type=click.Choice(REPORT_KINDS))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--config", "config_path", default=None, type=click.Path(exists=True, dir_okay=False))
def report_cmd(db: str, kind: str, out_path: str, config_path: str | None) -> None:
    """Recompute the analysis over a store and export one report kind."""
    store = Store(db)
    try:
        result = analyze_store(store, _load_config(config_path))
    finally:
        store.close()
    path = export_report(kind, result, out_path)
    click.echo(str(path))
    figures = render_figures(result, Path(out_path).parent)
    for fig in figures:
        click.echo(str(fig))


if __name__ == "__main__":
    main()
