"""Offline replay: load an event log into a store and run the full analysis.

Replaying a log is equivalent to having ingested the same events live; the
two paths share the store schema, the event codec, and the analysis
pipeline, so they produce identical derived values and reports.
"""
from __future__ import annotations

from pathlib import Path

from .analysis import AnalysisResult, analyze_store
from .eventlog import LogDocument, read_log
from .indicators import IndicatorConfig
from .model import Session
from .service import DEFAULT_MOBILE_MARKERS, classify_device
from .stats import DEFAULT_ALPHA
from .store import Store


def load_log_into_store(
    doc: LogDocument,
    store: Store,
    mobile_markers: tuple[str, ...] = DEFAULT_MOBILE_MARKERS,
) -> None:
    """Insert a parsed log's entities and events, preserving file order."""
    for page in doc.pages:
        store.upsert_page(page)
    for fragment in doc.fragments:
        store.upsert_fragment(fragment)
    for rec in doc.sessions:
        store.upsert_user(rec.user_id)
        store.create_session(
            Session(
                rec.session_id,
                rec.user_id,
                classify_device(rec.user_agent, mobile_markers),
                rec.user_agent,
                rec.started_at,
            ),
            token=f"replay-{rec.session_id}",
        )
    for content in doc.contents:
        store.upsert_content(content)
    for rating in doc.ratings:
        store.upsert_rating(rating)
    store.insert_events(doc.events)


def replay(
    log_path: str | Path,
    config: IndicatorConfig | None = None,
    store_path: str | Path = ":memory:",
    alpha: float = DEFAULT_ALPHA,
    mobile_markers: tuple[str, ...] = DEFAULT_MOBILE_MARKERS,
) -> AnalysisResult:
    """Parse, load, and analyze an event log; parse errors abort with the line."""
    doc = read_log(log_path)
    store = Store(store_path)
    try:
        load_log_into_store(doc, store, mobile_markers)
        return analyze_store(store, config, alpha)
    finally:
        if store.path != ":memory:":
            store.close()
