"""Single-file embedded store for the entity graph.

Users own sessions; pages own fragments; raw events hang off sessions and
pages. Event inserts are idempotent on event_id and each batch is atomic:
a rejected batch leaves the store untouched. Deleting a session cascades to
its events and derived values.
"""
from __future__ import annotations

import json
import sqlite3
import threading
from pathlib import Path

from .eventlog import event_from_dict, event_to_dict
from .model import (
    ContentItem,
    DeviceClass,
    DURATION_KINDS,
    ExplicitRating,
    Fragment,
    IndicatorKind,
    IndicatorValue,
    PageClass,
    RawEvent,
    Session,
    Webpage,
)

_SCHEMA = """
PRAGMA foreign_keys = ON;

CREATE TABLE IF NOT EXISTS users (
    user_id TEXT PRIMARY KEY
);

CREATE TABLE IF NOT EXISTS webpages (
    page_id TEXT PRIMARY KEY,
    url TEXT NOT NULL,
    page_class TEXT NOT NULL CHECK (page_class IN ('overview', 'detail'))
);

CREATE TABLE IF NOT EXISTS sessions (
    session_id TEXT PRIMARY KEY,
    user_id TEXT NOT NULL REFERENCES users(user_id),
    device_class TEXT NOT NULL CHECK (device_class IN ('desktop', 'mobile')),
    user_agent TEXT NOT NULL,
    started_at INTEGER NOT NULL,
    token TEXT NOT NULL UNIQUE
);

CREATE TABLE IF NOT EXISTS fragments (
    fragment_id TEXT PRIMARY KEY,
    page_id TEXT NOT NULL REFERENCES webpages(page_id),
    parent_id TEXT REFERENCES fragments(fragment_id),
    dom_path TEXT NOT NULL DEFAULT ''
);

CREATE TABLE IF NOT EXISTS raw_events (
    event_id TEXT PRIMARY KEY,
    session_id TEXT NOT NULL REFERENCES sessions(session_id) ON DELETE CASCADE,
    page_id TEXT NOT NULL REFERENCES webpages(page_id),
    client_time INTEGER NOT NULL,
    payload TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS idx_events_session ON raw_events(session_id, page_id, client_time);

CREATE TABLE IF NOT EXISTS client_indicators (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    session_id TEXT NOT NULL REFERENCES sessions(session_id) ON DELETE CASCADE,
    fragment_id TEXT,
    kind TEXT NOT NULL,
    value REAL NOT NULL,
    advisory INTEGER NOT NULL DEFAULT 1
);

CREATE TABLE IF NOT EXISTS indicator_values (
    user_id TEXT NOT NULL,
    session_id TEXT NOT NULL REFERENCES sessions(session_id) ON DELETE CASCADE,
    page_id TEXT NOT NULL,
    fragment_id TEXT NOT NULL,
    kind TEXT NOT NULL,
    value REAL NOT NULL
);

CREATE TABLE IF NOT EXISTS explicit_ratings (
    user_id TEXT NOT NULL REFERENCES users(user_id),
    content_id TEXT NOT NULL,
    noticed INTEGER NOT NULL,
    likert INTEGER,
    PRIMARY KEY (user_id, content_id)
);

CREATE TABLE IF NOT EXISTS content_items (
    content_id TEXT PRIMARY KEY,
    detail_page_id TEXT REFERENCES webpages(page_id),
    teaser_fragment_id TEXT REFERENCES fragments(fragment_id)
);
"""


class StoreError(Exception):
    pass


class UnknownSessionError(StoreError):
    pass


class Store:
    """Thread-safe wrapper around the sqlite entity store."""

    def __init__(self, path: str | Path = ":memory:"):
        self.path = str(path)
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        self._conn.execute("PRAGMA foreign_keys = ON")
        self._lock = threading.RLock()
        with self._lock, self._conn:
            self._conn.executescript(_SCHEMA)

    def close(self) -> None:
        self._conn.close()

    # --- entities --------------------------------------------------------

    def upsert_user(self, user_id: str) -> None:
        if not user_id:
            raise ValueError("user_id must be non-empty")
        with self._lock, self._conn:
            self._conn.execute("INSERT OR IGNORE INTO users(user_id) VALUES (?)", (user_id,))

    def has_user(self, user_id: str) -> bool:
        row = self._conn.execute("SELECT 1 FROM users WHERE user_id = ?", (user_id,)).fetchone()
        return row is not None

    def upsert_page(self, page: Webpage) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO webpages(page_id, url, page_class) VALUES (?, ?, ?) "
                "ON CONFLICT(page_id) DO UPDATE SET url = excluded.url, page_class = excluded.page_class",
                (page.page_id, page.url, page.page_class.value),
            )

    def get_page(self, page_id: str) -> Webpage | None:
        row = self._conn.execute(
            "SELECT page_id, url, page_class FROM webpages WHERE page_id = ?", (page_id,)
        ).fetchone()
        return Webpage(row[0], row[1], PageClass(row[2])) if row else None

    def page_by_url(self, url: str) -> Webpage | None:
        row = self._conn.execute(
            "SELECT page_id, url, page_class FROM webpages WHERE url = ? ORDER BY page_id LIMIT 1", (url,)
        ).fetchone()
        return Webpage(row[0], row[1], PageClass(row[2])) if row else None

    def pages(self) -> list[Webpage]:
        rows = self._conn.execute("SELECT page_id, url, page_class FROM webpages ORDER BY page_id").fetchall()
        return [Webpage(r[0], r[1], PageClass(r[2])) for r in rows]

    def upsert_fragment(self, fragment: Fragment) -> None:
        if fragment.parent_id is not None:
            row = self._conn.execute(
                "SELECT page_id FROM fragments WHERE fragment_id = ?", (fragment.parent_id,)
            ).fetchone()
            if row is not None and row[0] != fragment.page_id:
                raise StoreError(
                    f"fragment {fragment.fragment_id!r} and its parent {fragment.parent_id!r} "
                    f"must share a page"
                )
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO fragments(fragment_id, page_id, parent_id, dom_path) VALUES (?, ?, ?, ?) "
                "ON CONFLICT(fragment_id) DO UPDATE SET page_id = excluded.page_id, "
                "parent_id = excluded.parent_id, dom_path = excluded.dom_path",
                (fragment.fragment_id, fragment.page_id, fragment.parent_id, fragment.dom_path),
            )

    def fragments_for_page(self, page_id: str) -> list[Fragment]:
        rows = self._conn.execute(
            "SELECT fragment_id, page_id, parent_id, dom_path FROM fragments WHERE page_id = ? "
            "ORDER BY fragment_id",
            (page_id,),
        ).fetchall()
        return [Fragment(r[0], r[1], r[2], r[3]) for r in rows]

    def create_session(self, session: Session, token: str) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO sessions(session_id, user_id, device_class, user_agent, started_at, token) "
                "VALUES (?, ?, ?, ?, ?, ?)",
                (
                    session.session_id,
                    session.user_id,
                    session.device_class.value,
                    session.user_agent,
                    session.started_at,
                    token,
                ),
            )

    def get_session(self, session_id: str) -> Session | None:
        row = self._conn.execute(
            "SELECT session_id, user_id, device_class, user_agent, started_at FROM sessions "
            "WHERE session_id = ?",
            (session_id,),
        ).fetchone()
        if row is None:
            return None
        return Session(row[0], row[1], DeviceClass(row[2]), row[3], row[4])

    def session_token(self, session_id: str) -> str | None:
        row = self._conn.execute("SELECT token FROM sessions WHERE session_id = ?", (session_id,)).fetchone()
        return row[0] if row else None

    def sessions(self) -> list[Session]:
        rows = self._conn.execute(
            "SELECT session_id, user_id, device_class, user_agent, started_at FROM sessions "
            "ORDER BY session_id"
        ).fetchall()
        return [Session(r[0], r[1], DeviceClass(r[2]), r[3], r[4]) for r in rows]

    def delete_session(self, session_id: str) -> None:
        with self._lock, self._conn:
            self._conn.execute("DELETE FROM sessions WHERE session_id = ?", (session_id,))

    # --- events ------------------------------------------------------------

    def insert_events(self, events: list[RawEvent]) -> int:
        """Insert a batch atomically; duplicates by event_id are skipped.

        Returns the number of newly stored events. Any failure rolls the
        whole batch back.
        """
        if not events:
            return 0
        for ev in events:
            if self.get_session(ev.session_id) is None:
                raise UnknownSessionError(f"unknown session {ev.session_id!r}")
        stored = 0
        with self._lock, self._conn:
            for ev in events:
                cur = self._conn.execute(
                    "INSERT OR IGNORE INTO raw_events(event_id, session_id, page_id, client_time, payload) "
                    "VALUES (?, ?, ?, ?, ?)",
                    (
                        ev.event_id,
                        ev.session_id,
                        ev.page_id,
                        ev.client_time,
                        json.dumps(event_to_dict(ev)),
                    ),
                )
                stored += cur.rowcount
        return stored

    def events_for(self, session_id: str, page_id: str | None = None) -> list[RawEvent]:
        """Events ordered by client_time with arrival order as the tiebreak."""
        if page_id is None:
            rows = self._conn.execute(
                "SELECT payload FROM raw_events WHERE session_id = ? ORDER BY client_time, rowid",
                (session_id,),
            ).fetchall()
        else:
            rows = self._conn.execute(
                "SELECT payload FROM raw_events WHERE session_id = ? AND page_id = ? "
                "ORDER BY client_time, rowid",
                (session_id, page_id),
            ).fetchall()
        return [event_from_dict(json.loads(r[0])) for r in rows]

    def pages_with_events(self, session_id: str) -> list[str]:
        rows = self._conn.execute(
            "SELECT DISTINCT page_id FROM raw_events WHERE session_id = ? ORDER BY page_id",
            (session_id,),
        ).fetchall()
        return [r[0] for r in rows]

    def count_events(self) -> int:
        return self._conn.execute("SELECT COUNT(*) FROM raw_events").fetchone()[0]

    def add_client_indicator(self, session_id: str, fragment_id: str | None, kind: str, value: float) -> None:
        """Client-computed indicator, kept for reference only; derivation recomputes."""
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO client_indicators(session_id, fragment_id, kind, value, advisory) "
                "VALUES (?, ?, ?, ?, 1)",
                (session_id, fragment_id, kind, value),
            )

    # --- ratings / content ---------------------------------------------------

    def upsert_rating(self, rating: ExplicitRating) -> None:
        self.upsert_user(rating.user_id)
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO explicit_ratings(user_id, content_id, noticed, likert) VALUES (?, ?, ?, ?) "
                "ON CONFLICT(user_id, content_id) DO UPDATE SET noticed = excluded.noticed, "
                "likert = excluded.likert",
                (rating.user_id, rating.content_id, int(rating.noticed), rating.likert),
            )

    def ratings(self) -> list[ExplicitRating]:
        rows = self._conn.execute(
            "SELECT user_id, content_id, noticed, likert FROM explicit_ratings "
            "ORDER BY user_id, content_id"
        ).fetchall()
        return [ExplicitRating(r[0], r[1], bool(r[2]), r[3]) for r in rows]

    def upsert_content(self, content: ContentItem) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO content_items(content_id, detail_page_id, teaser_fragment_id) "
                "VALUES (?, ?, ?) "
                "ON CONFLICT(content_id) DO UPDATE SET detail_page_id = excluded.detail_page_id, "
                "teaser_fragment_id = excluded.teaser_fragment_id",
                (content.content_id, content.detail_page_id, content.teaser_fragment_id),
            )

    def content_items(self) -> list[ContentItem]:
        rows = self._conn.execute(
            "SELECT content_id, detail_page_id, teaser_fragment_id FROM content_items ORDER BY content_id"
        ).fetchall()
        return [ContentItem(r[0], r[1], r[2]) for r in rows]

    # --- derived values --------------------------------------------------------

    def replace_indicator_values(self, values: list[IndicatorValue]) -> None:
        with self._lock, self._conn:
            self._conn.execute("DELETE FROM indicator_values")
            self._conn.executemany(
                "INSERT INTO indicator_values(user_id, session_id, page_id, fragment_id, kind, value) "
                "VALUES (?, ?, ?, ?, ?, ?)",
                [
                    (v.user_id, v.session_id, v.page_id, v.fragment_id, v.kind.value, float(v.value))
                    for v in values
                ],
            )

    def indicator_values(self) -> list[IndicatorValue]:
        rows = self._conn.execute(
            "SELECT user_id, session_id, page_id, fragment_id, kind, value FROM indicator_values"
        ).fetchall()
        out = []
        for r in rows:
            kind = IndicatorKind(r[4])
            value = float(r[5]) if kind in DURATION_KINDS else int(r[5])
            out.append(IndicatorValue(r[0], r[1], r[2], r[3], kind, value))
        return out
