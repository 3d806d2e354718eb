"""HTTP ingestion: session registration and batched event intake.

The service is a thin FastAPI layer over :class:`IngestionService`, which
holds the actual contract: sessions authenticate with a bearer token issued
at registration, batches are atomic (a malformed batch stores nothing and
reports per-event errors), and re-sending a batch is a no-op thanks to
event-id idempotency.
"""
from __future__ import annotations

import hashlib
import secrets
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Header, Request
from fastapi.responses import JSONResponse

from .eventlog import (
    EventCodecError,
    LogDocument,
    event_from_dict,
    event_to_dict,
)
from .model import (
    DeviceClass,
    Fragment,
    PageClass,
    RawEvent,
    Session,
    Webpage,
)
from .store import Store

DEFAULT_MOBILE_MARKERS = ("mobile", "android", "iphone", "ipad", "ipod", "windows phone")
DEFAULT_OVERVIEW_MARKERS = ("overview",)
DEFAULT_BATCH_MAX = 50


def classify_device(user_agent: str, markers: tuple[str, ...] = DEFAULT_MOBILE_MARKERS) -> DeviceClass:
    """Mobile iff the user agent mentions any configured marker token."""
    ua = user_agent.lower()
    return DeviceClass.MOBILE if any(m in ua for m in markers) else DeviceClass.DESKTOP


def classify_page_url(url: str, markers: tuple[str, ...] = DEFAULT_OVERVIEW_MARKERS) -> PageClass:
    lowered = url.lower()
    return PageClass.OVERVIEW if any(m in lowered for m in markers) else PageClass.DETAIL


@dataclass(frozen=True)
class ServiceConfig:
    batch_max: int = DEFAULT_BATCH_MAX
    auto_create_users: bool = True
    mobile_markers: tuple[str, ...] = DEFAULT_MOBILE_MARKERS
    overview_markers: tuple[str, ...] = DEFAULT_OVERVIEW_MARKERS


class AuthenticationError(Exception):
    pass


class UnknownSessionError(Exception):
    pass


class BatchTooLargeError(Exception):
    pass


@dataclass
class BatchRejected(Exception):
    """Whole-batch rejection with a per-event error report."""

    errors: list[dict] = field(default_factory=list)

    def __str__(self) -> str:
        return f"batch rejected: {self.errors}"


class IngestionService:
    def __init__(self, store: Store, config: ServiceConfig | None = None):
        self.store = store
        self.config = config or ServiceConfig()

    def register_session(
        self,
        user_id: str,
        user_agent: str,
        page_url: str,
        *,
        session_id: str | None = None,
        page_id: str | None = None,
        page_class: str | None = None,
        started_at: int | None = None,
    ) -> tuple[Session, str, str]:
        """Create a session for a user and the page they are on.

        Returns (session, bearer token, page_id). Clients may pin session and
        page ids, which keeps offline replays byte-comparable with live
        ingestion. Unknown users are rejected unless auto-creation is on.
        """
        if not user_id:
            raise AuthenticationError("user_id must be non-empty")
        if not self.store.has_user(user_id):
            if not self.config.auto_create_users:
                raise AuthenticationError(f"unknown user {user_id!r}")
            self.store.upsert_user(user_id)

        cls = PageClass(page_class) if page_class else classify_page_url(page_url, self.config.overview_markers)
        if page_id is None:
            existing = self.store.page_by_url(page_url)
            if existing is not None:
                page = existing
            else:
                page = Webpage(hashlib.sha1(page_url.encode("utf-8")).hexdigest()[:12], page_url, cls)
                self.store.upsert_page(page)
        else:
            page = Webpage(page_id, page_url, cls)
            self.store.upsert_page(page)

        session = Session(
            session_id=session_id or uuid.uuid4().hex,
            user_id=user_id,
            device_class=classify_device(user_agent, self.config.mobile_markers),
            user_agent=user_agent,
            started_at=started_at if started_at is not None else int(time.time() * 1000),
        )
        token = secrets.token_hex(16)
        self.store.create_session(session, token)
        return session, token, page.page_id

    def authenticate(self, session_id: str, token: str | None) -> Session:
        session = self.store.get_session(session_id)
        if session is None:
            raise UnknownSessionError(f"unknown session {session_id!r}")
        if token is None or token != self.store.session_token(session_id):
            raise AuthenticationError("invalid or missing session token")
        return session

    def ingest_batch(self, session_id: str, body: dict) -> int:
        """Validate and store one event batch; returns the number newly stored.

        The batch is atomic: any malformed event rejects the whole payload
        with a per-event error report and the store is left unchanged.
        """
        if self.store.get_session(session_id) is None:
            raise UnknownSessionError(f"unknown session {session_id!r}")
        if body.get("session_id") not in (None, session_id):
            raise BatchRejected([{"index": None, "error": "batch session_id does not match URL"}])

        raw_events = body.get("events", [])
        if not isinstance(raw_events, list):
            raise BatchRejected([{"index": None, "error": "events must be a list"}])
        if len(raw_events) > self.config.batch_max:
            raise BatchTooLargeError(
                f"batch of {len(raw_events)} exceeds configured maximum {self.config.batch_max}"
            )

        page_id = body.get("page_id")
        page_block = body.get("page")
        if page_block is not None:
            try:
                page = Webpage(
                    str(page_block["page_id"]),
                    str(page_block["url"]),
                    PageClass(page_block["page_class"]),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise BatchRejected([{"index": None, "error": f"bad page block: {exc}"}]) from exc
        else:
            page = None

        fragment_blocks = body.get("fragments", [])
        fragments: list[Fragment] = []
        try:
            for fb in fragment_blocks:
                parent = fb.get("parent_id")
                fragments.append(
                    Fragment(
                        str(fb["fragment_id"]),
                        str(fb["page_id"]),
                        str(parent) if parent is not None else None,
                        str(fb.get("dom_path", "")),
                    )
                )
        except (KeyError, TypeError, ValueError) as exc:
            raise BatchRejected([{"index": None, "error": f"bad fragment block: {exc}"}]) from exc

        events: list[RawEvent] = []
        errors: list[dict] = []
        for i, d in enumerate(raw_events):
            try:
                events.append(event_from_dict(d, session_id=session_id, page_id=page_id))
            except EventCodecError as exc:
                errors.append({"index": i, "error": str(exc)})
        if errors:
            raise BatchRejected(errors)
        for prev, nxt in zip(events, events[1:]):
            if nxt.client_time < prev.client_time:
                raise BatchRejected(
                    [{"index": events.index(nxt), "error": "events must be non-decreasing in client_time"}]
                )

        # registry blocks land first so event foreign keys resolve
        if page is not None:
            self.store.upsert_page(page)
        for fragment in fragments:
            self.store.upsert_fragment(fragment)
        for ind in body.get("indicators", []):
            try:
                self.store.add_client_indicator(
                    session_id, ind.get("fragment_id"), str(ind["kind"]), float(ind["value"])
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise BatchRejected([{"index": None, "error": f"bad indicator block: {exc}"}]) from exc
        return self.store.insert_events(events)


def create_app(store: Store, config: ServiceConfig | None = None) -> FastAPI:
    """Wire the ingestion service into HTTP endpoints."""
    service = IngestionService(store, config)
    app = FastAPI(title="readlens ingestion", version="0.1.0")
    app.state.service = service

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    async def register(request: Request) -> JSONResponse:
        body = await request.json()
        try:
            session, token, page_id = service.register_session(
                str(body.get("user_id", "")),
                str(body.get("user_agent", "")),
                str(body.get("page_url", "")),
                session_id=body.get("session_id"),
                page_id=body.get("page_id"),
                page_class=body.get("page_class"),
                started_at=body.get("started_at"),
            )
        except AuthenticationError as exc:
            return JSONResponse({"error": str(exc)}, status_code=401)
        except ValueError as exc:
            return JSONResponse({"error": str(exc)}, status_code=422)
        return JSONResponse(
            {
                "session_id": session.session_id,
                "user_id": session.user_id,
                "device_class": session.device_class.value,
                "started_at": session.started_at,
                "token": token,
                "page_id": page_id,
            },
            status_code=201,
        )

    @app.post("/sessions/{session_id}/events")
    async def ingest(
        session_id: str, request: Request, authorization: str | None = Header(default=None)
    ) -> JSONResponse:
        token = None
        if authorization and authorization.lower().startswith("bearer "):
            token = authorization[7:]
        try:
            service.authenticate(session_id, token)
            accepted = service.ingest_batch(session_id, await request.json())
        except UnknownSessionError as exc:
            return JSONResponse({"error": str(exc)}, status_code=404)
        except AuthenticationError as exc:
            return JSONResponse({"error": str(exc)}, status_code=401)
        except BatchTooLargeError as exc:
            return JSONResponse({"error": str(exc)}, status_code=413)
        except BatchRejected as exc:
            return JSONResponse({"accepted": 0, "errors": exc.errors}, status_code=422)
        return JSONResponse({"accepted": accepted})

    return app


def push_log_over_http(doc: LogDocument, client, batch_max: int = DEFAULT_BATCH_MAX) -> int:
    """Send a parsed log's sessions and events through the HTTP surface.

    *client* is any httpx-compatible client (including FastAPI's TestClient)
    pointed at the service. Ratings and content mappings are explicit study
    data, not interaction events; they are loaded out of band. Returns the
    total number of accepted events.
    """
    pages_by_id = {p.page_id: p for p in doc.pages}
    pages_by_url = {p.url: p for p in doc.pages}
    fragments_by_page: dict[str, list[Fragment]] = {}
    for fragment in doc.fragments:
        fragments_by_page.setdefault(fragment.page_id, []).append(fragment)

    tokens: dict[str, str] = {}
    for rec in doc.sessions:
        payload = {
            "user_id": rec.user_id,
            "user_agent": rec.user_agent,
            "page_url": rec.page_url,
            "session_id": rec.session_id,
            "started_at": rec.started_at,
        }
        page = pages_by_url.get(rec.page_url)
        if page is not None:
            payload["page_id"] = page.page_id
            payload["page_class"] = page.page_class.value
        resp = client.post("/sessions", json=payload)
        if resp.status_code != 201:
            raise RuntimeError(f"session registration failed: {resp.status_code} {resp.text}")
        tokens[rec.session_id] = resp.json()["token"]

    grouped: dict[tuple[str, str], list[RawEvent]] = {}
    group_order: list[tuple[str, str]] = []
    for ev in doc.events:
        key = (ev.session_id, ev.page_id)
        if key not in grouped:
            grouped[key] = []
            group_order.append(key)
        grouped[key].append(ev)

    accepted = 0
    registered_pages: set[str] = set()
    for session_id, page_id in group_order:
        events = grouped[(session_id, page_id)]
        for start in range(0, len(events), batch_max):
            chunk = events[start : start + batch_max]
            body: dict = {
                "session_id": session_id,
                "page_id": page_id,
                "sent_at": chunk[-1].client_time,
                "events": [event_to_dict(ev) for ev in chunk],
            }
            if page_id not in registered_pages:
                page = pages_by_id.get(page_id)
                if page is not None:
                    body["page"] = {
                        "page_id": page.page_id,
                        "url": page.url,
                        "page_class": page.page_class.value,
                    }
                body["fragments"] = [
                    {
                        "fragment_id": f.fragment_id,
                        "page_id": f.page_id,
                        "parent_id": f.parent_id,
                        "dom_path": f.dom_path,
                    }
                    for f in fragments_by_page.get(page_id, [])
                ]
                registered_pages.add(page_id)
            resp = client.post(
                f"/sessions/{session_id}/events",
                json=body,
                headers={"Authorization": f"Bearer {tokens[session_id]}"},
            )
            if resp.status_code != 200:
                raise RuntimeError(f"batch rejected: {resp.status_code} {resp.text}")
            accepted += resp.json()["accepted"]
    return accepted
