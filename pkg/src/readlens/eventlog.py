"""JSON codec for events and the line-delimited event log.

One JSON object per line with the `type` field first. Header records
(session, page, fragment, content, rating) precede the events they scope.
The same per-event encoding doubles as the HTTP wire format, so the log is
a faithful offline transcript of what a client would send.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

from .model import (
    Clipboard,
    ClipboardAction,
    Contact,
    ContactKind,
    ContentItem,
    EventKind,
    ExplicitRating,
    Fragment,
    KeyUp,
    MouseEnter,
    MouseLeave,
    MouseMove,
    Orientation,
    OrientationKind,
    PageClass,
    Pinch,
    RawEvent,
    Rect,
    Scroll,
    Selection,
    SwipePhase,
    SwipePhaseKind,
    Webpage,
)


class EventCodecError(ValueError):
    """A single event dict failed to parse."""


class EventLogError(ValueError):
    """A log line failed to parse; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class SessionRecord:
    """Log header describing a session; device class is derived at load time."""

    session_id: str
    user_id: str
    user_agent: str
    started_at: int
    page_url: str = ""


@dataclass
class LogDocument:
    """Parsed contents of an event log, in file order."""

    sessions: list[SessionRecord]
    pages: list[Webpage]
    fragments: list[Fragment]
    contents: list[ContentItem]
    ratings: list[ExplicitRating]
    events: list[RawEvent]


def _rect_to_dict(rect: Rect) -> dict[str, float]:
    return {"x": rect.x, "y": rect.y, "width": rect.width, "height": rect.height}


def _rect_from_dict(d: Any) -> Rect:
    if not isinstance(d, dict):
        raise EventCodecError(f"expected rect object, got {type(d).__name__}")
    try:
        return Rect(float(d["x"]), float(d["y"]), float(d["width"]), float(d["height"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise EventCodecError(f"bad rect: {exc}") from exc


def _rect_map_to_dict(rects: dict[str, Rect]) -> dict[str, dict[str, float]]:
    return {fid: _rect_to_dict(rect) for fid, rect in sorted(rects.items())}


def _rect_map_from_dict(d: Any) -> dict[str, Rect]:
    if not isinstance(d, dict):
        raise EventCodecError("fragment_rects must be an object")
    return {str(fid): _rect_from_dict(rect) for fid, rect in d.items()}


def _payload_to_dict(kind: EventKind) -> tuple[str, dict[str, Any]]:
    if isinstance(kind, Scroll):
        return "scroll", {
            "viewport": _rect_to_dict(kind.viewport),
            "fragment_rects": _rect_map_to_dict(kind.fragment_rects),
        }
    if isinstance(kind, MouseMove):
        return "mouse_move", {"x": kind.x, "y": kind.y}
    if isinstance(kind, MouseEnter):
        return "mouse_enter", {"fragment_id": kind.fragment_id}
    if isinstance(kind, MouseLeave):
        return "mouse_leave", {"fragment_id": kind.fragment_id}
    if isinstance(kind, Contact):
        payload = {"x": kind.x, "y": kind.y, "contact_kind": kind.contact_kind.value}
        if kind.fragment_id is not None:
            payload["fragment_id"] = kind.fragment_id
        return "contact", payload
    if isinstance(kind, KeyUp):
        return "key_up", {"selection_present": kind.selection_present}
    if isinstance(kind, Selection):
        return "selection", {"fragment_id": kind.fragment_id, "text_length": kind.text_length}
    if isinstance(kind, Clipboard):
        return "clipboard", {
            "fragment_id": kind.fragment_id,
            "action": kind.action.value,
            "text_length": kind.text_length,
        }
    if isinstance(kind, Pinch):
        return "pinch", {
            "scale": kind.scale,
            "viewport_after": _rect_to_dict(kind.viewport_after),
            "fragment_rects": _rect_map_to_dict(kind.fragment_rects),
        }
    if isinstance(kind, SwipePhase):
        return "swipe_phase", {
            "phase": kind.phase.value,
            "visible_fragments": sorted(kind.visible_fragments),
        }
    if isinstance(kind, Orientation):
        return "orientation", {
            "new_orientation": kind.new_orientation.value,
            "visible_fragments": sorted(kind.visible_fragments),
        }
    raise EventCodecError(f"unknown event payload {type(kind).__name__}")


def event_to_dict(ev: RawEvent) -> dict[str, Any]:
    type_name, payload = _payload_to_dict(ev.kind)
    out: dict[str, Any] = {
        "type": type_name,
        "event_id": ev.event_id,
        "session_id": ev.session_id,
        "page_id": ev.page_id,
        "client_time": ev.client_time,
    }
    out.update(payload)
    return out


def _require(d: dict, key: str) -> Any:
    if key not in d:
        raise EventCodecError(f"missing field {key!r}")
    return d[key]


def _parse_kind(type_name: str, d: dict) -> EventKind:
    try:
        if type_name == "scroll":
            return Scroll(_rect_from_dict(_require(d, "viewport")), _rect_map_from_dict(_require(d, "fragment_rects")))
        if type_name == "mouse_move":
            return MouseMove(float(_require(d, "x")), float(_require(d, "y")))
        if type_name == "mouse_enter":
            return MouseEnter(str(_require(d, "fragment_id")))
        if type_name == "mouse_leave":
            return MouseLeave(str(_require(d, "fragment_id")))
        if type_name == "contact":
            return Contact(
                float(_require(d, "x")),
                float(_require(d, "y")),
                ContactKind(_require(d, "contact_kind")),
                d.get("fragment_id"),
            )
        if type_name == "key_up":
            return KeyUp(bool(_require(d, "selection_present")))
        if type_name == "selection":
            return Selection(str(_require(d, "fragment_id")), int(_require(d, "text_length")))
        if type_name == "clipboard":
            return Clipboard(
                str(_require(d, "fragment_id")),
                ClipboardAction(_require(d, "action")),
                int(_require(d, "text_length")),
            )
        if type_name == "pinch":
            return Pinch(
                float(_require(d, "scale")),
                _rect_from_dict(_require(d, "viewport_after")),
                _rect_map_from_dict(_require(d, "fragment_rects")),
            )
        if type_name == "swipe_phase":
            return SwipePhase(
                SwipePhaseKind(_require(d, "phase")),
                frozenset(str(f) for f in _require(d, "visible_fragments")),
            )
        if type_name == "orientation":
            return Orientation(
                OrientationKind(_require(d, "new_orientation")),
                frozenset(str(f) for f in _require(d, "visible_fragments")),
            )
    except EventCodecError:
        raise
    except (TypeError, ValueError) as exc:
        raise EventCodecError(f"bad {type_name} payload: {exc}") from exc
    raise EventCodecError(f"unknown event type {type_name!r}")


def assign_event_id(session_id: str, client_time: int, type_name: str, payload: dict) -> str:
    """Deterministic server-side event id: hash of identity-relevant fields."""
    canonical = json.dumps(
        {"session_id": session_id, "client_time": client_time, "type": type_name, "payload": payload},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:32]


def event_from_dict(d: dict, session_id: str | None = None, page_id: str | None = None) -> RawEvent:
    """Parse one wire/log event object into a RawEvent.

    *session_id*/*page_id* supply batch-envelope defaults; when an event
    carries its own values they must agree. Events without an event_id get a
    deterministic server-assigned one.
    """
    if not isinstance(d, dict):
        raise EventCodecError(f"expected object, got {type(d).__name__}")
    type_name = str(_require(d, "type"))
    sid = d.get("session_id", session_id)
    if sid is None:
        raise EventCodecError("missing field 'session_id'")
    if session_id is not None and sid != session_id:
        raise EventCodecError(f"event session_id {sid!r} does not match batch {session_id!r}")
    pid = d.get("page_id", page_id)
    if pid is None:
        raise EventCodecError("missing field 'page_id'")
    if page_id is not None and pid != page_id:
        raise EventCodecError(f"event page_id {pid!r} does not match batch {page_id!r}")
    try:
        client_time = int(_require(d, "client_time"))
    except (TypeError, ValueError) as exc:
        raise EventCodecError(f"bad client_time: {exc}") from exc
    kind = _parse_kind(type_name, d)
    event_id = d.get("event_id")
    if not event_id:
        _, payload = _payload_to_dict(kind)
        event_id = assign_event_id(str(sid), client_time, type_name, payload)
    return RawEvent(str(event_id), str(sid), str(pid), client_time, kind)


# --- header records -------------------------------------------------------

_EVENT_TYPES = frozenset(
    {
        "scroll",
        "mouse_move",
        "mouse_enter",
        "mouse_leave",
        "contact",
        "key_up",
        "selection",
        "clipboard",
        "pinch",
        "swipe_phase",
        "orientation",
    }
)


def session_record_to_dict(rec: SessionRecord) -> dict[str, Any]:
    return {
        "type": "session",
        "session_id": rec.session_id,
        "user_id": rec.user_id,
        "user_agent": rec.user_agent,
        "started_at": rec.started_at,
        "page_url": rec.page_url,
    }


def page_to_dict(page: Webpage) -> dict[str, Any]:
    return {"type": "page", "page_id": page.page_id, "url": page.url, "page_class": page.page_class.value}


def fragment_to_dict(fragment: Fragment) -> dict[str, Any]:
    return {
        "type": "fragment",
        "fragment_id": fragment.fragment_id,
        "page_id": fragment.page_id,
        "parent_id": fragment.parent_id,
        "dom_path": fragment.dom_path,
    }


def content_to_dict(content: ContentItem) -> dict[str, Any]:
    return {
        "type": "content",
        "content_id": content.content_id,
        "detail_page_id": content.detail_page_id,
        "teaser_fragment_id": content.teaser_fragment_id,
    }


def rating_to_dict(rating: ExplicitRating) -> dict[str, Any]:
    return {
        "type": "rating",
        "user_id": rating.user_id,
        "content_id": rating.content_id,
        "noticed": rating.noticed,
        "likert": rating.likert,
    }


def parse_record(d: dict) -> SessionRecord | Webpage | Fragment | ContentItem | ExplicitRating | RawEvent:
    type_name = str(_require(d, "type"))
    try:
        if type_name == "session":
            return SessionRecord(
                str(_require(d, "session_id")),
                str(_require(d, "user_id")),
                str(_require(d, "user_agent")),
                int(_require(d, "started_at")),
                str(d.get("page_url", "")),
            )
        if type_name == "page":
            return Webpage(
                str(_require(d, "page_id")), str(_require(d, "url")), PageClass(_require(d, "page_class"))
            )
        if type_name == "fragment":
            parent = d.get("parent_id")
            return Fragment(
                str(_require(d, "fragment_id")),
                str(_require(d, "page_id")),
                str(parent) if parent is not None else None,
                str(d.get("dom_path", "")),
            )
        if type_name == "content":
            return ContentItem(
                str(_require(d, "content_id")),
                d.get("detail_page_id"),
                d.get("teaser_fragment_id"),
            )
        if type_name == "rating":
            likert = d.get("likert")
            return ExplicitRating(
                str(_require(d, "user_id")),
                str(_require(d, "content_id")),
                bool(_require(d, "noticed")),
                int(likert) if likert is not None else None,
            )
    except EventCodecError:
        raise
    except (TypeError, ValueError) as exc:
        raise EventCodecError(f"bad {type_name} record: {exc}") from exc
    if type_name in _EVENT_TYPES:
        return event_from_dict(d)
    raise EventCodecError(f"unknown record type {type_name!r}")


def parse_log_lines(lines: Iterable[str]) -> LogDocument:
    doc = LogDocument([], [], [], [], [], [])
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            d = json.loads(line)
        except json.JSONDecodeError as exc:
            raise EventLogError(lineno, f"invalid JSON: {exc.msg}") from exc
        try:
            record = parse_record(d)
        except EventCodecError as exc:
            raise EventLogError(lineno, str(exc)) from exc
        if isinstance(record, SessionRecord):
            doc.sessions.append(record)
        elif isinstance(record, Webpage):
            doc.pages.append(record)
        elif isinstance(record, Fragment):
            doc.fragments.append(record)
        elif isinstance(record, ContentItem):
            doc.contents.append(record)
        elif isinstance(record, ExplicitRating):
            doc.ratings.append(record)
        else:
            doc.events.append(record)
    return doc


def read_log(path: str | Path) -> LogDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_log_lines(fh)


def write_log(path: str | Path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")
