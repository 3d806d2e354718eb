"""Per-session timeline reconstruction: ordering, activity segmentation, geometry history.

The activity split follows a single gap rule: the elapsed time between two
consecutive events is compared against a threshold (60 s by default); a gap
that exceeds the threshold is passive, anything else extends the current
active interval. Geometry (viewport + fragment rects) is a step function
that changes only at geometry-bearing events (scroll, pinch).
"""
from __future__ import annotations

from dataclasses import dataclass

from .model import Pinch, RawEvent, Rect, Scroll

DEFAULT_PASSIVE_DELTA_S = 60.0


class TimelineError(ValueError):
    pass


def build_timeline(events: list[RawEvent]) -> list[RawEvent]:
    """Order events by (client_time, arrival) and drop duplicate event_ids.

    All events must belong to a single (session, page); mixing raises.
    """
    deduped: list[RawEvent] = []
    seen: set[str] = set()
    for ev in events:
        if ev.event_id in seen:
            continue
        seen.add(ev.event_id)
        deduped.append(ev)
    if deduped:
        sessions = {ev.session_id for ev in deduped}
        if len(sessions) > 1:
            raise TimelineError(f"timeline mixes sessions: {sorted(sessions)}")
        pages = {ev.page_id for ev in deduped}
        if len(pages) > 1:
            raise TimelineError(f"timeline mixes pages: {sorted(pages)}")
    # sorted() is stable, so arrival order breaks client_time ties
    return sorted(deduped, key=lambda ev: ev.client_time)


@dataclass(frozen=True)
class ActivitySegmentation:
    """Disjoint active/passive intervals tiling [first_event, last_event], in ms."""

    active: tuple[tuple[int, int], ...]
    passive: tuple[tuple[int, int], ...]
    delta_ms: int

    def total_active_ms(self) -> int:
        return sum(e - s for s, e in self.active)

    def total_passive_ms(self) -> int:
        return sum(e - s for s, e in self.passive)

    def active_overlap_ms(self, start: int, end: int) -> int:
        """Length of [start, end] that falls inside active intervals."""
        if end < start:
            raise ValueError(f"inverted span [{start}, {end}]")
        total = 0
        for s, e in self.active:
            if s > end:
                break
            total += max(0, min(end, e) - max(start, s))
        return total


def segment_activity(
    timeline: list[RawEvent], delta_seconds: float = DEFAULT_PASSIVE_DELTA_S
) -> ActivitySegmentation:
    """Split a timeline into active/passive intervals by the inter-event gap rule.

    A gap strictly greater than *delta_seconds* is passive; a gap equal to the
    threshold still counts as active. Zero-length active intervals (single
    isolated events) are retained.
    """
    if not timeline:
        raise TimelineError("cannot segment an empty timeline")
    delta_ms = int(round(delta_seconds * 1000))
    times = [ev.client_time for ev in timeline]
    active: list[tuple[int, int]] = []
    passive: list[tuple[int, int]] = []
    start = prev = times[0]
    for t in times[1:]:
        if t - prev <= delta_ms:
            prev = t
            continue
        active.append((start, prev))
        passive.append((prev, t))
        start = prev = t
    active.append((start, prev))
    return ActivitySegmentation(tuple(active), tuple(passive), delta_ms)


@dataclass(frozen=True)
class GeometrySnapshot:
    timestamp: int
    viewport: Rect
    fragment_rects: dict[str, Rect]


class ViewportHistory:
    """Step-function history of viewport and fragment geometry.

    Entries have strictly increasing timestamps; when several geometry events
    share a timestamp, the last arrival wins.
    """

    def __init__(self, entries: list[GeometrySnapshot] | None = None):
        self.entries: list[GeometrySnapshot] = entries or []

    @classmethod
    def from_timeline(cls, timeline: list[RawEvent]) -> ViewportHistory:
        history = cls()
        for ev in timeline:
            if isinstance(ev.kind, Scroll):
                history.append(GeometrySnapshot(ev.client_time, ev.kind.viewport, ev.kind.fragment_rects))
            elif isinstance(ev.kind, Pinch):
                history.append(
                    GeometrySnapshot(ev.client_time, ev.kind.viewport_after, ev.kind.fragment_rects)
                )
        return history

    def append(self, snapshot: GeometrySnapshot) -> None:
        if self.entries and snapshot.timestamp < self.entries[-1].timestamp:
            raise TimelineError("geometry snapshots must be appended in time order")
        if self.entries and snapshot.timestamp == self.entries[-1].timestamp:
            self.entries[-1] = snapshot
        else:
            self.entries.append(snapshot)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def at(self, t: int) -> GeometrySnapshot:
        """Latest snapshot with timestamp <= t; raises before the first entry."""
        snap = self.at_or_none(t)
        if snap is None:
            raise TimelineError(f"no geometry known at t={t}")
        return snap

    def at_or_none(self, t: int) -> GeometrySnapshot | None:
        latest = None
        for entry in self.entries:
            if entry.timestamp > t:
                break
            latest = entry
        return latest

    def spans(self, end_time: int) -> list[tuple[int, int, GeometrySnapshot]]:
        """(start, end, snapshot) spans covering [first_entry, end_time].

        The final snapshot extends to *end_time*; a span may be zero-length
        when the last entry sits exactly at the end.
        """
        out: list[tuple[int, int, GeometrySnapshot]] = []
        for i, entry in enumerate(self.entries):
            if entry.timestamp > end_time:
                break
            nxt = self.entries[i + 1].timestamp if i + 1 < len(self.entries) else end_time
            out.append((entry.timestamp, min(nxt, end_time), entry))
        return out


def viewport_at(history: ViewportHistory, t: int) -> tuple[Rect, dict[str, Rect]]:
    """Viewport and fragment rects in effect at time *t* (step lookup)."""
    snap = history.at(t)
    return snap.viewport, snap.fragment_rects
