"""Contact, swipe, and orientation indicators."""
from __future__ import annotations

import logging

from ..model import (
    Contact,
    DeviceClass,
    Orientation,
    OrientationKind,
    RawEvent,
    SwipePhase,
    SwipePhaseKind,
    innermost_fragment_at,
)
from ..timeline import ViewportHistory

log = logging.getLogger(__name__)


def derive_contact(
    timeline: list[RawEvent], history: ViewportHistory, device: DeviceClass
) -> tuple[dict[str, int], dict[str, int]]:
    """(contact_in_fragment, contact_on_same_y_count) per fragment.

    A contact lands in the fragment it names, or failing that the innermost
    fragment containing its coordinates. On mobile, every other fragment whose
    vertical extent contains the contact y is marked same-y; fragments that
    contain the contact point outright are excluded (they own the contact).
    """
    in_fragment: dict[str, int] = {}
    same_y: dict[str, int] = {}
    for ev in timeline:
        kind = ev.kind
        if not isinstance(kind, Contact):
            continue
        snap = history.at_or_none(ev.client_time)
        rects = snap.fragment_rects if snap else {}
        target = kind.fragment_id or innermost_fragment_at(kind.x, kind.y, rects)
        if target is not None:
            in_fragment[target] = in_fragment.get(target, 0) + 1
        if device is DeviceClass.MOBILE:
            for fid, rect in rects.items():
                if fid == target or rect.contains_point(kind.x, kind.y):
                    continue
                if rect.contains_y(kind.y):
                    same_y[fid] = same_y.get(fid, 0) + 1
    return in_fragment, same_y


def derive_swipe(timeline: list[RawEvent]) -> dict[str, tuple[int, int, int]]:
    """(visible_before, visible_after, skipped) per fragment from swipe phases.

    With B visible at start, D the union of mid-swipe sets and A visible at
    the end, skipped fragments are D minus (B union A). Phases arriving out of
    order are dropped with a diagnostic; a swipe still open when the timeline
    ends is discarded so no after-set gets fabricated.
    """
    before: dict[str, int] = {}
    after: dict[str, int] = {}
    skipped: dict[str, int] = {}
    open_swipe: tuple[frozenset[str], set[str]] | None = None  # (B, D)
    for ev in timeline:
        kind = ev.kind
        if not isinstance(kind, SwipePhase):
            continue
        if kind.phase is SwipePhaseKind.START:
            if open_swipe is not None:
                log.debug("swipe start at t=%d while a swipe is open; previous swipe discarded", ev.client_time)
            open_swipe = (kind.visible_fragments, set())
        elif kind.phase is SwipePhaseKind.DURING:
            if open_swipe is None:
                log.debug("swipe 'during' at t=%d without start; ignored", ev.client_time)
                continue
            open_swipe[1].update(kind.visible_fragments)
        else:  # END
            if open_swipe is None:
                log.debug("swipe end at t=%d without start; ignored", ev.client_time)
                continue
            b, d = open_swipe
            a = kind.visible_fragments
            for fid in b:
                before[fid] = before.get(fid, 0) + 1
            for fid in a:
                after[fid] = after.get(fid, 0) + 1
            for fid in d - (b | a):
                skipped[fid] = skipped.get(fid, 0) + 1
            open_swipe = None
    out: dict[str, tuple[int, int, int]] = {}
    for fid in set(before) | set(after) | set(skipped):
        out[fid] = (before.get(fid, 0), after.get(fid, 0), skipped.get(fid, 0))
    return out


def derive_orientation(timeline: list[RawEvent]) -> dict[str, dict[OrientationKind, int]]:
    """Orientation-change counts per fragment visible after each turn.

    Consecutive events reporting the same orientation are no-ops; only actual
    changes (including the first reported orientation) count.
    """
    counts: dict[str, dict[OrientationKind, int]] = {}
    last: OrientationKind | None = None
    for ev in timeline:
        kind = ev.kind
        if not isinstance(kind, Orientation):
            continue
        if kind.new_orientation == last:
            continue
        last = kind.new_orientation
        for fid in kind.visible_fragments:
            per = counts.setdefault(fid, {o: 0 for o in OrientationKind})
            per[kind.new_orientation] += 1
    return counts
