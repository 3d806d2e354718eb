"""Mouse-movement indicators: segment classification, dwell, and same-y attribution.

Pointer coordinates arrive in page space. While the pointer rests, a scroll
moves the page under it, so the resting pointer's page position is shifted by
the viewport-origin delta whenever geometry changes between movements.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

from ..model import (
    MouseEnter,
    MouseLeave,
    MouseMove,
    Pinch,
    RawEvent,
    Rect,
    Scroll,
    innermost_fragment_at,
)
from ..timeline import ActivitySegmentation, ViewportHistory
from .config import IndicatorConfig

log = logging.getLogger(__name__)

Point = tuple[int, float, float]  # (t_ms, x, y)


class MovementClass(str, enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    RANDOM = "random"


@dataclass(frozen=True)
class MovementSegment:
    points: tuple[Point, ...]
    classification: MovementClass

    @property
    def start_time(self) -> int:
        return self.points[0][0]

    @property
    def midpoint(self) -> tuple[float, float]:
        _, x0, y0 = self.points[0]
        _, x1, y1 = self.points[-1]
        return (x0 + x1) / 2, (y0 + y1) / 2


def classify_movement_segment(points: list[Point] | tuple[Point, ...], config: IndicatorConfig) -> MovementClass:
    """Classify a pointer stroke as horizontal, vertical, or random.

    Horizontal: the path never strays more than horiz_eps_y from its starting
    y and the net x displacement reaches horiz_min_dx; vertical is symmetric.
    Fuzz bands absorb hand jitter.
    """
    if len(points) < 2:
        raise ValueError("a movement segment needs at least 2 points")
    _, x0, y0 = points[0]
    _, x1, y1 = points[-1]
    max_dev_y = max(abs(y - y0) for _, _, y in points)
    max_dev_x = max(abs(x - x0) for _, x, _ in points)
    if max_dev_y <= config.horiz_eps_y and abs(x1 - x0) >= config.horiz_min_dx:
        return MovementClass.HORIZONTAL
    if max_dev_x <= config.vert_eps_x and abs(y1 - y0) >= config.vert_min_dy:
        return MovementClass.VERTICAL
    return MovementClass.RANDOM


def pointer_runs(timeline: list[RawEvent], gap_ms: int) -> list[list[Point]]:
    """Split mouse moves into runs broken by pauses longer than gap_ms.

    Runs with a single point are pointer repositions, not movements; callers
    decide whether they matter (same-y tracking does, classification ignores
    them).
    """
    runs: list[list[Point]] = []
    current: list[Point] = []
    for ev in timeline:
        if not isinstance(ev.kind, MouseMove):
            continue
        point = (ev.client_time, ev.kind.x, ev.kind.y)
        if current and point[0] - current[-1][0] > gap_ms:
            runs.append(current)
            current = []
        current.append(point)
    if current:
        runs.append(current)
    return runs


def build_movement_segments(timeline: list[RawEvent], config: IndicatorConfig) -> list[MovementSegment]:
    return [
        MovementSegment(tuple(run), classify_movement_segment(run, config))
        for run in pointer_runs(timeline, config.segment_gap_ms)
        if len(run) >= 2
    ]


def derive_movement_indicators(
    timeline: list[RawEvent], history: ViewportHistory, config: IndicatorConfig
) -> dict[str, dict[MovementClass, int]]:
    """Per-fragment movement counts keyed by classification.

    A segment is attributed to the innermost fragment containing its midpoint,
    using the geometry in effect at the segment's start; segments over no
    fragment (or before any geometry is known) are dropped.
    """
    counts: dict[str, dict[MovementClass, int]] = {}
    for segment in build_movement_segments(timeline, config):
        snap = history.at_or_none(segment.start_time)
        if snap is None:
            continue
        mx, my = segment.midpoint
        fid = innermost_fragment_at(mx, my, snap.fragment_rects)
        if fid is None:
            continue
        per = counts.setdefault(fid, {cls: 0 for cls in MovementClass})
        per[segment.classification] += 1
    return counts


def derive_mouse_over(
    timeline: list[RawEvent], segmentation: ActivitySegmentation
) -> dict[str, tuple[int, float]]:
    """Per-fragment (mouse_over_fragment_count, mouse_over_fragment_seconds).

    Count follows enter events; dwell time is enter-to-leave clipped to active
    intervals. An unmatched enter closes at the last event of the timeline.
    """
    if not timeline:
        return {}
    end_time = timeline[-1].client_time
    counts: dict[str, int] = {}
    dwell_ms: dict[str, int] = {}
    open_since: dict[str, int] = {}
    for ev in timeline:
        kind = ev.kind
        if isinstance(kind, MouseEnter):
            counts[kind.fragment_id] = counts.get(kind.fragment_id, 0) + 1
            open_since.setdefault(kind.fragment_id, ev.client_time)
        elif isinstance(kind, MouseLeave):
            since = open_since.pop(kind.fragment_id, None)
            if since is None:
                log.debug(
                    "mouseleave without mouseenter for fragment %s at t=%d; ignored",
                    kind.fragment_id,
                    ev.client_time,
                )
                continue
            dwell_ms[kind.fragment_id] = dwell_ms.get(kind.fragment_id, 0) + segmentation.active_overlap_ms(
                since, ev.client_time
            )
    for fid, since in open_since.items():
        dwell_ms[fid] = dwell_ms.get(fid, 0) + segmentation.active_overlap_ms(since, end_time)
    return {fid: (n, dwell_ms.get(fid, 0) / 1000.0) for fid, n in counts.items()}


def derive_mouse_on_same_y(
    timeline: list[RawEvent],
    segmentation: ActivitySegmentation,
    history: ViewportHistory,
    config: IndicatorConfig,
) -> dict[str, tuple[int, float]]:
    """Per-fragment (mouse_on_same_y_count, mouse_on_same_y_seconds).

    While the pointer rests, every fragment whose vertical extent contains the
    pointer's page y accrues time, except fragments that contain the pointer
    outright (those are dwell territory). Membership is re-evaluated when the
    pointer settles after a movement, jumps without forming a segment, or the
    page scrolls underneath it; each fresh entry into the band bumps the count.
    """
    if not timeline or not history:
        return {}
    end_time = timeline[-1].client_time
    runs = pointer_runs(timeline, config.segment_gap_ms)
    # index run boundaries by (time, x, y) occurrence order for the sweep below
    motion_starts: set[int] = set()
    motion_ends: dict[int, Point] = {}
    singletons: dict[int, Point] = {}
    move_counter = 0
    for run in runs:
        if len(run) >= 2:
            motion_starts.add(move_counter)
            motion_ends[move_counter + len(run) - 1] = run[-1]
        else:
            singletons[move_counter] = run[0]
        move_counter += len(run)

    counts: dict[str, int] = {}
    accrued_ms: dict[str, int] = {}
    member_since: dict[str, int] = {}
    pointer: tuple[float, float] | None = None
    in_motion = False
    current_rects: dict[str, Rect] = {}
    viewport_origin: tuple[float, float] | None = None

    def close_member(fid: str, t: int) -> None:
        accrued_ms[fid] = accrued_ms.get(fid, 0) + segmentation.active_overlap_ms(member_since.pop(fid), t)

    def reevaluate(t: int) -> None:
        if pointer is None:
            return
        px, py = pointer
        band = {
            fid
            for fid, rect in current_rects.items()
            if rect.contains_y(py) and not rect.contains_point(px, py)
        }
        for fid in list(member_since):
            if fid not in band:
                close_member(fid, t)
        for fid in band:
            if fid not in member_since:
                counts[fid] = counts.get(fid, 0) + 1
                member_since[fid] = t

    move_idx = 0
    for ev in timeline:
        kind = ev.kind
        if isinstance(kind, (Scroll, Pinch)):
            viewport = kind.viewport if isinstance(kind, Scroll) else kind.viewport_after
            if pointer is not None and not in_motion and viewport_origin is not None:
                dx = viewport.x - viewport_origin[0]
                dy = viewport.y - viewport_origin[1]
                pointer = (pointer[0] + dx, pointer[1] + dy)
            viewport_origin = (viewport.x, viewport.y)
            current_rects = kind.fragment_rects
            if not in_motion:
                reevaluate(ev.client_time)
        elif isinstance(kind, MouseMove):
            if move_idx in motion_starts:
                for fid in list(member_since):
                    close_member(fid, ev.client_time)
                in_motion = True
            if move_idx in motion_ends:
                t, x, y = motion_ends[move_idx]
                in_motion = False
                pointer = (x, y)
                reevaluate(t)
            elif move_idx in singletons:
                _, x, y = singletons[move_idx]
                pointer = (x, y)
                reevaluate(ev.client_time)
            move_idx += 1
    for fid in list(member_since):
        close_member(fid, end_time)
    return {fid: (n, accrued_ms.get(fid, 0) / 1000.0) for fid, n in counts.items()}
