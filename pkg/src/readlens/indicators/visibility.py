"""Visibility and zoom indicators derived from the geometry step function."""
from __future__ import annotations

from ..model import Pinch, RawEvent, Rect, rect_intersection
from ..timeline import ActivitySegmentation, ViewportHistory
from .config import IndicatorConfig


def is_visible(fragment: Rect, viewport: Rect, config: IndicatorConfig) -> bool:
    """Visibility rule: enough of the fragment on screen, or the fragment is
    taller than the viewport and fills enough of it."""
    if fragment.area <= 0 or viewport.area <= 0:
        return False
    inter = rect_intersection(fragment, viewport)
    if inter is None:
        return False
    if inter.area / fragment.area >= config.visibility_min_fraction:
        return True
    return (
        fragment.height > viewport.height
        and inter.area / viewport.area >= config.tall_fragment_viewport_fraction
    )


def visible_spans(
    history: ViewportHistory, end_time: int, config: IndicatorConfig
) -> dict[str, list[tuple[int, int]]]:
    """Maximal [start, end] spans during which each fragment is visible.

    Geometry is a step function, so visibility can only flip at snapshot
    times; the last snapshot's state extends to *end_time*. Time before the
    first snapshot is unattributable and ignored.
    """
    spans: dict[str, list[tuple[int, int]]] = {}
    open_since: dict[str, int] = {}
    for start, end, snap in history.spans(end_time):
        now_visible = {
            fid
            for fid, rect in snap.fragment_rects.items()
            if is_visible(rect, snap.viewport, config)
        }
        for fid in list(open_since):
            if fid not in now_visible:
                spans.setdefault(fid, []).append((open_since.pop(fid), start))
        for fid in now_visible:
            open_since.setdefault(fid, start)
    for fid, since in open_since.items():
        spans.setdefault(fid, []).append((since, end_time))
    return spans


def derive_visibility(
    timeline: list[RawEvent],
    segmentation: ActivitySegmentation,
    history: ViewportHistory,
    config: IndicatorConfig,
) -> dict[str, tuple[int, float]]:
    """Per-fragment (visibility_count, visibility_seconds).

    The count increments on each not-visible -> visible transition; seconds
    accrue only inside active intervals but visibility state itself persists
    across passive gaps. Fragments never visible yield no entry.
    """
    if not timeline or not history:
        return {}
    end_time = timeline[-1].client_time
    out: dict[str, tuple[int, float]] = {}
    for fid, fragment_spans in visible_spans(history, end_time, config).items():
        count = len(fragment_spans)
        active_ms = sum(segmentation.active_overlap_ms(s, e) for s, e in fragment_spans)
        out[fid] = (count, active_ms / 1000.0)
    return out


def derive_zoom(timeline: list[RawEvent], config: IndicatorConfig) -> dict[str, int]:
    """zoom_count: each zoom-in pinch marks every fragment visible afterwards.

    Zoom-out (scale <= 1) is recorded in the timeline but marks nothing.
    """
    counts: dict[str, int] = {}
    for ev in timeline:
        if not isinstance(ev.kind, Pinch) or ev.kind.scale <= 1:
            continue
        for fid, rect in ev.kind.fragment_rects.items():
            if is_visible(rect, ev.kind.viewport_after, config):
                counts[fid] = counts.get(fid, 0) + 1
    return counts
