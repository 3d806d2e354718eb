"""Indicator engine: derives every implicit-interest indicator from a session timeline.

Derivations are pure per-(session, page) computations. Which families run
depends on the session's device class: movement-based indicators exist only
on desktop, while same-y contacts, swipes, and orientation changes exist only
on mobile. Results are per-fragment values, optionally rolled up to ancestor
fragments.
"""
from __future__ import annotations

from ..model import (
    DeviceClass,
    Fragment,
    IndicatorKind,
    IndicatorValue,
    KIND_ORDER,
    RawEvent,
    Session,
)
from ..timeline import ViewportHistory, segment_activity
from .config import IndicatorConfig, parse_config_text
from .movement import (
    MovementClass,
    MovementSegment,
    build_movement_segments,
    classify_movement_segment,
    derive_mouse_on_same_y,
    derive_mouse_over,
    derive_movement_indicators,
)
from .propagation import propagate_to_ancestors
from .text import derive_text_indicators
from .touch import derive_contact, derive_orientation, derive_swipe
from .visibility import derive_visibility, derive_zoom, is_visible

__all__ = [
    "IndicatorConfig",
    "parse_config_text",
    "MovementClass",
    "MovementSegment",
    "build_movement_segments",
    "classify_movement_segment",
    "derive_contact",
    "derive_mouse_on_same_y",
    "derive_mouse_over",
    "derive_movement_indicators",
    "derive_orientation",
    "derive_session_indicators",
    "derive_swipe",
    "derive_text_indicators",
    "derive_visibility",
    "derive_zoom",
    "is_visible",
    "propagate_to_ancestors",
]

_MOVEMENT_KIND = {
    MovementClass.HORIZONTAL: IndicatorKind.HORIZONTAL_MOVEMENT,
    MovementClass.VERTICAL: IndicatorKind.VERTICAL_MOVEMENT,
    MovementClass.RANDOM: IndicatorKind.RANDOM_MOVEMENT,
}


def derive_session_indicators(
    session: Session,
    page_id: str,
    timeline: list[RawEvent],
    fragments: list[Fragment],
    config: IndicatorConfig | None = None,
) -> list[IndicatorValue]:
    """Run every applicable derivation over one (session, page) timeline.

    Emits one record per (fragment, kind) with a positive count; duration
    kinds ride along with their count twin and may legitimately be 0.0 when
    the whole dwell fell into passive time.
    """
    config = config or IndicatorConfig()
    if not timeline:
        return []
    segmentation = segment_activity(timeline, config.passive_delta_s)
    history = ViewportHistory.from_timeline(timeline)
    device = session.device_class
    values: list[IndicatorValue] = []

    def emit(fragment_id: str, kind: IndicatorKind, value: float) -> None:
        if config.enabled(kind):
            values.append(
                IndicatorValue(session.user_id, session.session_id, page_id, fragment_id, kind, value)
            )

    for fid, (count, seconds) in derive_visibility(timeline, segmentation, history, config).items():
        emit(fid, IndicatorKind.VISIBILITY_COUNT, count)
        emit(fid, IndicatorKind.VISIBILITY_SECONDS, seconds)

    for fid, count in derive_zoom(timeline, config).items():
        emit(fid, IndicatorKind.ZOOM_COUNT, count)

    contacts, contact_same_y = derive_contact(timeline, history, device)
    for fid, count in contacts.items():
        emit(fid, IndicatorKind.CONTACT_IN_FRAGMENT, count)

    selects, cut_copies = derive_text_indicators(timeline)
    for fid, count in selects.items():
        emit(fid, IndicatorKind.SELECT_COUNT, count)
    for fid, count in cut_copies.items():
        emit(fid, IndicatorKind.CUT_COPY_COUNT, count)

    if device is DeviceClass.DESKTOP:
        for fid, per_class in derive_movement_indicators(timeline, history, config).items():
            total = sum(per_class.values())
            if total:
                emit(fid, IndicatorKind.MOVE_IN_FRAGMENT, total)
            for cls, count in per_class.items():
                if count:
                    emit(fid, _MOVEMENT_KIND[cls], count)
        for fid, (count, seconds) in derive_mouse_over(timeline, segmentation).items():
            emit(fid, IndicatorKind.MOUSE_OVER_FRAGMENT_COUNT, count)
            emit(fid, IndicatorKind.MOUSE_OVER_FRAGMENT_SECONDS, seconds)
        for fid, (count, seconds) in derive_mouse_on_same_y(timeline, segmentation, history, config).items():
            emit(fid, IndicatorKind.MOUSE_ON_SAME_Y_COUNT, count)
            emit(fid, IndicatorKind.MOUSE_ON_SAME_Y_SECONDS, seconds)
    else:
        for fid, count in contact_same_y.items():
            emit(fid, IndicatorKind.CONTACT_ON_SAME_Y_COUNT, count)
        for fid, (before, visible_after, skipped) in derive_swipe(timeline).items():
            if before:
                emit(fid, IndicatorKind.SWIPE_VISIBLE_BEFORE, before)
            if visible_after:
                emit(fid, IndicatorKind.SWIPE_VISIBLE_AFTER, visible_after)
            if skipped:
                emit(fid, IndicatorKind.SWIPE_SKIPPED, skipped)
        for fid, per_orientation in derive_orientation(timeline).items():
            for orientation, count in per_orientation.items():
                if count:
                    kind = (
                        IndicatorKind.ORIENTATION_CHANGE_LANDSCAPE
                        if orientation.value == "landscape"
                        else IndicatorKind.ORIENTATION_CHANGE_PORTRAIT
                    )
                    emit(fid, kind, count)

    values = propagate_to_ancestors(values, fragments, config)
    values.sort(key=lambda v: (v.fragment_id, KIND_ORDER[v.kind]))
    return values
