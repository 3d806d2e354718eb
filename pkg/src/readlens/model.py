"""Domain types shared across the engine, plus pure geometry and rating-scale helpers.

All coordinates are page coordinates (document space, CSS px); the viewport is
expressed as a page-space rect so fragment/viewport comparisons are
scroll-invariant. Everything here is an immutable value object.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class DeviceClass(str, enum.Enum):
    DESKTOP = "desktop"
    MOBILE = "mobile"


class PageClass(str, enum.Enum):
    OVERVIEW = "overview"
    DETAIL = "detail"


class ContactKind(str, enum.Enum):
    CLICK = "click"
    TAP = "tap"
    PRESS = "press"


class ClipboardAction(str, enum.Enum):
    CUT = "cut"
    COPY = "copy"


class SwipePhaseKind(str, enum.Enum):
    START = "start"
    DURING = "during"
    END = "end"


class OrientationKind(str, enum.Enum):
    PORTRAIT = "portrait"
    LANDSCAPE = "landscape"


class GeometryError(ValueError):
    """Degenerate geometry where a well-defined answer does not exist."""


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in page coordinates (CSS px)."""

    x: float
    y: float
    width: float
    height: float

    def __post_init__(self) -> None:
        if self.width < 0 or self.height < 0:
            raise ValueError(f"negative extent: {self.width}x{self.height}")
        for v in (self.x, self.y, self.width, self.height):
            if not math.isfinite(v):
                raise ValueError("non-finite rect coordinate")

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def x2(self) -> float:
        return self.x + self.width

    @property
    def y2(self) -> float:
        return self.y + self.height

    def contains_point(self, x: float, y: float) -> bool:
        return self.x <= x <= self.x2 and self.y <= y <= self.y2

    def contains_y(self, y: float) -> bool:
        """True when *y* falls inside this rect's vertical extent."""
        return self.y <= y <= self.y2


def rect_intersection(a: Rect, b: Rect) -> Rect | None:
    """Axis-aligned intersection of two rects; None when disjoint.

    Rects that merely touch yield a zero-area rect (closed-interval
    semantics). Overlap extents are clamped to the inputs' extents so float
    rounding can never produce a result poking outside either rect.
    """
    x1 = max(a.x, b.x)
    y1 = max(a.y, b.y)
    w = min(a.x2, b.x2) - x1
    h = min(a.y2, b.y2) - y1
    if w < 0 or h < 0:
        return None
    return Rect(x1, y1, min(w, a.width, b.width), min(h, a.height, b.height))


def visibility_fraction(fragment: Rect, viewport: Rect) -> float:
    """Fraction of *fragment*'s area covered by *viewport*, in [0, 1]."""
    if fragment.area <= 0:
        raise GeometryError("fragment has zero area")
    inter = rect_intersection(fragment, viewport)
    if inter is None:
        return 0.0
    return inter.area / fragment.area


def likert_to_unit(likert: int) -> float:
    """Map a seven-point Likert response onto [0, 1].

    1 maps to 0.0 and 7 to 1.0 in uniform steps of 1/6. Rounding to two
    decimals happens only at presentation time (see :func:`format_unit`).
    """
    if not isinstance(likert, int) or isinstance(likert, bool):
        raise TypeError(f"likert must be an int, got {type(likert).__name__}")
    if not 1 <= likert <= 7:
        raise ValueError(f"likert out of range [1, 7]: {likert}")
    return (likert - 1) / 6


def format_unit(value: float) -> str:
    """Two-decimal presentation used in reports (e.g. 1/3 -> '0.33')."""
    return f"{value:.2f}"


@dataclass(frozen=True)
class User:
    user_id: str

    def __post_init__(self) -> None:
        if not self.user_id:
            raise ValueError("user_id must be non-empty")


@dataclass(frozen=True)
class Session:
    session_id: str
    user_id: str
    device_class: DeviceClass
    user_agent: str
    started_at: int  # ms since epoch


@dataclass(frozen=True)
class Webpage:
    page_id: str
    url: str
    page_class: PageClass

    def __post_init__(self) -> None:
        if not self.url:
            raise ValueError("url must be non-empty")


@dataclass(frozen=True)
class Fragment:
    """A tracked region of a page; parent links form a forest within the page."""

    fragment_id: str
    page_id: str
    parent_id: str | None = None
    dom_path: str = ""


# --- raw event payloads -------------------------------------------------

@dataclass(frozen=True)
class Scroll:
    viewport: Rect
    fragment_rects: dict[str, Rect]


@dataclass(frozen=True)
class MouseMove:
    x: float
    y: float


@dataclass(frozen=True)
class MouseEnter:
    fragment_id: str


@dataclass(frozen=True)
class MouseLeave:
    fragment_id: str


@dataclass(frozen=True)
class Contact:
    x: float
    y: float
    contact_kind: ContactKind
    fragment_id: str | None = None


@dataclass(frozen=True)
class KeyUp:
    selection_present: bool


@dataclass(frozen=True)
class Selection:
    fragment_id: str
    text_length: int


@dataclass(frozen=True)
class Clipboard:
    fragment_id: str
    action: ClipboardAction
    text_length: int


@dataclass(frozen=True)
class Pinch:
    scale: float
    viewport_after: Rect
    fragment_rects: dict[str, Rect]

    def __post_init__(self) -> None:
        if not (self.scale > 0):
            raise ValueError(f"pinch scale must be > 0, got {self.scale}")


@dataclass(frozen=True)
class SwipePhase:
    phase: SwipePhaseKind
    visible_fragments: frozenset[str]


@dataclass(frozen=True)
class Orientation:
    new_orientation: OrientationKind
    visible_fragments: frozenset[str]


EventKind = (
    Scroll
    | MouseMove
    | MouseEnter
    | MouseLeave
    | Contact
    | KeyUp
    | Selection
    | Clipboard
    | Pinch
    | SwipePhase
    | Orientation
)


@dataclass(frozen=True)
class RawEvent:
    """One captured client interaction with page-space geometry."""

    event_id: str
    session_id: str
    page_id: str
    client_time: int  # ms since epoch
    kind: EventKind


# --- derived values -----------------------------------------------------

class IndicatorKind(str, enum.Enum):
    """Every indicator the engine derives, in canonical report order."""

    VISIBILITY_COUNT = "visibility_count"
    VISIBILITY_SECONDS = "visibility_seconds"
    RANDOM_MOVEMENT = "random_movement"
    MOVE_IN_FRAGMENT = "move_in_fragment"
    MOUSE_OVER_FRAGMENT_COUNT = "mouse_over_fragment_count"
    MOUSE_OVER_FRAGMENT_SECONDS = "mouse_over_fragment_seconds"
    HORIZONTAL_MOVEMENT = "horizontal_movement"
    VERTICAL_MOVEMENT = "vertical_movement"
    MOUSE_ON_SAME_Y_COUNT = "mouse_on_same_y_count"
    MOUSE_ON_SAME_Y_SECONDS = "mouse_on_same_y_seconds"
    CONTACT_IN_FRAGMENT = "contact_in_fragment"
    CONTACT_ON_SAME_Y_COUNT = "contact_on_same_y_count"
    SELECT_COUNT = "select_count"
    CUT_COPY_COUNT = "cut_copy_count"
    ZOOM_COUNT = "zoom_count"
    SWIPE_VISIBLE_BEFORE = "swipe_visible_before"
    SWIPE_VISIBLE_AFTER = "swipe_visible_after"
    SWIPE_SKIPPED = "swipe_skipped"
    ORIENTATION_CHANGE_LANDSCAPE = "orientation_change_landscape"
    ORIENTATION_CHANGE_PORTRAIT = "orientation_change_portrait"


DURATION_KINDS = frozenset(
    {
        IndicatorKind.VISIBILITY_SECONDS,
        IndicatorKind.MOUSE_OVER_FRAGMENT_SECONDS,
        IndicatorKind.MOUSE_ON_SAME_Y_SECONDS,
    }
)

DESKTOP_ONLY_KINDS = frozenset(
    {
        IndicatorKind.RANDOM_MOVEMENT,
        IndicatorKind.MOVE_IN_FRAGMENT,
        IndicatorKind.MOUSE_OVER_FRAGMENT_COUNT,
        IndicatorKind.MOUSE_OVER_FRAGMENT_SECONDS,
        IndicatorKind.HORIZONTAL_MOVEMENT,
        IndicatorKind.VERTICAL_MOVEMENT,
        IndicatorKind.MOUSE_ON_SAME_Y_COUNT,
        IndicatorKind.MOUSE_ON_SAME_Y_SECONDS,
    }
)

MOBILE_ONLY_KINDS = frozenset(
    {
        IndicatorKind.CONTACT_ON_SAME_Y_COUNT,
        IndicatorKind.SWIPE_VISIBLE_BEFORE,
        IndicatorKind.SWIPE_VISIBLE_AFTER,
        IndicatorKind.SWIPE_SKIPPED,
        IndicatorKind.ORIENTATION_CHANGE_LANDSCAPE,
        IndicatorKind.ORIENTATION_CHANGE_PORTRAIT,
    }
)

KIND_ORDER = {kind: i for i, kind in enumerate(IndicatorKind)}


def kinds_for_device(device: DeviceClass) -> frozenset[IndicatorKind]:
    """Indicator kinds that may ever be produced for a device class."""
    if device is DeviceClass.DESKTOP:
        return frozenset(IndicatorKind) - MOBILE_ONLY_KINDS
    return frozenset(IndicatorKind) - DESKTOP_ONLY_KINDS


@dataclass(frozen=True)
class IndicatorValue:
    """One derived (user, session, page, fragment, kind) -> value record.

    Duration kinds carry seconds at millisecond resolution; count kinds
    carry non-negative integers.
    """

    user_id: str
    session_id: str
    page_id: str
    fragment_id: str
    kind: IndicatorKind
    value: float

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError(f"indicator value must be >= 0, got {self.value}")
        if self.kind not in DURATION_KINDS and self.value != int(self.value):
            raise ValueError(f"count kind {self.kind.value} must be integral, got {self.value}")

    def as_key(self) -> tuple:
        return (self.user_id, self.session_id, self.page_id, self.fragment_id, self.kind.value)


@dataclass(frozen=True)
class ExplicitRating:
    """A user's questionnaire answer for one content item."""

    user_id: str
    content_id: str
    noticed: bool
    likert: int | None = None

    def __post_init__(self) -> None:
        if self.likert is not None:
            if not self.noticed:
                raise ValueError("likert may only be present when noticed")
            if not 1 <= self.likert <= 7:
                raise ValueError(f"likert out of range [1, 7]: {self.likert}")


@dataclass(frozen=True)
class ContentItem:
    """Maps an article to its detail page and its teaser fragment on the overview page."""

    content_id: str
    detail_page_id: str | None = None
    teaser_fragment_id: str | None = None


def build_parent_map(fragments: list[Fragment]) -> dict[str, str | None]:
    """fragment_id -> parent_id map, validated to be acyclic (a forest)."""
    parents = {f.fragment_id: f.parent_id for f in fragments}
    for start in parents:
        seen = {start}
        cur = parents.get(start)
        while cur is not None:
            if cur in seen:
                raise ValueError(f"fragment parent links contain a cycle through {cur!r}")
            seen.add(cur)
            cur = parents.get(cur)
    return parents


def innermost_fragment_at(x: float, y: float, rects: dict[str, Rect]) -> str | None:
    """Smallest-area fragment whose rect contains the point; None if outside all."""
    best: tuple[float, str] | None = None
    for fid, rect in rects.items():
        if rect.contains_point(x, y):
            key = (rect.area, fid)
            if best is None or key < best:
                best = key
    return best[1] if best else None
