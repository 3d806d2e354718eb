from readlens.indicators.text import derive_text_indicators
from readlens.indicators.touch import derive_contact, derive_orientation, derive_swipe
from readlens.model import (
    Clipboard,
    ClipboardAction,
    Contact,
    ContactKind,
    DeviceClass,
    Orientation,
    OrientationKind,
    Rect,
    Scroll,
    Selection,
    SwipePhase,
    SwipePhaseKind,
)
from readlens.timeline import ViewportHistory

VIEW = Rect(0, 0, 800, 600)


def history_for(make_event, rects):
    return ViewportHistory.from_timeline([make_event(0, Scroll(VIEW, rects))])


class TestContact:
    def test_click_inside_fragment(self, make_event):
        rects = {"a": Rect(0, 0, 200, 200)}
        events = [make_event(0, Scroll(VIEW, rects)), make_event(10, Contact(100, 100, ContactKind.CLICK))]
        history = ViewportHistory.from_timeline(events)
        in_frag, same_y = derive_contact(events, history, DeviceClass.DESKTOP)
        assert in_frag == {"a": 1}
        assert same_y == {}

    def test_mobile_tap_marks_same_y_band(self, make_event):
        # tap in A at y=300; B spans y in [250, 400]
        rects = {"a": Rect(0, 250, 200, 150), "b": Rect(300, 250, 200, 150)}
        events = [make_event(0, Scroll(VIEW, rects)), make_event(10, Contact(100, 300, ContactKind.TAP))]
        history = ViewportHistory.from_timeline(events)
        in_frag, same_y = derive_contact(events, history, DeviceClass.MOBILE)
        assert in_frag == {"a": 1}
        assert same_y == {"b": 1}

    def test_click_outside_all_fragments(self, make_event):
        rects = {"a": Rect(0, 0, 100, 100)}
        events = [make_event(0, Scroll(VIEW, rects)), make_event(10, Contact(700, 500, ContactKind.CLICK))]
        history = ViewportHistory.from_timeline(events)
        in_frag, same_y = derive_contact(events, history, DeviceClass.DESKTOP)
        assert in_frag == {}
        assert same_y == {}

    def test_explicit_fragment_id_wins(self, make_event):
        events = [make_event(10, Contact(5, 5, ContactKind.PRESS, fragment_id="named"))]
        in_frag, _ = derive_contact(events, ViewportHistory(), DeviceClass.MOBILE)
        assert in_frag == {"named": 1}


class TestSwipe:
    def _swipe(self, make_event, before, during_sets, after):
        events = [make_event(0, SwipePhase(SwipePhaseKind.START, frozenset(before)))]
        t = 0
        for during in during_sets:
            t += 100
            events.append(make_event(t, SwipePhase(SwipePhaseKind.DURING, frozenset(during))))
        events.append(make_event(t + 100, SwipePhase(SwipePhaseKind.END, frozenset(after))))
        return events

    def test_set_algebra(self, make_event):
        events = self._swipe(make_event, {"a", "b"}, [{"a", "b", "c", "d", "e"}], {"d", "e"})
        got = derive_swipe(events)
        assert got["c"] == (0, 0, 1)
        assert got["a"] == (1, 0, 0) and got["b"] == (1, 0, 0)
        assert got["d"] == (0, 1, 0) and got["e"] == (0, 1, 0)

    def test_nothing_skipped_when_during_covered(self, make_event):
        events = self._swipe(make_event, {"a"}, [{"a", "b"}], {"b"})
        got = derive_swipe(events)
        assert all(skipped == 0 for _, _, skipped in got.values())

    def test_stationary_swipe(self, make_event):
        events = self._swipe(make_event, {"x"}, [{"x"}], {"x"})
        assert derive_swipe(events) == {"x": (1, 1, 0)}

    def test_end_without_start_ignored(self, make_event):
        events = [make_event(0, SwipePhase(SwipePhaseKind.END, frozenset({"a"})))]
        assert derive_swipe(events) == {}

    def test_unfinished_swipe_discarded(self, make_event):
        events = [
            make_event(0, SwipePhase(SwipePhaseKind.START, frozenset({"a"}))),
            make_event(100, SwipePhase(SwipePhaseKind.DURING, frozenset({"a", "b"}))),
        ]
        assert derive_swipe(events) == {}


class TestOrientation:
    def test_single_change(self, make_event):
        events = [make_event(0, Orientation(OrientationKind.LANDSCAPE, frozenset({"a"})))]
        got = derive_orientation(events)
        assert got["a"][OrientationKind.LANDSCAPE] == 1

    def test_round_trip(self, make_event):
        events = [
            make_event(0, Orientation(OrientationKind.LANDSCAPE, frozenset({"a"}))),
            make_event(100, Orientation(OrientationKind.PORTRAIT, frozenset({"a"}))),
        ]
        got = derive_orientation(events)
        assert got["a"][OrientationKind.LANDSCAPE] == 1
        assert got["a"][OrientationKind.PORTRAIT] == 1

    def test_repeated_orientation_ignored(self, make_event):
        events = [
            make_event(0, Orientation(OrientationKind.LANDSCAPE, frozenset({"a"}))),
            make_event(100, Orientation(OrientationKind.LANDSCAPE, frozenset({"a"}))),
        ]
        got = derive_orientation(events)
        assert got["a"][OrientationKind.LANDSCAPE] == 1


class TestTextIndicators:
    def test_selection_counts(self, make_event):
        events = [make_event(0, Selection("a", 42))]
        selects, cut_copy = derive_text_indicators(events)
        assert selects == {"a": 1}
        assert cut_copy == {}

    def test_cut_and_copy_merged(self, make_event):
        events = [
            make_event(0, Clipboard("a", ClipboardAction.CUT, 10)),
            make_event(1, Clipboard("a", ClipboardAction.COPY, 10)),
        ]
        _, cut_copy = derive_text_indicators(events)
        assert cut_copy == {"a": 2}

    def test_empty_selection_skipped(self, make_event):
        events = [make_event(0, Selection("a", 0))]
        selects, _ = derive_text_indicators(events)
        assert selects == {}
