import random

import pytest
from hypothesis import given, strategies as st

from readlens.model import KeyUp, RawEvent, Rect, Scroll
from readlens.timeline import (
    TimelineError,
    ViewportHistory,
    build_timeline,
    segment_activity,
    viewport_at,
)

S = 1000  # ms


def key_events(times, session="s1", page="p1"):
    return [
        RawEvent(f"{session}-{page}-e{i}", session, page, t, KeyUp(False))
        for i, t in enumerate(times)
    ]


class TestBuildTimeline:
    def test_sorted_input_unchanged(self, make_event):
        events = [make_event(0, KeyUp(False)), make_event(10, KeyUp(False))]
        assert build_timeline(events) == events

    def test_shuffled_input_sorted(self):
        times = [5, 1, 9, 3, 7, 0]
        events = key_events(times)
        assert [ev.client_time for ev in build_timeline(events)] == sorted(times)

    def test_duplicate_event_ids_removed(self):
        ev = RawEvent("dup", "s1", "p1", 5, KeyUp(False))
        out = build_timeline([ev, ev, RawEvent("other", "s1", "p1", 1, KeyUp(False))])
        assert [e.event_id for e in out] == ["other", "dup"]

    def test_arrival_order_breaks_time_ties(self):
        a = RawEvent("a", "s1", "p1", 5, KeyUp(False))
        b = RawEvent("b", "s1", "p1", 5, KeyUp(True))
        assert [e.event_id for e in build_timeline([a, b])] == ["a", "b"]
        assert [e.event_id for e in build_timeline([b, a])] == ["b", "a"]

    def test_mixed_sessions_rejected(self):
        events = key_events([0]) + key_events([1], session="s2")
        with pytest.raises(TimelineError, match="sessions"):
            build_timeline(events)

    def test_mixed_pages_rejected(self):
        events = key_events([0]) + key_events([1], page="p2")
        with pytest.raises(TimelineError, match="pages"):
            build_timeline(events)


class TestSegmentActivity:
    def test_gap_rule_example(self):
        seg = segment_activity(key_events([0, 10 * S, 100 * S, 110 * S]), delta_seconds=60)
        assert seg.active == ((0, 10 * S), (100 * S, 110 * S))
        assert seg.passive == ((10 * S, 100 * S),)
        assert seg.total_active_ms() == 20 * S

    def test_single_event_degenerate(self):
        seg = segment_activity(key_events([42]))
        assert seg.active == ((42, 42),)
        assert seg.passive == ()

    def test_boundary_gap_counts_as_active(self):
        seg = segment_activity(key_events([0, 59 * S]), delta_seconds=60)
        assert seg.active == ((0, 59 * S),)
        seg = segment_activity(key_events([0, 60 * S]), delta_seconds=60)
        assert seg.active == ((0, 60 * S),)
        seg = segment_activity(key_events([0, 60 * S + 1]), delta_seconds=60)
        assert seg.passive == ((0, 60 * S + 1),)

    def test_empty_timeline_rejected(self):
        with pytest.raises(TimelineError):
            segment_activity([])

    @given(st.lists(st.integers(min_value=0, max_value=500_000), min_size=1, max_size=60))
    def test_tiling_is_exact(self, times):
        times = sorted(times)
        seg = segment_activity(key_events(times))
        assert seg.total_active_ms() + seg.total_passive_ms() == times[-1] - times[0]
        for s, e in seg.passive:
            assert e - s > seg.delta_ms

    def test_decreasing_delta_never_increases_active_time(self):
        rng = random.Random(7)
        for _ in range(50):
            times = sorted(rng.randrange(0, 400_000) for _ in range(rng.randint(2, 40)))
            events = key_events(times)
            totals = [
                segment_activity(events, delta_seconds=d).total_active_ms() for d in (90, 60, 30, 10)
            ]
            assert all(a >= b for a, b in zip(totals, totals[1:]))

    def test_active_overlap_ms(self):
        seg = segment_activity(key_events([0, 10 * S, 100 * S, 110 * S]))
        assert seg.active_overlap_ms(0, 110 * S) == 20 * S
        assert seg.active_overlap_ms(5 * S, 105 * S) == 10 * S
        assert seg.active_overlap_ms(20 * S, 90 * S) == 0


class TestViewportHistory:
    def _history(self):
        rects = {"f": Rect(0, 0, 10, 10)}
        events = [
            RawEvent("g1", "s1", "p1", 100, Scroll(Rect(0, 0, 800, 600), rects)),
            RawEvent("g2", "s1", "p1", 200, Scroll(Rect(0, 600, 800, 600), rects)),
        ]
        return ViewportHistory.from_timeline(events)

    def test_exact_hit(self):
        history = self._history()
        viewport, _ = viewport_at(history, 200)
        assert viewport.y == 600

    def test_between_entries_uses_earlier(self):
        history = self._history()
        viewport, _ = viewport_at(history, 150)
        assert viewport.y == 0

    def test_before_first_entry_raises(self):
        with pytest.raises(TimelineError):
            viewport_at(self._history(), 99)

    def test_right_continuous_step(self):
        history = self._history()
        assert viewport_at(history, 100)[0].y == 0
        assert viewport_at(history, 199)[0].y == 0
        assert viewport_at(history, 200)[0].y == 600
        assert viewport_at(history, 10_000)[0].y == 600

    def test_same_timestamp_keeps_last_arrival(self):
        rects = {}
        events = [
            RawEvent("g1", "s1", "p1", 100, Scroll(Rect(0, 0, 800, 600), rects)),
            RawEvent("g2", "s1", "p1", 100, Scroll(Rect(0, 999, 800, 600), rects)),
        ]
        history = ViewportHistory.from_timeline(events)
        assert len(history) == 1
        assert viewport_at(history, 100)[0].y == 999
