"""Deterministic scripted-session synthesizer with ground truth by construction.

Each archetype mirrors a reading behavior seen in the wild: someone who only
touches the page when forced to, someone who scrolls continuously, someone
who sweeps the pointer along lines of text, someone who parks the pointer in
the margin, and a mobile reader who swipes, taps, zooms, and rotates.

Every scenario declares the exact indicator values its event stream must
produce. The declarations are computed from the construction parameters with
plain arithmetic (gap sums, set differences), never by running the engine, so
they stay a valid independent oracle.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .eventlog import (
    content_to_dict,
    event_to_dict,
    fragment_to_dict,
    page_to_dict,
    rating_to_dict,
    session_record_to_dict,
    SessionRecord,
)
from .model import (
    Contact,
    ContactKind,
    ContentItem,
    ExplicitRating,
    Fragment,
    IndicatorKind,
    IndicatorValue,
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
    SwipePhase,
    SwipePhaseKind,
    Webpage,
)

ARCHETYPES = (
    "minimal-interactor",
    "continuous-scroller",
    "pointer-reader",
    "same-y-parker",
    "mobile-swiper",
)

DESKTOP_UA = "Mozilla/5.0 (X11; Linux x86_64) SynthBrowser/1.0"
MOBILE_UA = "Mozilla/5.0 (Linux; Android 12) Mobile SynthBrowser/1.0"

BASE_TIME = 1_700_000_000_000  # fixed epoch anchor keeps logs reproducible


@dataclass
class SynthScenario:
    archetype: str
    seed: int
    session: SessionRecord
    page: Webpage
    fragments: list[Fragment]
    events: list[RawEvent]
    expected: list[IndicatorValue]

    @property
    def user_id(self) -> str:
        return self.session.user_id

    @property
    def session_id(self) -> str:
        return self.session.session_id

    def records(self) -> list[dict]:
        out = [page_to_dict(self.page)]
        out.extend(fragment_to_dict(f) for f in self.fragments)
        out.append(session_record_to_dict(self.session))
        out.extend(event_to_dict(ev) for ev in self.events)
        return out


class _EventBuilder:
    def __init__(self, session_id: str, page_id: str):
        self.session_id = session_id
        self.page_id = page_id
        self.events: list[RawEvent] = []

    def add(self, t: int, kind) -> RawEvent:
        ev = RawEvent(
            f"{self.session_id}-e{len(self.events):04d}", self.session_id, self.page_id, t, kind
        )
        self.events.append(ev)
        return ev


def _stacked_fragments(page_id: str, n: int, width: float = 800.0, height: float = 600.0) -> tuple[list[Fragment], dict[str, Rect]]:
    fragments = [Fragment(f"{page_id}-f{i}", page_id, None, f"div.fragment:{i}") for i in range(n)]
    rects = {
        f.fragment_id: Rect(0.0, i * height, width, height) for i, f in enumerate(fragments)
    }
    return fragments, rects


def _ids(archetype: str, seed: int) -> tuple[str, str, str]:
    slug = f"{archetype}-{seed}"
    return f"u-{slug}", f"s-{slug}", f"p-{slug}"


def synthesize(archetype: str, seed: int, *, user_id: str | None = None) -> SynthScenario:
    """Build a deterministic scenario for one archetype and seed."""
    if archetype not in ARCHETYPES:
        raise ValueError(f"unknown archetype {archetype!r}; expected one of {ARCHETYPES}")
    rng = random.Random(f"{archetype}:{seed}")
    builder = {
        "minimal-interactor": _minimal_interactor,
        "continuous-scroller": _continuous_scroller,
        "pointer-reader": _pointer_reader,
        "same-y-parker": _same_y_parker,
        "mobile-swiper": _mobile_swiper,
    }[archetype]
    scenario = builder(rng, seed)
    if user_id is not None:
        scenario = _reown(scenario, user_id)
    return scenario


def _reown(scenario: SynthScenario, user_id: str) -> SynthScenario:
    session = SessionRecord(
        scenario.session.session_id,
        user_id,
        scenario.session.user_agent,
        scenario.session.started_at,
        scenario.session.page_url,
    )
    expected = [
        IndicatorValue(user_id, v.session_id, v.page_id, v.fragment_id, v.kind, v.value)
        for v in scenario.expected
    ]
    return SynthScenario(
        scenario.archetype, scenario.seed, session, scenario.page, scenario.fragments,
        scenario.events, expected,
    )


def _expect(
    session: SessionRecord, page_id: str, fragment_id: str, kind: IndicatorKind, value: float
) -> IndicatorValue:
    return IndicatorValue(session.user_id, session.session_id, page_id, fragment_id, kind, value)


def _minimal_interactor(rng: random.Random, seed: int) -> SynthScenario:
    """Touches the page only when forced to; long idle stretches are passive."""
    user_id, session_id, page_id = _ids("minimal-interactor", seed)
    page = Webpage(page_id, f"https://news.example/articles/{page_id}", PageClass.DETAIL)
    fragments, rects = _stacked_fragments(page_id, 2)
    viewport = Rect(0.0, 0.0, 800.0, 600.0)

    t0 = BASE_TIME
    b = _EventBuilder(session_id, page_id)
    b.add(t0, Scroll(viewport, rects))
    t = t0
    active_ms = 0
    for _ in range(rng.randint(2, 4)):
        gap = rng.randint(65_000, 110_000) if rng.random() < 0.4 else rng.randint(3_000, 40_000)
        t += gap
        if gap <= 60_000:
            active_ms += gap
        b.add(t, KeyUp(selection_present=False))

    session = SessionRecord(session_id, user_id, DESKTOP_UA, t0, page.url)
    f0 = fragments[0].fragment_id
    expected = [
        _expect(session, page_id, f0, IndicatorKind.VISIBILITY_COUNT, 1),
        _expect(session, page_id, f0, IndicatorKind.VISIBILITY_SECONDS, active_ms / 1000.0),
    ]
    return SynthScenario("minimal-interactor", seed, session, page, fragments, b.events, expected)


def _continuous_scroller(rng: random.Random, seed: int) -> SynthScenario:
    """Keeps the text moving: each fragment is on screen for one scroll step."""
    user_id, session_id, page_id = _ids("continuous-scroller", seed)
    page = Webpage(page_id, f"https://news.example/articles/{page_id}", PageClass.DETAIL)
    n = rng.randint(3, 6)
    fragments, rects = _stacked_fragments(page_id, n)

    t0 = BASE_TIME
    times = [t0]
    for _ in range(n):
        times.append(times[-1] + rng.randint(1_500, 5_000))
    b = _EventBuilder(session_id, page_id)
    for k, t in enumerate(times):
        b.add(t, Scroll(Rect(0.0, k * 600.0, 800.0, 600.0), rects))

    session = SessionRecord(session_id, user_id, DESKTOP_UA, t0, page.url)
    expected = []
    for k, fragment in enumerate(fragments):
        expected.append(_expect(session, page_id, fragment.fragment_id, IndicatorKind.VISIBILITY_COUNT, 1))
        expected.append(
            _expect(
                session,
                page_id,
                fragment.fragment_id,
                IndicatorKind.VISIBILITY_SECONDS,
                (times[k + 1] - times[k]) / 1000.0,
            )
        )
    return SynthScenario("continuous-scroller", seed, session, page, fragments, b.events, expected)


def _pointer_reader(rng: random.Random, seed: int) -> SynthScenario:
    """Sweeps the pointer along lines of text inside the fragment being read."""
    user_id, session_id, page_id = _ids("pointer-reader", seed)
    page = Webpage(page_id, f"https://news.example/articles/{page_id}", PageClass.DETAIL)
    fragments, rects = _stacked_fragments(page_id, 3)
    viewport = Rect(0.0, 0.0, 800.0, 600.0)
    f0 = fragments[0].fragment_id

    t0 = BASE_TIME
    b = _EventBuilder(session_id, page_id)
    b.add(t0, Scroll(viewport, rects))
    t_enter = t0 + rng.randint(200, 800)
    b.add(t_enter, MouseEnter(f0))

    sweeps = rng.randint(2, 6)
    t = t_enter
    for _ in range(sweeps):
        t += rng.randint(600, 2_000)  # pause between sweeps breaks the segment
        x = rng.uniform(50.0, 150.0)
        y_line = rng.uniform(100.0, 500.0)
        step = rng.uniform(25.0, 40.0)
        for _ in range(rng.randint(3, 6)):
            b.add(t, MouseMove(x, y_line))
            t += rng.randint(40, 90)
            x += step
    t_leave = t + rng.randint(300, 900)
    b.add(t_leave, MouseLeave(f0))

    session = SessionRecord(session_id, user_id, DESKTOP_UA, t0, page.url)
    expected = [
        _expect(session, page_id, f0, IndicatorKind.VISIBILITY_COUNT, 1),
        _expect(session, page_id, f0, IndicatorKind.VISIBILITY_SECONDS, (t_leave - t0) / 1000.0),
        _expect(session, page_id, f0, IndicatorKind.MOVE_IN_FRAGMENT, sweeps),
        _expect(session, page_id, f0, IndicatorKind.HORIZONTAL_MOVEMENT, sweeps),
        _expect(session, page_id, f0, IndicatorKind.MOUSE_OVER_FRAGMENT_COUNT, 1),
        _expect(
            session, page_id, f0, IndicatorKind.MOUSE_OVER_FRAGMENT_SECONDS, (t_leave - t_enter) / 1000.0
        ),
    ]
    return SynthScenario("pointer-reader", seed, session, page, fragments, b.events, expected)


def _same_y_parker(rng: random.Random, seed: int) -> SynthScenario:
    """Parks the pointer in the margin next to the text being read."""
    user_id, session_id, page_id = _ids("same-y-parker", seed)
    page = Webpage(page_id, f"https://news.example/articles/{page_id}", PageClass.DETAIL)
    # fragments narrower than the viewport leave a margin to park in
    fragments, rects = _stacked_fragments(page_id, 3, width=700.0)
    f0, f1 = fragments[0].fragment_id, fragments[1].fragment_id

    t0 = BASE_TIME
    b = _EventBuilder(session_id, page_id)
    b.add(t0, Scroll(Rect(0.0, 0.0, 800.0, 600.0), rects))
    t_park = t0 + rng.randint(500, 1_500)
    b.add(t_park, MouseMove(rng.uniform(720.0, 790.0), rng.uniform(100.0, 500.0)))
    t_scroll = t_park + rng.randint(4_000, 20_000)
    b.add(t_scroll, Scroll(Rect(0.0, 600.0, 800.0, 600.0), rects))
    t_end = t_scroll + rng.randint(4_000, 20_000)
    b.add(t_end, KeyUp(selection_present=False))

    session = SessionRecord(session_id, user_id, DESKTOP_UA, t0, page.url)
    expected = [
        _expect(session, page_id, f0, IndicatorKind.VISIBILITY_COUNT, 1),
        _expect(session, page_id, f0, IndicatorKind.VISIBILITY_SECONDS, (t_scroll - t0) / 1000.0),
        _expect(session, page_id, f0, IndicatorKind.MOUSE_ON_SAME_Y_COUNT, 1),
        _expect(session, page_id, f0, IndicatorKind.MOUSE_ON_SAME_Y_SECONDS, (t_scroll - t_park) / 1000.0),
        _expect(session, page_id, f1, IndicatorKind.VISIBILITY_COUNT, 1),
        _expect(session, page_id, f1, IndicatorKind.VISIBILITY_SECONDS, (t_end - t_scroll) / 1000.0),
        _expect(session, page_id, f1, IndicatorKind.MOUSE_ON_SAME_Y_COUNT, 1),
        _expect(session, page_id, f1, IndicatorKind.MOUSE_ON_SAME_Y_SECONDS, (t_end - t_scroll) / 1000.0),
    ]
    return SynthScenario("same-y-parker", seed, session, page, fragments, b.events, expected)


def _mobile_swiper(rng: random.Random, seed: int) -> SynthScenario:
    """Mobile reading: tap, swipe past content, pinch to zoom, rotate."""
    user_id, session_id, page_id = _ids("mobile-swiper", seed)
    page = Webpage(page_id, f"https://news.example/articles/{page_id}", PageClass.DETAIL)
    fragments = [Fragment(f"{page_id}-f{i}", page_id, None, f"div.fragment:{i}") for i in range(5)]
    fids = [f.fragment_id for f in fragments]
    # two columns up top, then full-width blocks below
    rects = {
        fids[0]: Rect(0.0, 0.0, 200.0, 600.0),
        fids[1]: Rect(200.0, 0.0, 200.0, 600.0),
        fids[2]: Rect(0.0, 600.0, 400.0, 600.0),
        fids[3]: Rect(0.0, 1200.0, 400.0, 600.0),
        fids[4]: Rect(0.0, 1800.0, 400.0, 600.0),
    }

    t0 = BASE_TIME
    b = _EventBuilder(session_id, page_id)
    b.add(t0, Scroll(Rect(0.0, 0.0, 400.0, 600.0), rects))

    t_tap = t0 + rng.randint(1_000, 8_000)
    b.add(t_tap, Contact(rng.uniform(20.0, 180.0), rng.uniform(50.0, 550.0), ContactKind.TAP))

    t_swipe = t_tap + rng.randint(1_000, 8_000)
    swipe_before = frozenset({fids[0], fids[1]})
    during_sets = [frozenset({fids[0], fids[1], fids[2]}), frozenset({fids[2], fids[3]})]
    swipe_after = frozenset({fids[3]})
    b.add(t_swipe, SwipePhase(SwipePhaseKind.START, swipe_before))
    t = t_swipe
    for during in during_sets:
        t += rng.randint(80, 200)
        b.add(t, SwipePhase(SwipePhaseKind.DURING, during))
    t += rng.randint(80, 200)
    b.add(t, SwipePhase(SwipePhaseKind.END, swipe_after))
    t_landed = t + rng.randint(50, 150)
    b.add(t_landed, Scroll(Rect(0.0, 1200.0, 400.0, 600.0), rects))

    t_pinch = t_landed + rng.randint(1_000, 6_000)
    b.add(t_pinch, Pinch(rng.uniform(1.5, 2.5), Rect(0.0, 1200.0, 400.0, 300.0), rects))

    t_land = t_pinch + rng.randint(1_000, 6_000)
    b.add(t_land, Orientation(OrientationKind.LANDSCAPE, frozenset({fids[3]})))
    t_port = t_land + rng.randint(1_000, 6_000)
    b.add(t_port, Orientation(OrientationKind.PORTRAIT, frozenset({fids[3]})))
    t_end = t_port + rng.randint(1_000, 6_000)
    b.add(t_end, Scroll(Rect(0.0, 1200.0, 400.0, 300.0), rects))

    # skipped fragments fall out of plain set algebra on the constructed sets
    during_union = frozenset().union(*during_sets)
    skipped = during_union - (swipe_before | swipe_after)

    session = SessionRecord(session_id, user_id, MOBILE_UA, t0, page.url)
    top_seconds = (t_landed - t0) / 1000.0
    expected = [
        _expect(session, page_id, fids[0], IndicatorKind.VISIBILITY_COUNT, 1),
        _expect(session, page_id, fids[0], IndicatorKind.VISIBILITY_SECONDS, top_seconds),
        _expect(session, page_id, fids[1], IndicatorKind.VISIBILITY_COUNT, 1),
        _expect(session, page_id, fids[1], IndicatorKind.VISIBILITY_SECONDS, top_seconds),
        _expect(session, page_id, fids[3], IndicatorKind.VISIBILITY_COUNT, 1),
        _expect(session, page_id, fids[3], IndicatorKind.VISIBILITY_SECONDS, (t_end - t_landed) / 1000.0),
        _expect(session, page_id, fids[0], IndicatorKind.CONTACT_IN_FRAGMENT, 1),
        _expect(session, page_id, fids[1], IndicatorKind.CONTACT_ON_SAME_Y_COUNT, 1),
        _expect(session, page_id, fids[3], IndicatorKind.ZOOM_COUNT, 1),
        _expect(session, page_id, fids[3], IndicatorKind.ORIENTATION_CHANGE_LANDSCAPE, 1),
        _expect(session, page_id, fids[3], IndicatorKind.ORIENTATION_CHANGE_PORTRAIT, 1),
    ]
    for fid in sorted(swipe_before):
        expected.append(_expect(session, page_id, fid, IndicatorKind.SWIPE_VISIBLE_BEFORE, 1))
    for fid in sorted(swipe_after):
        expected.append(_expect(session, page_id, fid, IndicatorKind.SWIPE_VISIBLE_AFTER, 1))
    for fid in sorted(skipped):
        expected.append(_expect(session, page_id, fid, IndicatorKind.SWIPE_SKIPPED, 1))
    return SynthScenario("mobile-swiper", seed, session, page, fragments, b.events, expected)


def scenario_records(scenarios: list[SynthScenario]) -> list[dict]:
    out: list[dict] = []
    for scenario in scenarios:
        out.extend(scenario.records())
    return out


def write_scenario_log(scenario: SynthScenario, path: str | Path) -> None:
    from .eventlog import write_log

    write_log(path, scenario.records())


def synthesize_study(seed: int) -> list[dict]:
    """A small self-contained study log: articles, sessions, ratings.

    One desktop reader's dwell time is built to scale linearly with their
    ratings on both the detail pages and the overview teasers, so the
    downstream correlation and prediction tables have a fully determined
    shape. A mobile reader with too few rated articles rides along to
    exercise the guards.
    """
    rng = random.Random(f"study:{seed}")
    records: list[dict] = []

    likerts = [1, 3, 4, 6, 7]
    rng.shuffle(likerts)
    n_articles = len(likerts)
    reader = f"u-study-{seed}"

    overview = Webpage(f"p-study-{seed}-overview", "https://news.example/overview", PageClass.OVERVIEW)
    teasers = [
        Fragment(f"{overview.page_id}-t{k}", overview.page_id, None, f"div.teaser:{k}")
        for k in range(n_articles)
    ]
    teaser_rects = {
        t.fragment_id: Rect(0.0, k * 600.0, 800.0, 600.0) for k, t in enumerate(teasers)
    }
    records.append(page_to_dict(overview))
    records.extend(fragment_to_dict(t) for t in teasers)

    details = []
    for k in range(n_articles):
        page = Webpage(f"p-study-{seed}-a{k}", f"https://news.example/articles/{k}", PageClass.DETAIL)
        fragments, rects = _stacked_fragments(page.page_id, 3)
        details.append((page, fragments, rects))
        records.append(page_to_dict(page))
        records.extend(fragment_to_dict(f) for f in fragments)
        records.append(
            content_to_dict(
                ContentItem(f"c-study-{seed}-{k}", page.page_id, teasers[k].fragment_id)
            )
        )

    # overview session: teaser k stays on screen for a rating-scaled beat
    t = BASE_TIME
    ov_session = SessionRecord(f"s-study-{seed}-overview", reader, DESKTOP_UA, t, overview.url)
    records.append(session_record_to_dict(ov_session))
    b = _EventBuilder(ov_session.session_id, overview.page_id)
    for k in range(n_articles + 1):
        b.add(t, Scroll(Rect(0.0, k * 600.0, 800.0, 600.0), teaser_rects))
        t += 2_000 + 300 * likerts[min(k, n_articles - 1)]
    records.extend(event_to_dict(ev) for ev in b.events)

    # detail sessions: total dwell is affine in the rating
    for k, (page, fragments, rects) in enumerate(details):
        t = BASE_TIME + 1_000_000 * (k + 1)
        session = SessionRecord(f"s-study-{seed}-a{k}", reader, DESKTOP_UA, t, page.url)
        records.append(session_record_to_dict(session))
        b = _EventBuilder(session.session_id, page.page_id)
        dt = 3_000 + 800 * likerts[k]
        for step in range(len(fragments) + 1):
            b.add(t, Scroll(Rect(0.0, step * 600.0, 800.0, 600.0), rects))
            t += dt
        records.extend(event_to_dict(ev) for ev in b.events)

    for k, likert in enumerate(likerts):
        records.append(rating_to_dict(ExplicitRating(reader, f"c-study-{seed}-{k}", True, likert)))

    # mobile rider: real sessions but only two rated articles, below the n >= 3 bar
    for k in range(2):
        scenario = synthesize("mobile-swiper", seed * 100 + k, user_id=f"u-study-{seed}-mobile")
        records.extend(scenario.records())
        records.append(
            content_to_dict(ContentItem(f"c-study-{seed}-m{k}", scenario.page.page_id, None))
        )
        records.append(
            rating_to_dict(
                ExplicitRating(f"u-study-{seed}-mobile", f"c-study-{seed}-m{k}", True, 3 + k)
            )
        )
    return records
