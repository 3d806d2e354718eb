"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Oracles live in tests/oracles.py and reimplement the checked math
independently of the library.
"""
import itertools
import random
import time
from fractions import Fraction

import numpy as np
import pytest
from fastapi.testclient import TestClient

from oracles import (
    activity_intervals_oracle,
    pearson_oracle,
    t_sf_quadrature_oracle,
    visibility_seconds_ms_oracle,
    weighted_average_oracle,
)

from readlens.analysis import analyze_store
from readlens.eventlog import read_log, write_log
from readlens.indicators import IndicatorConfig, derive_session_indicators
from readlens.indicators.touch import derive_swipe
from readlens.model import (
    DURATION_KINDS,
    DeviceClass,
    ExplicitRating,
    IndicatorKind,
    KeyUp,
    PageClass,
    RawEvent,
    Session,
    SwipePhase,
    SwipePhaseKind,
    format_unit,
    kinds_for_device,
    likert_to_unit,
)
from readlens.replay import replay
from readlens.reports import write_all_reports
from readlens.service import classify_device, create_app, push_log_over_http
from readlens.stats import (
    ModelTerm,
    UserModel,
    aggregate_table,
    build_user_model,
    p_two_tailed,
    pearson_r,
    predict_interest,
    user_correlations,
)
from readlens.store import Store
from readlens.synth import ARCHETYPES, synthesize, synthesize_study
from readlens.timeline import build_timeline, segment_activity

SEEDS = range(50)


class Budget:
    def __init__(self, name: str, seconds: float):
        self.name = name
        self.seconds = seconds

    def __enter__(self):
        self.start = time.monotonic()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.monotonic() - self.start
        status = "PASS" if exc_type is None else "FAIL"
        print(f"[{status}] {self.name} ({elapsed:.2f}s)")
        if exc_type is None:
            assert elapsed < self.seconds, f"{self.name} exceeded {self.seconds}s budget: {elapsed:.2f}s"
        return False


@pytest.fixture(scope="module")
def archetype_runs():
    """Engine output for every archetype x seed, shared by A4 and A7."""
    runs = []
    for archetype in ARCHETYPES:
        for seed in SEEDS:
            scenario = synthesize(archetype, seed)
            rec = scenario.session
            session = Session(
                rec.session_id,
                rec.user_id,
                classify_device(rec.user_agent),
                rec.user_agent,
                rec.started_at,
            )
            timeline = build_timeline(scenario.events)
            values = derive_session_indicators(
                session, scenario.page.page_id, timeline, scenario.fragments, IndicatorConfig()
            )
            runs.append((scenario, session, timeline, values))
    return runs


def test_a1_likert_mapping_fidelity():
    with Budget("A1 likert mapping fidelity", 1.0):
        for likert, presented in [(3, "0.33"), (2, "0.17"), (5, "0.67"), (6, "0.83"), (7, "1.00")]:
            assert format_unit(likert_to_unit(likert)) == presented
        assert likert_to_unit(1) == 0.0


def test_a2_weighted_average_oracle():
    with Budget("A2 prediction vs weighted-average oracle", 5.0):
        rng = random.Random(20240)
        kinds = list(IndicatorKind)
        for _ in range(1000):
            n_terms = rng.randint(1, 10)
            picks = rng.sample(kinds, n_terms)
            terms = []
            values = {}
            raw = {}
            for kind in picks:
                v_min = rng.uniform(0, 5)
                v_max = v_min + rng.uniform(0.5, 10)
                corr = rng.uniform(1e-3, 1.0)
                terms.append(ModelTerm(kind, PageClass.DETAIL, corr, v_min, v_max))
                v_orig = rng.uniform(v_min, v_max)
                values[(kind, PageClass.DETAIL)] = v_orig
                raw[kind] = (v_orig, v_min, v_max, corr)
            model = UserModel("u", tuple(terms))
            got = predict_interest(model, "c", values).predicted
            oracle = weighted_average_oracle(
                [(v - lo) / (hi - lo) for v, lo, hi, _ in raw.values()],
                [w for *_, w in raw.values()],
            )
            assert abs(got - oracle) < 1e-12
            assert 0.0 <= got <= 1.0
            # exact invariance under rational weight rescaling
            scale = Fraction(rng.randint(1, 7), rng.randint(1, 7))
            scaled = tuple(
                ModelTerm(t.kind, t.page_class, Fraction(t.corr) * scale, t.v_min, t.v_max)
                for t in terms
            )
            assert predict_interest(UserModel("u", scaled), "c", values).predicted == got


def test_a3_pearson_and_significance_oracle():
    with Budget("A3 Pearson r and p-value oracles", 10.0):
        rng = random.Random(777)
        for _ in range(1000):
            n = rng.randint(2, 50)
            xs = [rng.uniform(-100, 100) for _ in range(n)]
            ys = [rng.uniform(-100, 100) for _ in range(n)]
            if len(set(xs)) < 2 or len(set(ys)) < 2:
                continue
            assert abs(pearson_r(xs, ys) - pearson_oracle(xs, ys)) < 1e-12
        import math

        for _ in range(300):
            n = rng.randint(3, 60)
            r = rng.uniform(-0.999, 0.999)
            t = r * math.sqrt((n - 2) / (1 - r * r))
            oracle_p = 2 * t_sf_quadrature_oracle(t, n - 2)
            assert abs(p_two_tailed(r, n) - oracle_p) < 1e-6
        assert p_two_tailed(0.0, 10) == 1.0


def test_a4_engine_matches_ground_truth_and_ms_oracle(archetype_runs):
    with Budget("A4 indicator engine vs synthesizer truth + 1ms oracle", 60.0):
        for scenario, _session, timeline, values in archetype_runs:
            got = {(v.fragment_id, v.kind): v.value for v in values}
            expected = {(v.fragment_id, v.kind): v.value for v in scenario.expected}
            assert set(got) == set(expected), (scenario.archetype, scenario.seed)
            for key, expected_value in expected.items():
                if key[1] in DURATION_KINDS:
                    assert abs(got[key] - expected_value) <= 0.002, (scenario.archetype, scenario.seed, key)
                else:
                    assert got[key] == expected_value, (scenario.archetype, scenario.seed, key)
            if len(timeline) <= 100:
                oracle_seconds = visibility_seconds_ms_oracle(timeline)
                for fid, secs in oracle_seconds.items():
                    engine_secs = got.get((fid, IndicatorKind.VISIBILITY_SECONDS), 0.0)
                    assert abs(engine_secs - secs) <= 0.002, (scenario.archetype, scenario.seed, fid)


def test_a5_active_passive_tiling():
    with Budget("A5 active/passive tiling property", 5.0):
        rng = random.Random(55)
        for _ in range(1000):
            n = rng.randint(1, 40)
            times = sorted(rng.randrange(0, 600_000) for _ in range(n))
            events = [RawEvent(f"e{i}", "s", "p", t, KeyUp(False)) for i, t in enumerate(times)]
            seg = segment_activity(events, delta_seconds=60)
            assert seg.total_active_ms() + seg.total_passive_ms() == times[-1] - times[0]
            expected_active, expected_passive = activity_intervals_oracle(times, 60_000)
            assert list(seg.active) == expected_active
            assert list(seg.passive) == expected_passive
            for s, e in seg.passive:
                assert e - s > 60_000
            boundary = {t for span in seg.active for t in span}
            for prev, nxt in zip(times, times[1:]):
                if nxt - prev > 60_000:
                    assert (prev, nxt) in set(seg.passive)


def test_a6_swipe_set_algebra_exhaustive():
    with Budget("A6 swipe set algebra, exhaustive 32^3", 10.0):
        fragment_ids = [f"f{i}" for i in range(5)]
        subsets = [
            frozenset(fid for i, fid in enumerate(fragment_ids) if mask >> i & 1)
            for mask in range(32)
        ]
        for b_set, d_set, a_set in itertools.product(subsets, repeat=3):
            events = [
                RawEvent("e0", "s", "p", 0, SwipePhase(SwipePhaseKind.START, b_set)),
                RawEvent("e1", "s", "p", 1, SwipePhase(SwipePhaseKind.DURING, d_set)),
                RawEvent("e2", "s", "p", 2, SwipePhase(SwipePhaseKind.END, a_set)),
            ]
            got = derive_swipe(events)
            skipped = {fid for fid, (_, _, s) in got.items() if s}
            before = {fid for fid, (b, _, _) in got.items() if b}
            after = {fid for fid, (_, a, _) in got.items() if a}
            assert skipped == d_set - (b_set | a_set)
            assert before == b_set
            assert after == a_set
            assert not skipped & (b_set | a_set)
            assert skipped <= d_set


def test_a7_device_class_contract(archetype_runs):
    with Budget("A7 device-class kind conformance", 5.0):
        for scenario, session, _timeline, values in archetype_runs:
            allowed = kinds_for_device(session.device_class)
            produced = {v.kind for v in values}
            assert produced <= allowed, (scenario.archetype, session.device_class, produced - allowed)
        devices = {s.device_class for _, s, _, _ in archetype_runs}
        assert devices == {DeviceClass.DESKTOP, DeviceClass.MOBILE}


def test_a8_replay_live_equivalence(tmp_path):
    with Budget("A8 replay/live equivalence", 30.0):
        log = tmp_path / "study.jsonl"
        records = synthesize_study(17)
        for archetype in ARCHETYPES:
            records.extend(synthesize(archetype, 17).records())
        write_log(log, records)

        live_store = Store(tmp_path / "live.db")
        client = TestClient(create_app(live_store))
        doc = read_log(log)
        accepted = push_log_over_http(doc, client, batch_max=50)
        assert accepted == len(doc.events)
        for rating in doc.ratings:
            live_store.upsert_rating(rating)
        for content in doc.contents:
            live_store.upsert_content(content)
        live_result = analyze_store(live_store)
        live_dir = tmp_path / "live_reports"
        live_paths = write_all_reports(live_result, live_dir)

        replay_result = replay(log, store_path=tmp_path / "replay.db")
        replay_dir = tmp_path / "replay_reports"
        replay_paths = write_all_reports(replay_result, replay_dir)

        live_multiset = sorted((v.as_key(), float(v.value)) for v in live_result.indicator_values)
        replay_multiset = sorted((v.as_key(), float(v.value)) for v in replay_result.indicator_values)
        assert live_multiset == replay_multiset
        for kind in live_paths:
            assert live_paths[kind].read_bytes() == replay_paths[kind].read_bytes(), kind


def test_a9_end_to_end_ranking_sanity():
    with Budget("A9 affine user end-to-end ranking", 10.0):
        user = "u-affine"
        likerts = [1, 2, 3, 4, 5, 6, 7, 2, 5, 7]  # 10 articles, repeats included
        content_ids = [f"c{i}" for i in range(10)]
        ratings = [
            ExplicitRating(user, cid, True, likert) for cid, likert in zip(content_ids, likerts)
        ]
        kind = IndicatorKind.VISIBILITY_SECONDS
        table = {
            (user, kind, PageClass.DETAIL): {
                cid: 4.0 * likert + 2.0 for cid, likert in zip(content_ids, likerts)
            },
            (user, IndicatorKind.MOUSE_OVER_FRAGMENT_SECONDS, PageClass.DETAIL): {
                cid: 1.5 * likert + 0.25 for cid, likert in zip(content_ids, likerts)
            },
        }
        records = user_correlations(table, ratings)
        assert len(records) == 2
        for record in records:
            assert record.r == pytest.approx(1.0, abs=1e-12)
            assert record.p < 0.001
            assert record.n == 10

        model = build_user_model(user, records, table, content_ids)
        assert len(model.terms) == 2
        predictions = {
            cid: predict_interest(
                model,
                cid,
                {
                    (t.kind, t.page_class): table[(user, t.kind, t.page_class)].get(cid, 0.0)
                    for t in model.terms
                },
            ).predicted
            for cid in content_ids
        }
        from scipy.stats import spearmanr

        rho = spearmanr(likerts, [predictions[cid] for cid in content_ids]).statistic
        assert rho == pytest.approx(1.0, abs=1e-12)
        # ties in ratings stay ties in predictions
        assert predictions["c1"] == predictions["c7"]
        assert predictions["c4"] == predictions["c8"]


def test_a10_aggregate_table_shape():
    with Budget("A10 aggregate table shape", 1.0):
        from readlens.stats import CorrelationRecord

        rs = [0.15, 0.25, 0.45, 0.5, 0.65, 0.7, 0.85, 0.95]
        records = [
            CorrelationRecord(f"u{i}", IndicatorKind.VISIBILITY_COUNT, PageClass.DETAIL, r, 0.01, 5)
            for i, r in enumerate(rs)
        ]
        records.append(
            CorrelationRecord("u-ns", IndicatorKind.VISIBILITY_COUNT, PageClass.DETAIL, 0.99, 0.2, 5)
        )
        records.append(
            CorrelationRecord("u-ov", IndicatorKind.VISIBILITY_COUNT, PageClass.OVERVIEW, 0.3, 0.01, 5)
        )
        rows = aggregate_table(records, alpha=0.05)
        assert len(rows) == 2  # one per page class
        detail = next(r for r in rows if r.page_class is PageClass.DETAIL)
        assert detail.n_significant == 8
        assert sum(detail.buckets) == detail.n_significant
        assert detail.buckets == (1, 1, 2, 2, 2)
        assert detail.mean_r == pytest.approx(sum(rs) / len(rs))
        overview = next(r for r in rows if r.page_class is PageClass.OVERVIEW)
        assert overview.buckets == (0, 1, 0, 0, 0)
        for row in rows:
            assert len(row.buckets) == 5
            assert np.isfinite(row.mean_r)
