"""Cross-component conformance: traffic captured from the browser tracker SDK
must be accepted verbatim by the real ingestion service, and the derivation
pipeline must digest it.

The fixture is generated by `frontend/scripts/emit-batches.mjs`, which drives
the built SDK over a scripted three-fragment page (scroll, moves, click, tap,
a full swipe, pinch zoom, orientation change, selection, copy).
"""
import json
from pathlib import Path
from urllib.parse import urlparse

import pytest
from fastapi.testclient import TestClient

from readlens.analysis import analyze_store
from readlens.model import DeviceClass, IndicatorKind, kinds_for_device
from readlens.service import create_app
from readlens.store import Store

FIXTURE = Path(__file__).parent.parent / "frontend" / "tests" / "fixtures" / "tracker_traffic.json"


@pytest.fixture
def traffic():
    if not FIXTURE.exists():
        pytest.skip("tracker traffic fixture not generated (run frontend build + emit-batches)")
    return json.loads(FIXTURE.read_text())


def test_tracker_traffic_flows_through_the_real_service(traffic):
    store = Store(":memory:")
    client = TestClient(create_app(store))

    register = next(r for r in traffic if r["url"].endswith("/sessions"))
    batches = [r for r in traffic if "/events" in r["url"]]
    assert batches, "tracker produced no event batches"

    # pin the ids the tracker already stamped into its events
    body = dict(register["body"])
    body["session_id"] = "fixture-session"
    body["page_id"] = "fixture-page"
    resp = client.post("/sessions", json=body)
    assert resp.status_code == 201
    session_info = resp.json()
    assert session_info["device_class"] == "mobile"
    token = session_info["token"]

    total = 0
    for batch in batches:
        resp = client.post(
            urlparse(batch["url"]).path,
            json=batch["body"],
            headers={"Authorization": f"Bearer {token}"},
        )
        assert resp.status_code == 200, resp.text
        total += resp.json()["accepted"]
    assert total == sum(len(b["body"]["events"]) for b in batches)
    assert store.count_events() == total

    # the registry block delivered the fragments
    assert {f.fragment_id for f in store.fragments_for_page("fixture-page")} == {"f0", "f1", "f2"}

    result = analyze_store(store)
    by_key = {(v.fragment_id, v.kind): v.value for v in result.indicator_values}
    produced = {v.kind for v in result.indicator_values}
    assert produced <= kinds_for_device(DeviceClass.MOBILE)

    # the scripted interaction leaves a recognizable footprint
    assert by_key[("f0", IndicatorKind.CONTACT_IN_FRAGMENT)] == 2  # click + tap
    assert by_key[("f1", IndicatorKind.SWIPE_SKIPPED)] == 1
    assert by_key[("f0", IndicatorKind.SWIPE_VISIBLE_BEFORE)] == 1
    assert by_key[("f2", IndicatorKind.SWIPE_VISIBLE_AFTER)] == 1
    assert by_key[("f2", IndicatorKind.ZOOM_COUNT)] == 1
    assert by_key[("f2", IndicatorKind.ORIENTATION_CHANGE_PORTRAIT)] == 1
    assert by_key[("f2", IndicatorKind.SELECT_COUNT)] == 1
    assert by_key[("f2", IndicatorKind.CUT_COPY_COUNT)] == 1
    assert by_key[("f0", IndicatorKind.VISIBILITY_COUNT)] == 1
    assert by_key[("f2", IndicatorKind.VISIBILITY_COUNT)] == 1
