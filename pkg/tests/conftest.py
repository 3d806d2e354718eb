import pytest

from readlens.model import DeviceClass, RawEvent, Session


@pytest.fixture
def desktop_session() -> Session:
    return Session("s1", "u1", DeviceClass.DESKTOP, "Mozilla/5.0 (X11; Linux x86_64)", 0)


@pytest.fixture
def mobile_session() -> Session:
    return Session("s1", "u1", DeviceClass.MOBILE, "Mozilla/5.0 (Linux; Android 12) Mobile", 0)


@pytest.fixture
def make_event():
    counter = {"n": 0}

    def _make(t: int, kind, session_id: str = "s1", page_id: str = "p1") -> RawEvent:
        counter["n"] += 1
        return RawEvent(f"e{counter['n']:03d}", session_id, page_id, t, kind)

    return _make
