import sys
from datetime import date, datetime, timedelta
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from respmon.event_store import ActivityLevel, EventStore, SensorRecord, EventWindow  # noqa: E402
from respmon.knowledge_base import default_kb  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"
CAPTURE_DAY = date(2017, 4, 8)
SCENARIO_Q = frozenset({"whz", "cgh", "lt", "lh", "vgr"})


@pytest.fixture(scope="session")
def kb():
    return default_kb()


@pytest.fixture
def capture_path():
    return FIXTURES / "capture.csv"


@pytest.fixture
def capture_store(capture_path):
    store = EventStore()
    result = store.ingest(capture_path)
    assert result.appended == 10 and not result.errors
    return store


def make_record(rid, minute, sound=None, level=None, hum=80.0, temp=27.0, start=datetime(2017, 4, 8, 6, 0)):
    stamp = start + timedelta(minutes=minute)
    return SensorRecord(
        id=rid,
        sound_detected=sound,
        activity_level=ActivityLevel(level) if level else None,
        relative_humidity=hum,
        temperature_c=temp,
        event_time=stamp.time(),
        date=stamp.date(),
    )


def timeline(*events):
    """Window from (minute, sound, level) tuples."""
    return EventWindow.from_records(make_record(i + 1, m, s, lv) for i, (m, s, lv) in enumerate(events))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
