"""Sensor event records: parsing, an append-only log, and evidence mapping.

Event files are delimited text with the header::

    ID,Sound_Detected,Activity_Level,Relative_Humidity,Temperature_C,Event_Time,Date

``null`` (or an empty cell) marks an absent sound or activity. Dates are ISO
``2017-04-08``; the legacy device export form ``Apr 08 2017`` is accepted on
import and normalised. Tab-delimited files and the ``Temperature_°C`` column
spelling are accepted as well.
"""

from __future__ import annotations

import csv
import io
import logging
import threading
from dataclasses import dataclass, field
from datetime import date, datetime, time
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping, TextIO, Union

import yaml

from respmon import resources
from respmon.knowledge_base import ObservationSet

logger = logging.getLogger(__name__)

HEADER = (
    "ID",
    "Sound_Detected",
    "Activity_Level",
    "Relative_Humidity",
    "Temperature_C",
    "Event_Time",
    "Date",
)
_HEADER_ALIASES = {"Temperature_°C": "Temperature_C"}
NULL = "null"

TEMP_RANGE = (-40.0, 60.0)
HUMIDITY_RANGE = (0.0, 100.0)

SOUND_ATOMS = {
    "cough": "cgh",
    "wheeze": "whz",
    "stridor": "str",
    "sneeze": "snz",
    "snuffle": "snf",
}
LOW_TEMPERATURE = "lt"
LOW_HUMIDITY = "lh"
VIGOROUS_EXERCISE = "vgr"


class EventStoreError(Exception):
    pass


class HeaderMismatchError(EventStoreError):
    pass


class RecordError(ValueError):
    pass


class ActivityLevel(str, Enum):
    SEDENTARY = "Sedentary"
    MODERATE = "Moderate"
    VIGOROUS = "Vigorous"

    @classmethod
    def parse(cls, text: str) -> "ActivityLevel":
        for level in cls:
            if level.value.lower() == text.strip().lower():
                return level
        raise RecordError(f"unknown activity level {text!r}")


@dataclass(frozen=True)
class SensorRecord:
    id: int
    sound_detected: str | None
    activity_level: ActivityLevel | None
    relative_humidity: float
    temperature_c: float
    event_time: time
    date: date

    def __post_init__(self) -> None:
        lo, hi = HUMIDITY_RANGE
        if not lo <= self.relative_humidity <= hi:
            raise RecordError(f"relative humidity {self.relative_humidity} outside [{lo:g}, {hi:g}]")
        lo, hi = TEMP_RANGE
        if not lo <= self.temperature_c <= hi:
            raise RecordError(f"temperature {self.temperature_c} outside [{lo:g}, {hi:g}]")

    @property
    def timestamp(self) -> datetime:
        return datetime.combine(self.date, self.event_time)

    @property
    def sort_key(self) -> tuple[date, time, int]:
        return (self.date, self.event_time, self.id)


@dataclass(frozen=True)
class MappingThresholds:
    """Cutoffs that turn ambient readings and activity into trigger atoms."""

    low_temp_c: float = 15.0
    low_humidity_pct: float = 40.0
    vigorous_levels: frozenset[str] = frozenset({ActivityLevel.VIGOROUS.value})

    def __post_init__(self) -> None:
        if not TEMP_RANGE[0] <= self.low_temp_c <= TEMP_RANGE[1]:
            raise ValueError(f"low_temp_c={self.low_temp_c} outside sanity band {TEMP_RANGE}")
        if not HUMIDITY_RANGE[0] <= self.low_humidity_pct <= HUMIDITY_RANGE[1]:
            raise ValueError(f"low_humidity_pct={self.low_humidity_pct} outside {HUMIDITY_RANGE}")
        levels = frozenset(ActivityLevel.parse(str(v)).value for v in self.vigorous_levels)
        object.__setattr__(self, "vigorous_levels", levels)


def load_thresholds(source: Union[str, Path, Mapping[str, Any], None] = None) -> MappingThresholds:
    if source is None:
        return MappingThresholds()
    if isinstance(source, Mapping):
        doc = source
    else:
        doc = yaml.safe_load(resources.resolve(source).read_text(encoding="utf-8")) or {}
    kwargs: dict[str, Any] = {}
    for key in ("low_temp_c", "low_humidity_pct"):
        if key in doc:
            kwargs[key] = float(doc[key])
    if "vigorous_levels" in doc:
        kwargs["vigorous_levels"] = frozenset(doc["vigorous_levels"])
    return MappingThresholds(**kwargs)


@dataclass(frozen=True)
class EventWindow:
    records: tuple[SensorRecord, ...]
    span: tuple[datetime, datetime]

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[SensorRecord]:
        return iter(self.records)

    @classmethod
    def from_records(
        cls, records: Iterable[SensorRecord], span: tuple[datetime, datetime] | None = None
    ) -> "EventWindow":
        ordered = tuple(sorted(records, key=lambda r: r.sort_key))
        if span is None:
            if ordered:
                span = (ordered[0].timestamp, ordered[-1].timestamp)
            else:
                span = (datetime.min, datetime.min)
        return cls(ordered, span)


@dataclass
class RowError:
    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


@dataclass
class IngestResult:
    appended: int = 0
    errors: list[RowError] = field(default_factory=list)

    def __int__(self) -> int:
        return self.appended

    def summary(self) -> str:
        text = f"{self.appended} record(s) appended, {len(self.errors)} row(s) rejected"
        return "\n".join([text, *(f"  {e}" for e in self.errors)])


# -- text format -------------------------------------------------------------


def _parse_date(text: str) -> date:
    text = text.strip()
    for fmt in ("%Y-%m-%d", "%b %d %Y"):
        try:
            return datetime.strptime(text, fmt).date()
        except ValueError:
            pass
    raise RecordError(f"unrecognised date {text!r}")


def _parse_time(text: str) -> time:
    try:
        return time.fromisoformat(text.strip())
    except ValueError:
        raise RecordError(f"unrecognised time {text!r}") from None


def _optional(text: str) -> str | None:
    text = text.strip()
    return None if not text or text.lower() == NULL else text


def _number(name: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise RecordError(f"{name} is not a number: {text!r}") from None


def parse_row(row: list[str]) -> SensorRecord:
    if len(row) != len(HEADER):
        raise RecordError(f"expected {len(HEADER)} fields, got {len(row)}")
    rid, sound, activity, hum, temp, etime, edate = row
    try:
        record_id = int(rid)
    except ValueError:
        raise RecordError(f"ID is not an integer: {rid!r}") from None
    level = _optional(activity)
    return SensorRecord(
        id=record_id,
        sound_detected=_optional(sound),
        activity_level=ActivityLevel.parse(level) if level else None,
        relative_humidity=_number("Relative_Humidity", hum),
        temperature_c=_number("Temperature_C", temp),
        event_time=_parse_time(etime),
        date=_parse_date(edate),
    )


def format_row(r: SensorRecord) -> list[str]:
    return [
        str(r.id),
        r.sound_detected if r.sound_detected is not None else NULL,
        r.activity_level.value if r.activity_level is not None else NULL,
        repr(r.relative_humidity),
        repr(r.temperature_c),
        r.event_time.isoformat(),
        r.date.isoformat(),
    ]


def _check_header(fields: list[str]) -> None:
    normalised = [_HEADER_ALIASES.get(f.strip(), f.strip()) for f in fields]
    if tuple(normalised) != HEADER:
        raise HeaderMismatchError(f"header {fields!r} does not match {','.join(HEADER)}")


def read_events(stream: TextIO) -> tuple[list[SensorRecord], list[RowError]]:
    """Parse an event file, collecting per-line errors instead of raising."""
    lines = stream.read().splitlines()
    if not lines or not lines[0].strip():
        raise HeaderMismatchError("missing header line")
    delimiter = "\t" if "\t" in lines[0] else ","
    reader = csv.reader(lines, delimiter=delimiter)
    _check_header(next(reader))
    records: list[SensorRecord] = []
    errors: list[RowError] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            records.append(parse_row(row))
        except RecordError as exc:
            errors.append(RowError(lineno, str(exc)))
    return records, errors


def write_events(records: Iterable[SensorRecord], stream: TextIO, header: bool = True) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    if header:
        writer.writerow(HEADER)
    for r in records:
        writer.writerow(format_row(r))


def events_to_text(records: Iterable[SensorRecord]) -> str:
    buf = io.StringIO()
    write_events(records, buf)
    return buf.getvalue()


# -- store -------------------------------------------------------------------


class EventStore:
    """Append-only event log with an in-memory index by date.

    With ``path=None`` the store lives in memory only. Otherwise rows are
    appended to a newline-delimited log at ``path`` (created with a header if
    missing) and any existing log is loaded on construction. One writer at a
    time; readers get a snapshot copied under the lock.
    """

    def __init__(self, path: Union[str, Path, None] = None):
        self.path = Path(path) if path is not None else None
        self._lock = threading.Lock()
        self._by_date: dict[date, list[SensorRecord]] = {}
        self._ids: set[int] = set()
        if self.path is not None and self.path.exists() and self.path.stat().st_size:
            with self.path.open(encoding="utf-8") as fh:
                records, errors = read_events(fh)
            for e in errors:
                logger.warning("%s: %s", self.path, e)
            for r in records:
                self._index(r)

    def __len__(self) -> int:
        return len(self._ids)

    def _index(self, r: SensorRecord) -> None:
        self._ids.add(r.id)
        self._by_date.setdefault(r.date, []).append(r)

    def append(self, record: SensorRecord) -> None:
        with self._lock:
            if record.id in self._ids:
                raise RecordError(f"duplicate record id {record.id}")
            if self.path is not None:
                new = not self.path.exists() or self.path.stat().st_size == 0
                with self.path.open("a", encoding="utf-8", newline="") as fh:
                    write_events([record], fh, header=new)
            self._index(record)

    def ingest(self, source: Union[str, Path, TextIO]) -> IngestResult:
        """Append every valid row of an event file; bad rows are reported and skipped."""
        if isinstance(source, (str, Path)):
            with open(source, encoding="utf-8", newline="") as fh:
                records, errors = read_events(fh)
        else:
            records, errors = read_events(source)
        result = IngestResult(errors=errors)
        for r in records:
            try:
                self.append(r)
            except RecordError as exc:
                result.errors.append(RowError(-1, f"ID {r.id}: {exc}"))
            else:
                result.appended += 1
        for e in result.errors:
            logger.warning("rejected row %s", e)
        return result

    def dates(self) -> list[date]:
        with self._lock:
            return sorted(self._by_date)

    def records(self) -> list[SensorRecord]:
        with self._lock:
            out = [r for rows in self._by_date.values() for r in rows]
        return sorted(out, key=lambda r: r.sort_key)

    def query_window(
        self, day: date, start: time | None = None, end: time | None = None
    ) -> EventWindow:
        """Records of ``day``, optionally limited to ``start <= event_time <= end``."""
        lo = start or time.min
        hi = end or time.max
        with self._lock:
            rows = list(self._by_date.get(day, ()))
        picked = [r for r in rows if lo <= r.event_time <= hi]
        return EventWindow.from_records(picked, (datetime.combine(day, lo), datetime.combine(day, hi)))


def query_window(
    store: EventStore, day: date, start: time | None = None, end: time | None = None
) -> EventWindow:
    return store.query_window(day, start, end)


# -- evidence mapping --------------------------------------------------------


def map_record(r: SensorRecord, th: MappingThresholds = MappingThresholds()) -> frozenset[str]:
    atoms: set[str] = set()
    if r.sound_detected is not None:
        atom = SOUND_ATOMS.get(r.sound_detected.strip().lower())
        if atom is None:
            logger.warning("record %d: unknown sound label %r ignored", r.id, r.sound_detected)
        else:
            atoms.add(atom)
    if r.activity_level is not None and r.activity_level.value in th.vigorous_levels:
        atoms.add(VIGOROUS_EXERCISE)
    if r.temperature_c < th.low_temp_c:
        atoms.add(LOW_TEMPERATURE)
    if r.relative_humidity < th.low_humidity_pct:
        atoms.add(LOW_HUMIDITY)
    return frozenset(atoms)


def build_observation_set(w: EventWindow, th: MappingThresholds = MappingThresholds()) -> ObservationSet:
    atoms: set[str] = set()
    for r in w.records:
        atoms |= map_record(r, th)
    return ObservationSet(frozenset(atoms), w.span)
