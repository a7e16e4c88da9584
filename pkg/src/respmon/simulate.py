"""Reproducible synthetic event streams for monitoring scenarios."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from pathlib import Path
from typing import Any, Mapping, Union

import yaml

from respmon import resources
from respmon.event_store import ActivityLevel, SensorRecord, events_to_text


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class AmbientProfile:
    base_temp_c: float = 27.0
    base_humidity_pct: float = 80.0
    temp_drift_per_min: float = 0.0
    humidity_drift_per_min: float = 0.0
    temp_noise: float = 0.0
    humidity_noise: float = 0.0


@dataclass(frozen=True)
class ScenarioConfig:
    """A monitoring session to synthesise.

    Offsets are minutes from ``start``. ``symptom_script`` pins sounds to
    offsets; ``symptom_rates`` adds random sounds at the given expected count
    per minute, only while the activity level is in ``rate_levels`` (any level
    when that is empty).
    """

    duration: float
    start: datetime = datetime(2017, 4, 8, 6, 0, 0)
    sample_seconds: float = 5.0
    first_id: int = 1
    activity_schedule: tuple[tuple[float, ActivityLevel], ...] = ()
    ambient_profile: AmbientProfile = AmbientProfile()
    symptom_script: tuple[tuple[float, str], ...] = ()
    symptom_rates: Mapping[str, float] = field(default_factory=dict)
    rate_levels: frozenset[ActivityLevel] = frozenset()
    seed: int = 0

    def __post_init__(self) -> None:
        if self.duration < 0:
            raise ScenarioError("duration must be non-negative")
        if self.sample_seconds <= 0:
            raise ScenarioError("sample_seconds must be positive")
        for what, entries in (("activity", self.activity_schedule), ("symptom", self.symptom_script)):
            for offset, _ in entries:
                if not 0 <= offset <= self.duration:
                    raise ScenarioError(f"{what} offset {offset} outside [0, {self.duration}] minutes")
        for label, rate in self.symptom_rates.items():
            if rate < 0:
                raise ScenarioError(f"negative rate for {label}")


def parse_scenario(doc: Mapping[str, Any]) -> ScenarioConfig:
    try:
        start = doc.get("start", ScenarioConfig.__dataclass_fields__["start"].default)
        if isinstance(start, str):
            start = datetime.fromisoformat(start)
        return ScenarioConfig(
            duration=float(doc["duration"]),
            start=start,
            sample_seconds=float(doc.get("sample_seconds", 5.0)),
            first_id=int(doc.get("first_id", 1)),
            activity_schedule=tuple(
                (float(off), ActivityLevel.parse(str(level)))
                for off, level in doc.get("activity_schedule") or []
            ),
            ambient_profile=AmbientProfile(**(doc.get("ambient_profile") or {})),
            symptom_script=tuple((float(off), str(s)) for off, s in doc.get("symptom_script") or []),
            symptom_rates={str(k): float(v) for k, v in (doc.get("symptom_rates") or {}).items()},
            rate_levels=frozenset(ActivityLevel.parse(str(v)) for v in doc.get("rate_levels") or []),
            seed=int(doc.get("seed", 0)),
        )
    except ScenarioError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"malformed scenario: {exc!r}") from exc


def load_scenario(source: Union[str, Path, Mapping[str, Any]]) -> ScenarioConfig:
    if isinstance(source, Mapping):
        return parse_scenario(source)
    doc = yaml.safe_load(resources.resolve(source).read_text(encoding="utf-8")) or {}
    return parse_scenario(doc)


def _level_at(schedule, minute: float) -> ActivityLevel | None:
    level = None
    for offset, lvl in sorted(schedule, key=lambda e: e[0]):
        if offset <= minute:
            level = lvl
    return level


def generate_records(config: ScenarioConfig, seed: int | None = None) -> list[SensorRecord]:
    rng = random.Random(config.seed if seed is None else seed)
    step = config.sample_seconds
    n = math.ceil(config.duration * 60 / step)
    scripted: dict[int, str] = {}
    for offset, sound in config.symptom_script:
        scripted.setdefault(min(int(offset * 60 // step), max(n - 1, 0)), sound)
    amb = config.ambient_profile
    rate_labels = sorted(config.symptom_rates)
    records = []
    for k in range(n):
        minute = k * step / 60
        stamp = config.start + timedelta(seconds=k * step)
        level = _level_at(config.activity_schedule, minute)
        # fixed draw order per sample keeps the stream byte-stable
        temp_noise = rng.gauss(0.0, amb.temp_noise) if amb.temp_noise else 0.0
        hum_noise = rng.gauss(0.0, amb.humidity_noise) if amb.humidity_noise else 0.0
        draws = [rng.random() for _ in rate_labels]
        sound = scripted.get(k)
        if sound is None and (not config.rate_levels or level in config.rate_levels):
            for label, u in zip(rate_labels, draws):
                if u < config.symptom_rates[label] * step / 60:
                    sound = label
                    break
        temp = amb.base_temp_c + amb.temp_drift_per_min * minute + temp_noise
        hum = amb.base_humidity_pct + amb.humidity_drift_per_min * minute + hum_noise
        records.append(
            SensorRecord(
                id=config.first_id + k,
                sound_detected=sound,
                activity_level=level,
                relative_humidity=round(min(max(hum, 0.0), 100.0), 2),
                temperature_c=round(min(max(temp, -40.0), 60.0), 2),
                event_time=stamp.time(),
                date=stamp.date(),
            )
        )
    return records


def simulate(config: ScenarioConfig, seed: int | None = None) -> str:
    """Event-file text for ``config``; identical for identical (config, seed)."""
    return events_to_text(generate_records(config, seed))
