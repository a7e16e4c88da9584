"""Daily chart data: symptom frequency, ambient series, activity intensity."""

from __future__ import annotations

import csv
from collections import Counter
from datetime import date, time
from pathlib import Path
from typing import Union

from respmon.event_store import EventWindow

# 6-hour periods for the coarse symptom chart
QUARTERS = (
    ("night", 0),
    ("morning", 6),
    ("afternoon", 12),
    ("evening", 18),
)
BUCKET_SCHEMES = ("hourly", "quarters")


def bucket_of(t: time, scheme: str = "hourly") -> str:
    if scheme == "hourly":
        return f"{t.hour:02d}:00"
    if scheme == "quarters":
        return QUARTERS[t.hour // 6][0]
    raise ValueError(f"unknown bucket scheme {scheme!r}; expected one of {BUCKET_SCHEMES}")


def _bucket_order(scheme: str) -> list[str]:
    if scheme == "hourly":
        return [f"{h:02d}:00" for h in range(24)]
    return [name for name, _ in QUARTERS]


def summarize_symptoms(window: EventWindow, bucketing: str = "hourly") -> dict[str, dict[str, int]]:
    """Count non-null sound labels per period; empty periods are left out."""
    counts: dict[str, Counter] = {}
    for r in window.records:
        if r.sound_detected is None:
            continue
        counts.setdefault(bucket_of(r.event_time, bucketing), Counter())[r.sound_detected] += 1
    return {b: dict(sorted(counts[b].items())) for b in _bucket_order(bucketing) if b in counts}


def summarize_ambient(window: EventWindow) -> list[tuple[time, float, float]]:
    records = sorted(window.records, key=lambda r: r.sort_key)
    return [(r.event_time, r.temperature_c, r.relative_humidity) for r in records]


def summarize_activity(window: EventWindow) -> dict[str, dict[str, int]]:
    counts: dict[str, Counter] = {}
    for r in window.records:
        if r.activity_level is None:
            continue
        counts.setdefault(f"{r.event_time.hour:02d}", Counter())[r.activity_level.value] += 1
    return {h: dict(sorted(counts[h].items())) for h in sorted(counts)}


def write_chart_data(
    window: EventWindow, day: date, out_dir: Union[str, Path], bucketing: str = "hourly"
) -> list[Path]:
    """Write the three chart-data CSVs for ``day`` and return their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stamp = day.isoformat()
    paths = [out / f"symptoms_{stamp}.csv", out / f"ambient_{stamp}.csv", out / f"activity_{stamp}.csv"]

    with paths[0].open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bucket", "label", "count"])
        for bucket, labels in summarize_symptoms(window, bucketing).items():
            for label, n in labels.items():
                w.writerow([bucket, label, n])

    with paths[1].open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time", "temp_c", "humidity_pct"])
        for t, temp, hum in summarize_ambient(window):
            w.writerow([t.isoformat(), repr(temp), repr(hum)])

    with paths[2].open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["hour", "level", "count"])
        for hour, levels in summarize_activity(window).items():
            for level, n in levels.items():
                w.writerow([hour, level, n])
    return paths
