# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Event log and daily summaries
#
# Ten captured rows from a training morning, in the phone's export format.

from datetime import date
from pathlib import Path

from respmon.event_store import EventStore, MappingThresholds, build_observation_set
from respmon.summaries import summarize_activity, summarize_ambient, summarize_symptoms

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures" if "__file__" in globals() else Path("../fixtures")

store = EventStore()
result = store.ingest(FIXTURES / "capture.csv")
print(result.summary())
window = store.query_window(date(2017, 4, 8))

# Warm, humid air: no ambient triggers at the default cutoffs.

print(sorted(build_observation_set(window, MappingThresholds()).atoms))

# Chart data: symptom frequency per period, ambient series, activity intensity.

print(summarize_symptoms(window))
print(summarize_symptoms(window, "quarters"))
print(summarize_activity(window))
for t, temp, hum in summarize_ambient(window)[:3]:
    print(t, temp, hum)
