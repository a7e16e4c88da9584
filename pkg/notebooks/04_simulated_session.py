# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # A simulated training session with timing rules
#
# The bundled scenario is a cold, dry session with coughs during the effort
# and wheezes setting in several minutes into the vigorous block.

import io
from datetime import date

from respmon.event_store import EventStore
from respmon.inference import load_rules, render_text, run_inference
from respmon.knowledge_base import default_kb
from respmon.simulate import load_scenario, simulate

config = load_scenario("scenario/eib_training")
text = simulate(config, seed=7)
print(text.splitlines()[0])
print(len(text.splitlines()) - 1, "records")

store = EventStore()
store.ingest(io.StringIO(text))
window = store.query_window(date(2017, 4, 8))

# Without rules EIA and EIB tie at the top.

kb = default_kb()
print(render_text(run_inference(kb, window).to_dict()))

# The delayed-wheeze rule lifts EIB above EIA.

report = run_inference(kb, window, rules=load_rules("rules/default"))
print(render_text(report.to_dict()))
