# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Ranking suspected conditions
#
# The default knowledge base holds five exercise-related respiratory
# conditions. Observing wheeze, cough, low temperature, low humidity and
# vigorous exercise suspects all of them.

from respmon.inference import PatientProfile, infer_observations, render_text
from respmon.knowledge_base import (
    ObservationSet,
    certainty_weight,
    default_kb,
    gamma_theta,
    participation_ratios,
    suspected_conditions,
)

kb = default_kb()
q = ObservationSet.of("whz", "cgh", "lt", "lh", "vgr")
beta = suspected_conditions(kb, q)
print(sorted(beta))

# Each observed atom counts once for every suspected condition that lists it.

ratios = participation_ratios(kb, beta, q)
for atom, r in ratios.items():
    print(f"{kb.atoms[atom].display_name:<18} {r}")

# Symptom and trigger maxima per condition, then the normalised weight.

for cid in sorted(beta):
    g, t = gamma_theta(kb, cid, ratios, q)
    print(f"{cid:<5} gamma={g:.2f} theta={t:.2f} W={certainty_weight(g, t):.4f}")

# The full report: EIR has no observed symptom and is excluded; EIA and EIB tie.

report = infer_observations(kb, q)
print(render_text(report.to_dict()))

# A declared asthma diagnosis separates the tied pair.

print(infer_observations(kb, q, profile=PatientProfile(diagnosed_conditions=frozenset({"asthma"}))).phi)
print(infer_observations(kb, q, profile=PatientProfile(asthmatic=False)).phi)
