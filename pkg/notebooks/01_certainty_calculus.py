# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Certainty factors
#
# Belief and disbelief are measured relative to a prior; their difference is
# the certainty factor on [-1, 1].

from respmon.cf_calculus import (
    CFScale,
    PriorBelief,
    combine_all,
    combine_incremental,
    interpret_cf,
    propagate_conjunctive,
    propagate_disjunctive,
)

for h, he in [(0.2, 0.6), (0.5, 0.2), (0.3, 0.3)]:
    p = PriorBelief(h, he)
    print(f"P(H)={h:.1f} P(H|E)={he:.1f}  MB={p.belief():.3f} MD={p.disbelief():.3f} "
          f"CF={p.certainty():+.3f} ({interpret_cf(p.certainty())})")

# Evidence for the same conclusion accumulates but never passes 1.

acc = 0.0
for step in range(1, 8):
    acc = combine_incremental(acc, 0.3)
    print(step, round(acc, 4))

# Opposite-sign evidence uses the ratio rule.

print(combine_incremental(0.6, -0.4))
print(combine_all([0.5, 0.5, -0.2]))

# Premises: AND takes the weakest, OR the strongest.

print(propagate_conjunctive([0.5, 0.25]), propagate_disjunctive([0.5, 0.25]))

# The labelling bands are configurable.

for cf in (-1, -0.5, 0, 0.3, 1):
    print(cf, interpret_cf(cf), "|", interpret_cf(cf, CFScale(cutoff=0.4)))
