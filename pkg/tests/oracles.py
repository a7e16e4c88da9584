"""Independent brute-force recomputations used as test oracles.

Nothing here imports the package's weighting code; KBs are plain dicts
``{condition: (symptoms, triggers)}`` and arithmetic is exact (Fraction).
"""

from __future__ import annotations

from fractions import Fraction


def brute_beta(conditions, q):
    beta = set()
    for cid, (sym, trg) in conditions.items():
        hit = False
        for atom in list(sym) + list(trg):
            for obs in q:
                if atom == obs:
                    hit = True
        if hit:
            beta.add(cid)
    return beta


def brute_ratios(conditions, beta, q):
    out = {}
    for obs in q:
        count = 0
        for cid in beta:
            sym, trg = conditions[cid]
            if obs in sym or obs in trg:
                count += 1
        if count:
            out[obs] = Fraction(1, count)
    return out


def brute_weight(gamma: Fraction, theta: Fraction) -> Fraction:
    s = gamma + theta
    denom = s if s > 1 - gamma * theta else 1 - gamma * theta
    return s / denom if denom else Fraction(0)


def brute_engine(conditions, q):
    """(beta, ratios, {cid: (gamma, theta, W)}) computed by exhaustive counting."""
    universe = set()
    for sym, trg in conditions.values():
        universe |= set(sym) | set(trg)
    q = {a for a in q if a in universe}
    beta = brute_beta(conditions, q)
    ratios = brute_ratios(conditions, beta, q)
    per = {}
    for cid in beta:
        sym, trg = conditions[cid]
        gamma = max([ratios[a] for a in q if a in sym], default=Fraction(0))
        theta = max([ratios[a] for a in q if a in trg], default=Fraction(0))
        per[cid] = (gamma, theta, brute_weight(gamma, theta))
    return beta, ratios, per
