"""Certainty-factor calculus.

Measures of belief and disbelief, the net certainty factor, and the
propagation/combination rules used to reason with them. Everything here is a
pure function of its arguments; values are plain floats and no rounding is
applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Belief = float
Disbelief = float
CertaintyValue = float

DEFINITELY_FALSE = "definitely false"
PROBABLY_FALSE = "probably false"
UNKNOWN = "unknown"
PROBABLY_TRUE = "probably true"
DEFINITELY_TRUE = "definitely true"


class CFError(ValueError):
    """Base class for calculus errors."""


class RangeViolation(CFError):
    pass


class DegenerateEvidenceError(CFError):
    """Raised when fully confirming and fully refuting evidence are combined."""


class EmptyPremiseError(CFError):
    pass


def _check_unit(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise RangeViolation(f"{name}={value!r} outside [0, 1]")
    return float(value)


def _check_cf(name: str, value: float) -> float:
    if not -1.0 <= value <= 1.0:
        raise RangeViolation(f"{name}={value!r} outside [-1, 1]")
    return float(value)


@dataclass(frozen=True)
class PriorBelief:
    """An expert's prior P(H) together with the conditional P(H|E)."""

    h: float
    he: float

    def __post_init__(self) -> None:
        _check_unit("h", self.h)
        _check_unit("he", self.he)

    def belief(self) -> Belief:
        return measure_of_belief(self.h, self.he)

    def disbelief(self) -> Disbelief:
        return measure_of_disbelief(self.h, self.he)

    def certainty(self) -> CertaintyValue:
        return certainty_factor(self.belief(), self.disbelief())


def measure_of_belief(h: float, he: float) -> Belief:
    """Increase in belief caused by evidence, relative to the prior ``h``."""
    h = _check_unit("h", h)
    he = _check_unit("he", he)
    if h == 1.0:
        return 1.0
    return (max(he, h) - h) / (1.0 - h)


def measure_of_disbelief(h: float, he: float) -> Disbelief:
    """Decrease in belief caused by evidence, relative to the prior ``h``."""
    h = _check_unit("h", h)
    he = _check_unit("he", he)
    if h == 0.0:
        return 1.0
    return (min(he, h) - h) / -h


def certainty_factor(b: Belief, d: Disbelief) -> CertaintyValue:
    return _check_unit("b", b) - _check_unit("d", d)


def combine_incremental(cf1: CertaintyValue, cf2: CertaintyValue) -> CertaintyValue:
    """Combine two certainty factors bearing on the same conclusion.

    Same-sign evidence accumulates asymptotically towards +/-1; opposite-sign
    evidence is merged with the ratio rule, which is undefined for the pair
    (+1, -1).
    """
    cf1 = _check_cf("cf1", cf1)
    cf2 = _check_cf("cf2", cf2)
    # symmetric forms: float results must commute exactly
    if cf1 >= 0 and cf2 >= 0:
        return min(1.0, cf1 + cf2 - cf1 * cf2)
    if cf1 < 0 and cf2 < 0:
        return max(-1.0, cf1 + cf2 + cf1 * cf2)
    denom = 1.0 - min(abs(cf1), abs(cf2))
    if denom == 0.0:
        raise DegenerateEvidenceError(
            f"cannot combine definitely-true and definitely-false evidence ({cf1}, {cf2})"
        )
    return (cf1 + cf2) / denom


def combine_all(cfs: Iterable[CertaintyValue], start: CertaintyValue = 0.0) -> CertaintyValue:
    """Fold :func:`combine_incremental` over ``cfs``."""
    acc = start
    for cf in cfs:
        acc = combine_incremental(acc, cf)
    return acc


def _nonempty(cfs: Sequence[CertaintyValue]) -> list[float]:
    values = [_check_cf("cf", v) for v in cfs]
    if not values:
        raise EmptyPremiseError("premise list is empty")
    return values


def propagate_conjunctive(cfs: Sequence[CertaintyValue]) -> CertaintyValue:
    """AND over premises: the weakest premise bounds the conclusion."""
    return min(_nonempty(cfs))


def propagate_disjunctive(cfs: Sequence[CertaintyValue]) -> CertaintyValue:
    """OR over premises: the strongest premise carries the conclusion."""
    return max(_nonempty(cfs))


@dataclass(frozen=True)
class CFScale:
    """Five-band labelling of the certainty scale.

    Only the exact endpoints are "definitely"; the interior is split at
    ``+/-cutoff``, with the cutoffs themselves belonging to the unknown band.
    """

    cutoff: float = 0.2

    def __post_init__(self) -> None:
        if not 0.0 < self.cutoff < 1.0:
            raise RangeViolation(f"cutoff={self.cutoff!r} must lie in (0, 1)")

    def label(self, cf: CertaintyValue) -> str:
        cf = _check_cf("cf", cf)
        if cf == -1.0:
            return DEFINITELY_FALSE
        if cf == 1.0:
            return DEFINITELY_TRUE
        if cf < -self.cutoff:
            return PROBABLY_FALSE
        if cf > self.cutoff:
            return PROBABLY_TRUE
        return UNKNOWN


DEFAULT_SCALE = CFScale()


def interpret_cf(cf: CertaintyValue, scale: CFScale = DEFAULT_SCALE) -> str:
    return scale.label(cf)
