"""The monitoring reasoning loop.

``run_inference`` builds the observation set from a window of sensor records,
derives the suspected conditions and their certainty weights, applies profile
and timing discrimination rules, and picks the top-weighted set.
"""

from __future__ import annotations

import logging
from bisect import bisect_left
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta
from decimal import ROUND_DOWN, ROUND_HALF_UP, Decimal
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence, Union

import yaml

from respmon import resources
from respmon.cf_calculus import combine_incremental
from respmon.event_store import (
    ActivityLevel,
    EventWindow,
    MappingThresholds,
    SensorRecord,
    build_observation_set,
)
from respmon.knowledge_base import KnowledgeBase, ObservationSet, weigh

logger = logging.getLogger(__name__)

ASTHMA = "asthma"
DEFAULT_ALERT_THRESHOLD = 0.6
PROFILE_ASTHMATIC_RULE = "profile:asthmatic"
PROFILE_NON_ASTHMATIC_RULE = "profile:non-asthmatic"


class InferenceError(ValueError):
    pass


class Status(str, Enum):
    RANKED = "Ranked"
    EXCLUDED_NO_SYMPTOM = "ExcludedNoSymptom"
    EXCLUDED_BY_PROFILE = "ExcludedByProfile"


@dataclass(frozen=True)
class PatientProfile:
    """What the user declared at profile setup.

    ``asthmatic`` is ``None`` when unknown. A diagnosis of ``asthma`` or of
    EIA implies an asthmatic patient unless stated otherwise.
    """

    identifier: str = ""
    diagnosed_conditions: frozenset[str] = frozenset()
    asthmatic: bool | None = None

    @property
    def is_asthmatic(self) -> bool | None:
        if self.asthmatic is not None:
            return self.asthmatic
        if {ASTHMA, "EIA"} & self.diagnosed_conditions:
            return True
        return None

    def validate(self, kb: KnowledgeBase) -> None:
        known = set(kb.condition_ids) | {ASTHMA}
        unknown = self.diagnosed_conditions - known
        if unknown:
            raise InferenceError(f"profile lists unknown diagnoses {sorted(unknown)}")


def load_profile(source: Union[str, Path, Mapping[str, Any], None]) -> PatientProfile:
    if source is None:
        return PatientProfile()
    if isinstance(source, Mapping):
        doc = source
    else:
        doc = yaml.safe_load(resources.resolve(source).read_text(encoding="utf-8")) or {}
    asthmatic = doc.get("asthmatic")
    return PatientProfile(
        identifier=str(doc.get("identifier", "")),
        diagnosed_conditions=frozenset(map(str, doc.get("diagnosed_conditions") or [])),
        asthmatic=None if asthmatic is None else bool(asthmatic),
    )


@dataclass(frozen=True)
class SuspicionEntry:
    condition: str
    gamma: float
    theta: float
    weight: float
    adjusted_weight: float
    status: Status = Status.RANKED
    applied_rules: tuple[str, ...] = ()


# -- discrimination rules ----------------------------------------------------


@dataclass(frozen=True)
class DiscriminationRule:
    """A declarative timing rule nudging one condition's weight.

    Kinds:

    ``delayed_symptom``
        The first ``sound`` record comes at least ``min_minutes`` after the
        first record at ``activity``; with ``max_minutes_after_activity`` it
        must also fall no later than that long after the last such record.
    ``concurrent_symptom``
        Some ``sound`` record lies within ``tolerance_seconds`` of a record at
        ``activity`` (0 means the same record).
    """

    id: str
    kind: str
    target: str
    cf_delta: float = 0.2
    params: Mapping[str, Any] = field(default_factory=dict)

    KINDS = ("delayed_symptom", "concurrent_symptom")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise InferenceError(f"rule {self.id!r}: unknown kind {self.kind!r}")
        if not -1.0 <= self.cf_delta <= 1.0:
            raise InferenceError(f"rule {self.id!r}: cf_delta {self.cf_delta} outside [-1, 1]")
        if "sound" not in self.params:
            raise InferenceError(f"rule {self.id!r}: missing 'sound' parameter")

    def _is_sound(self, r: SensorRecord) -> bool:
        want = str(self.params["sound"]).lower()
        return r.sound_detected is not None and r.sound_detected.strip().lower() == want

    def _is_active(self, r: SensorRecord) -> bool:
        level = ActivityLevel.parse(str(self.params.get("activity", ActivityLevel.VIGOROUS.value)))
        return r.activity_level is level

    def holds(self, window: EventWindow) -> bool:
        sounds = [r.timestamp for r in window.records if self._is_sound(r)]
        active = [r.timestamp for r in window.records if self._is_active(r)]
        if not sounds or not active:
            return False
        if self.kind == "delayed_symptom":
            first = min(sounds)
            onset = min(active)
            if first - onset < timedelta(minutes=float(self.params.get("min_minutes", 5))):
                return False
            limit = self.params.get("max_minutes_after_activity")
            if limit is not None and first > max(active) + timedelta(minutes=float(limit)):
                return False
            return True
        tol = timedelta(seconds=float(self.params.get("tolerance_seconds", 0)))
        active.sort()
        for s in sounds:
            i = bisect_left(active, s - tol)
            if i < len(active) and active[i] <= s + tol:
                return True
        return False


def parse_rules(doc: Iterable[Mapping[str, Any]]) -> list[DiscriminationRule]:
    rules = []
    for raw in doc:
        raw = dict(raw)
        try:
            rules.append(
                DiscriminationRule(
                    id=str(raw.pop("id")),
                    kind=str(raw.pop("kind")),
                    target=str(raw.pop("target")),
                    cf_delta=float(raw.pop("cf_delta", 0.2)),
                    params=dict(raw.pop("params", {}) or {}, **raw),
                )
            )
        except KeyError as exc:
            raise InferenceError(f"rule is missing field {exc}") from None
    ids = [r.id for r in rules]
    if len(set(ids)) != len(ids):
        raise InferenceError("duplicate rule ids")
    return rules


def load_rules(source: Union[str, Path, None]) -> list[DiscriminationRule]:
    if source is None:
        return []
    doc = yaml.safe_load(resources.resolve(source).read_text(encoding="utf-8")) or {}
    if isinstance(doc, Mapping):
        doc = doc.get("rules") or []
    return parse_rules(doc)


def apply_profile_rule(
    entries: Sequence[SuspicionEntry], profile: PatientProfile | None
) -> list[SuspicionEntry]:
    """Separate EIA from EIB using the declared asthma status."""
    if profile is None or profile.is_asthmatic is None:
        return list(entries)
    if profile.is_asthmatic:
        drop, rule = "EIB", PROFILE_ASTHMATIC_RULE
    else:
        drop, rule = "EIA", PROFILE_NON_ASTHMATIC_RULE
    out = []
    for e in entries:
        if e.condition == drop:
            status = Status.EXCLUDED_BY_PROFILE if e.status is Status.RANKED else e.status
            e = replace(e, status=status, applied_rules=e.applied_rules + (rule,))
        out.append(e)
    return out


def apply_timing_rules(
    entries: Sequence[SuspicionEntry], window: EventWindow, rules: Iterable[DiscriminationRule]
) -> list[SuspicionEntry]:
    by_id = {e.condition: e for e in entries}
    for rule in rules:
        if rule.target not in by_id:
            logger.warning("rule %s targets %s, which is not suspected; skipped", rule.id, rule.target)
            continue
        if not rule.holds(window):
            continue
        e = by_id[rule.target]
        by_id[rule.target] = replace(
            e,
            adjusted_weight=combine_incremental(e.adjusted_weight, rule.cf_delta),
            applied_rules=e.applied_rules + (rule.id,),
        )
    return [by_id[e.condition] for e in entries]


def select_phi(entries: Iterable[SuspicionEntry]) -> frozenset[str]:
    ranked = [e for e in entries if e.status is Status.RANKED]
    if not ranked:
        return frozenset()
    top = max(e.adjusted_weight for e in ranked)
    return frozenset(e.condition for e in ranked if e.adjusted_weight == top)


def _order(entries: Iterable[SuspicionEntry]) -> list[SuspicionEntry]:
    return sorted(entries, key=lambda e: (-e.adjusted_weight, e.condition))


# -- report ------------------------------------------------------------------


def round_half_up(x: float, places: int = 2) -> float:
    return float(Decimal(repr(x)).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP))


def truncate(x: float, places: int = 2) -> float:
    return float(Decimal(repr(x)).quantize(Decimal(1).scaleb(-places), rounding=ROUND_DOWN))


@dataclass(frozen=True)
class Alert:
    conditions: tuple[str, ...]
    weights: dict[str, float]
    observed: tuple[str, ...]
    window: tuple[datetime, datetime] | None
    threshold: float

    def message(self) -> str:
        parts = ", ".join(f"{c} {round_half_up(self.weights[c]):.2f}" for c in self.conditions)
        return f"suspected: {parts} (evidence: {', '.join(self.observed)})"


@dataclass(frozen=True)
class InferenceReport:
    q: ObservationSet
    entries: tuple[SuspicionEntry, ...]
    phi: frozenset[str]
    generated_at: datetime
    kb_version: str
    alert: Alert | None = None

    def entry(self, condition: str) -> SuspicionEntry:
        for e in self.entries:
            if e.condition == condition:
                return e
        raise KeyError(condition)

    @property
    def weights(self) -> dict[str, float]:
        return {e.condition: e.weight for e in self.entries}

    def to_dict(self) -> dict[str, Any]:
        def fmt_span(span):
            return None if span is None else [span[0].isoformat(), span[1].isoformat()]

        return {
            "generated_at": self.generated_at.isoformat(),
            "kb_version": self.kb_version,
            "q": {"atoms": sorted(self.q.atoms), "window": fmt_span(self.q.window)},
            "entries": [
                {
                    "condition": e.condition,
                    "gamma": e.gamma,
                    "theta": e.theta,
                    "weight": e.weight,
                    "weight_rounded": round_half_up(e.weight),
                    "weight_truncated": truncate(e.weight),
                    "adjusted_weight": e.adjusted_weight,
                    "adjusted_weight_rounded": round_half_up(e.adjusted_weight),
                    "adjusted_weight_truncated": truncate(e.adjusted_weight),
                    "status": e.status.value,
                    "applied_rules": list(e.applied_rules),
                }
                for e in self.entries
            ],
            "phi": sorted(self.phi),
            "alert": None
            if self.alert is None
            else {
                "conditions": list(self.alert.conditions),
                "weights": self.alert.weights,
                "weights_rounded": {c: round_half_up(w) for c, w in self.alert.weights.items()},
                "observed": list(self.alert.observed),
                "window": fmt_span(self.alert.window),
                "threshold": self.alert.threshold,
                "message": self.alert.message(),
            },
        }


def render_text(report: Mapping[str, Any]) -> str:
    """Human-readable rendering of a report dict (as produced by ``to_dict``)."""
    lines = [
        f"KB version {report['kb_version']}, generated {report['generated_at']}",
        f"Q = {{{', '.join(report['q']['atoms'])}}}",
        "",
        f"{'condition':<10}{'gamma':>8}{'theta':>8}{'W':>10}{'W(2dp)':>8}{'W(trunc)':>10}{'adjusted':>10}  status",
    ]
    for e in report["entries"]:
        rules = f" [{', '.join(e['applied_rules'])}]" if e["applied_rules"] else ""
        lines.append(
            f"{e['condition']:<10}{e['gamma']:>8.4f}{e['theta']:>8.4f}{e['weight']:>10.6f}"
            f"{e['weight_rounded']:>8.2f}{e['weight_truncated']:>10.2f}{e['adjusted_weight']:>10.6f}"
            f"  {e['status']}{rules}"
        )
    lines.append("")
    lines.append(f"Phi = {{{', '.join(report['phi'])}}}")
    alert = report.get("alert")
    lines.append(f"ALERT: {alert['message']}" if alert else "no alert")
    return "\n".join(lines)


def build_alert(report: InferenceReport, threshold: float = DEFAULT_ALERT_THRESHOLD) -> Alert | None:
    if not report.phi:
        return None
    top = max(report.entry(c).adjusted_weight for c in report.phi)
    if top < threshold:
        return None
    phi = tuple(sorted(report.phi))
    return Alert(
        conditions=phi,
        weights={c: report.entry(c).adjusted_weight for c in phi},
        observed=tuple(sorted(report.q.atoms)),
        window=report.q.window,
        threshold=threshold,
    )


def score_observations(kb: KnowledgeBase, q: ObservationSet | Iterable[str]) -> list[SuspicionEntry]:
    """Weights for every suspected condition, before any discrimination rule."""
    breakdown = weigh(kb, q)
    entries = []
    for cid, (gamma, theta) in breakdown.gamma_theta.items():
        w = breakdown.weights[cid]
        status = Status.EXCLUDED_NO_SYMPTOM if gamma == 0 else Status.RANKED
        entries.append(SuspicionEntry(cid, gamma, theta, w, w, status))
    return _order(entries)


def run_inference(
    kb: KnowledgeBase,
    window: EventWindow,
    th: MappingThresholds = MappingThresholds(),
    profile: PatientProfile | None = None,
    rules: Sequence[DiscriminationRule] = (),
    alert_threshold: float = DEFAULT_ALERT_THRESHOLD,
    now: datetime | None = None,
) -> InferenceReport:
    q = build_observation_set(window, th)
    return infer_observations(kb, q, window, profile, rules, alert_threshold, now)


def infer_observations(
    kb: KnowledgeBase,
    q: ObservationSet,
    window: EventWindow | None = None,
    profile: PatientProfile | None = None,
    rules: Sequence[DiscriminationRule] = (),
    alert_threshold: float = DEFAULT_ALERT_THRESHOLD,
    now: datetime | None = None,
) -> InferenceReport:
    """Everything after observation-set construction.

    Timing rules need the event window; without one they are not evaluated.
    """
    if profile is not None:
        profile.validate(kb)
    entries = score_observations(kb, q)
    entries = apply_profile_rule(entries, profile)
    if window is not None and rules:
        entries = apply_timing_rules(entries, window, rules)
    entries = _order(entries)
    report = InferenceReport(
        q=q,
        entries=tuple(entries),
        phi=select_phi(entries),
        generated_at=now or datetime.now(),
        kb_version=kb.version,
    )
    return replace(report, alert=build_alert(report, alert_threshold))

