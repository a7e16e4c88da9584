"""Domain knowledge: conditions, their symptom/trigger sets, and the weighting math.

A knowledge base is loaded from a YAML document::

    version: "1.0"
    atoms:
      - {id: whz, kind: symptom, display_name: Wheeze}
      - {id: lt, kind: trigger, display_name: Low temperature}
    conditions:
      - {id: EIB, name: Exercise-induced bronchospasm, symptoms: [whz], triggers: [lt]}

Atoms may carry ``extended: true`` to mark entries that go beyond the
scenario table the default KB was built from.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping, Union

import yaml

from respmon import resources
from respmon.cf_calculus import propagate_disjunctive

logger = logging.getLogger(__name__)

ParticipationTable = dict[str, float]


class KnowledgeBaseError(ValueError):
    pass


class KBParseError(KnowledgeBaseError):
    pass


class UnknownAtomError(KnowledgeBaseError):
    pass


class DuplicateIdError(KnowledgeBaseError):
    pass


class EmptyConditionError(KnowledgeBaseError):
    pass


class EvidenceKind(str, Enum):
    SYMPTOM = "symptom"
    TRIGGER = "trigger"


@dataclass(frozen=True)
class EvidenceAtom:
    id: str
    kind: EvidenceKind
    display_name: str
    extended: bool = False


@dataclass(frozen=True)
class ConditionProfile:
    id: str
    name: str
    symptoms: frozenset[str]
    triggers: frozenset[str]

    @property
    def evidence(self) -> frozenset[str]:
        return self.symptoms | self.triggers


@dataclass(frozen=True)
class KnowledgeBase:
    """Validated, immutable knowledge base.

    The evidence universe is always derived from the conditions and is never
    stored separately.
    """

    atoms: Mapping[str, EvidenceAtom]
    conditions: tuple[ConditionProfile, ...]
    version: str = "0"

    def __post_init__(self) -> None:
        for key, atom in self.atoms.items():
            if key != atom.id:
                raise KnowledgeBaseError(f"atom registered under {key!r} has id {atom.id!r}")
        seen: set[str] = set()
        for cond in self.conditions:
            if cond.id in seen:
                raise DuplicateIdError(f"duplicate condition id {cond.id!r}")
            seen.add(cond.id)
            if not cond.evidence:
                raise EmptyConditionError(f"condition {cond.id!r} has no symptoms or triggers")
            if cond.symptoms & cond.triggers:
                raise KnowledgeBaseError(
                    f"condition {cond.id!r} lists {sorted(cond.symptoms & cond.triggers)} "
                    "as both symptom and trigger"
                )
            for atom_id, kind in [(a, EvidenceKind.SYMPTOM) for a in cond.symptoms] + [
                (a, EvidenceKind.TRIGGER) for a in cond.triggers
            ]:
                atom = self.atoms.get(atom_id)
                if atom is None:
                    raise UnknownAtomError(f"condition {cond.id!r} references unknown atom {atom_id!r}")
                if atom.kind is not kind:
                    raise KnowledgeBaseError(
                        f"condition {cond.id!r} uses {atom.kind.value} atom {atom_id!r} as a {kind.value}"
                    )

    @property
    def condition_ids(self) -> list[str]:
        return [c.id for c in self.conditions]

    def condition(self, cid: str) -> ConditionProfile:
        for cond in self.conditions:
            if cond.id == cid:
                return cond
        raise KeyError(cid)

    def universe(self) -> frozenset[str]:
        return universe(self)


@dataclass(frozen=True)
class ObservationSet:
    """Evidence atoms observed over a time window."""

    atoms: frozenset[str] = frozenset()
    window: tuple[datetime, datetime] | None = None

    @classmethod
    def of(cls, *atoms: str) -> "ObservationSet":
        return cls(frozenset(atoms))


def _as_observations(q: ObservationSet | Iterable[str]) -> frozenset[str]:
    if isinstance(q, ObservationSet):
        return q.atoms
    return frozenset(q)


def parse_kb(doc: Mapping[str, Any]) -> KnowledgeBase:
    if not isinstance(doc, Mapping):
        raise KBParseError("KB document must be a mapping")
    try:
        raw_atoms = doc.get("atoms") or []
        raw_conditions = doc.get("conditions") or []
        atoms: dict[str, EvidenceAtom] = {}
        for raw in raw_atoms:
            atom = EvidenceAtom(
                id=str(raw["id"]),
                kind=EvidenceKind(str(raw["kind"]).lower()),
                display_name=str(raw.get("display_name", raw["id"])),
                extended=bool(raw.get("extended", False)),
            )
            if atom.id in atoms:
                raise DuplicateIdError(f"duplicate atom id {atom.id!r}")
            atoms[atom.id] = atom
        conditions = tuple(
            ConditionProfile(
                id=str(raw["id"]),
                name=str(raw.get("name", raw["id"])),
                symptoms=frozenset(map(str, raw.get("symptoms") or [])),
                triggers=frozenset(map(str, raw.get("triggers") or [])),
            )
            for raw in raw_conditions
        )
    except KnowledgeBaseError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise KBParseError(f"malformed KB document: {exc!r}") from exc
    return KnowledgeBase(atoms=atoms, conditions=conditions, version=str(doc.get("version", "0")))


def load_kb(source: Union[str, Path, Mapping[str, Any]]) -> KnowledgeBase:
    """Load and validate a KB from a mapping, a YAML file, or a bundled name.

    Bundled names look like ``"kb/default"``.
    """
    if isinstance(source, Mapping):
        return parse_kb(source)
    path = resources.resolve(source)
    try:
        doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise KBParseError(f"{path}: {exc}") from exc
    if doc is None:
        doc = {}
    return parse_kb(doc)


def default_kb() -> KnowledgeBase:
    return load_kb("kb/default")


def universe(kb: KnowledgeBase) -> frozenset[str]:
    out: set[str] = set()
    for cond in kb.conditions:
        out |= cond.evidence
    return frozenset(out)


def restrict_to_universe(kb: KnowledgeBase, q: ObservationSet | Iterable[str]) -> frozenset[str]:
    """Drop (with a warning) observed atoms the KB knows nothing about."""
    atoms = _as_observations(q)
    p = universe(kb)
    unknown = atoms - p
    if unknown:
        logger.warning("ignoring observed atoms outside the KB universe: %s", sorted(unknown))
    return atoms & p


def suspected_conditions(kb: KnowledgeBase, q: ObservationSet | Iterable[str]) -> frozenset[str]:
    observed = restrict_to_universe(kb, q)
    return frozenset(c.id for c in kb.conditions if c.evidence & observed)


def participation_fractions(
    kb: KnowledgeBase, beta: Iterable[str], q: ObservationSet | Iterable[str]
) -> dict[str, Fraction]:
    """Exact participation ratios, keyed by observed atom."""
    observed = restrict_to_universe(kb, q)
    suspected = [kb.condition(cid) for cid in beta]
    table: dict[str, Fraction] = {}
    for atom in sorted(observed):
        n = sum(1 for cond in suspected if atom in cond.evidence)
        if n:
            table[atom] = Fraction(1, n)
    return table


def participation_ratios(
    kb: KnowledgeBase, beta: Iterable[str], q: ObservationSet | Iterable[str]
) -> ParticipationTable:
    """Ratio of each observed atom: one over the number of suspected conditions listing it."""
    return {atom: float(r) for atom, r in participation_fractions(kb, beta, q).items()}


def gamma_theta(
    kb: KnowledgeBase, c: str, table: Mapping[str, float], q: ObservationSet | Iterable[str]
) -> tuple[float, float]:
    """Strongest observed symptom ratio and strongest observed trigger ratio of ``c``.

    A side with nothing observed contributes 0.
    """
    cond = kb.condition(c)
    observed = _as_observations(q)
    sym = [table[a] for a in sorted(cond.symptoms & observed) if a in table]
    trg = [table[a] for a in sorted(cond.triggers & observed) if a in table]
    gamma = propagate_disjunctive(sym) if sym else 0.0
    theta = propagate_disjunctive(trg) if trg else 0.0
    return gamma, theta


def certainty_weight(gamma: float, theta: float) -> float:
    """Normalised suspicion weight from the symptom and trigger maxima.

    The denominator ``max(gamma + theta, 1 - gamma*theta)`` keeps the weight
    inside [0, 1]; it saturates at 1 once ``gamma + theta >= 1 - gamma*theta``.
    """
    if not (0.0 <= gamma <= 1.0 and 0.0 <= theta <= 1.0):
        raise ValueError(f"gamma={gamma!r}, theta={theta!r} must lie in [0, 1]")
    total = gamma + theta
    return total / max(total, 1.0 - gamma * theta)


@dataclass(frozen=True)
class WeightBreakdown:
    """Intermediate quantities of one weighting pass over a KB."""

    observed: frozenset[str]
    beta: frozenset[str]
    ratios: ParticipationTable
    gamma_theta: dict[str, tuple[float, float]] = field(default_factory=dict)
    weights: dict[str, float] = field(default_factory=dict)


def weigh(kb: KnowledgeBase, q: ObservationSet | Iterable[str]) -> WeightBreakdown:
    observed = restrict_to_universe(kb, q)
    beta = suspected_conditions(kb, observed)
    ratios = participation_ratios(kb, beta, observed)
    gt = {cid: gamma_theta(kb, cid, ratios, observed) for cid in sorted(beta)}
    weights = {cid: certainty_weight(*pair) for cid, pair in gt.items()}
    return WeightBreakdown(observed, beta, ratios, gt, weights)
