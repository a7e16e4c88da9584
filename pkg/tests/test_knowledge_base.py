import logging
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_beta, brute_ratios, brute_weight
from respmon.knowledge_base import (
    DuplicateIdError,
    EmptyConditionError,
    EvidenceKind,
    KBParseError,
    KnowledgeBaseError,
    ObservationSet,
    UnknownAtomError,
    certainty_weight,
    gamma_theta,
    load_kb,
    participation_fractions,
    participation_ratios,
    suspected_conditions,
    universe,
)

SCENARIO_Q = ObservationSet.of("whz", "cgh", "lt", "lh", "vgr")
TABLE_2 = {"whz": 0.5, "cgh": 0.25, "lt": 0.2, "lh": 0.25, "vgr": 0.25}


def tiny_kb(conditions, kinds):
    return load_kb(
        {
            "version": "t",
            "atoms": [{"id": a, "kind": k} for a, k in kinds.items()],
            "conditions": [
                {"id": c, "symptoms": sorted(s), "triggers": sorted(t)} for c, (s, t) in conditions.items()
            ],
        }
    )


def test_default_kb_shape(kb):
    assert len(kb.conditions) == 5
    assert set(kb.condition_ids) == {"EIA", "EIB", "VCD", "EIR", "COPD"}
    assert universe(kb) >= {"whz", "cgh", "lt", "lh", "vgr"}
    assert kb.condition("COPD").triggers == {"lt"}
    assert kb.condition("EIR").symptoms == {"snz", "snf"}
    extended = {a.id for a in kb.atoms.values() if a.extended}
    assert extended == {"str", "snz", "snf"}
    assert kb.atoms["vgr"].kind is EvidenceKind.TRIGGER


def test_load_kb_from_yaml_file(tmp_path):
    path = tmp_path / "kb.yaml"
    path.write_text(
        "version: '2'\n"
        "atoms:\n  - {id: s1, kind: symptom, display_name: S1}\n  - {id: t1, kind: trigger}\n"
        "conditions:\n  - {id: C, name: Cond, symptoms: [s1], triggers: [t1]}\n"
    )
    kb = load_kb(path)
    assert kb.version == "2"
    assert universe(kb) == {"s1", "t1"}


@pytest.mark.parametrize(
    "doc, error",
    [
        (
            {"atoms": [{"id": "a", "kind": "symptom"}], "conditions": [{"id": "C", "symptoms": ["xyz"]}]},
            UnknownAtomError,
        ),
        (
            {
                "atoms": [{"id": "a", "kind": "symptom"}],
                "conditions": [{"id": "C", "symptoms": ["a"]}, {"id": "C", "symptoms": ["a"]}],
            },
            DuplicateIdError,
        ),
        ({"atoms": [{"id": "a", "kind": "symptom"}, {"id": "a", "kind": "trigger"}]}, DuplicateIdError),
        ({"atoms": [{"id": "a", "kind": "symptom"}], "conditions": [{"id": "C"}]}, EmptyConditionError),
        ({"atoms": [{"id": "a", "kind": "weird"}]}, KBParseError),
        ({"atoms": [{"kind": "symptom"}]}, KBParseError),
        (
            {"atoms": [{"id": "a", "kind": "symptom"}], "conditions": [{"id": "C", "triggers": ["a"]}]},
            KnowledgeBaseError,
        ),
    ],
)
def test_load_kb_rejects(doc, error):
    with pytest.raises(error):
        load_kb(doc)


def test_load_kb_parse_error(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("atoms: [unclosed\n")
    with pytest.raises(KBParseError):
        load_kb(path)


def test_empty_kb():
    kb = load_kb({"version": "0", "atoms": [], "conditions": []})
    assert kb.conditions == ()
    assert universe(kb) == frozenset()
    assert suspected_conditions(kb, SCENARIO_Q) == frozenset()


def test_universe_single_condition():
    kb = tiny_kb({"C": ({"s1"}, {"t1"})}, {"s1": "symptom", "t1": "trigger"})
    assert universe(kb) == {"s1", "t1"}


def test_suspected_conditions(kb):
    assert suspected_conditions(kb, SCENARIO_Q) == {"EIA", "EIB", "VCD", "EIR", "COPD"}
    assert suspected_conditions(kb, ObservationSet()) == frozenset()
    assert suspected_conditions(kb, ["lt"]) == {"EIA", "EIB", "VCD", "EIR", "COPD"}
    assert suspected_conditions(kb, ["whz"]) == {"EIA", "EIB"}


def test_unknown_atoms_dropped_with_warning(kb, caplog):
    with caplog.at_level(logging.WARNING):
        beta = suspected_conditions(kb, ["whz", "rattle"])
    assert beta == {"EIA", "EIB"}
    assert "rattle" in caplog.text


def test_table_2_ratios(kb):
    beta = suspected_conditions(kb, SCENARIO_Q)
    assert participation_ratios(kb, beta, SCENARIO_Q) == TABLE_2
    exact = participation_fractions(kb, beta, SCENARIO_Q)
    assert exact == {"whz": Fraction(1, 2), "cgh": Fraction(1, 4), "lt": Fraction(1, 5),
                     "lh": Fraction(1, 4), "vgr": Fraction(1, 4)}


def test_ratio_with_restricted_beta(kb):
    # whz alone: counted among {EIA, EIB} only
    conditions = {c.id: (c.symptoms, c.triggers) for c in kb.conditions}
    expected = brute_ratios(conditions, {"EIA", "EIB"}, {"whz"})
    assert participation_ratios(kb, {"EIA", "EIB"}, ["whz"]) == {"whz": float(expected["whz"])}
    assert expected["whz"] == Fraction(1, 2)


@pytest.mark.parametrize(
    "cid, expected",
    [("EIB", (0.5, 0.25)), ("EIA", (0.5, 0.25)), ("EIR", (0.0, 0.25)), ("COPD", (0.25, 0.2)), ("VCD", (0.25, 0.25))],
)
def test_gamma_theta(kb, cid, expected):
    beta = suspected_conditions(kb, SCENARIO_Q)
    table = participation_ratios(kb, beta, SCENARIO_Q)
    assert gamma_theta(kb, cid, table, SCENARIO_Q) == expected


@pytest.mark.parametrize(
    "gamma, theta, expected",
    [
        ("0.5", "0.25", Fraction(6, 7)),
        ("0.25", "0.25", Fraction(8, 15)),
        ("0", "0.25", Fraction(1, 4)),
        ("0.25", "0.2", Fraction(9, 19)),
        ("0", "0", Fraction(0)),
    ],
)
def test_certainty_weight_examples(gamma, theta, expected):
    # expected values from the exact-arithmetic oracle
    assert brute_weight(Fraction(gamma), Fraction(theta)) == expected
    assert certainty_weight(float(gamma), float(theta)) == pytest.approx(float(expected), abs=1e-15)


def test_certainty_weight_rejects_out_of_range():
    with pytest.raises(ValueError):
        certainty_weight(1.2, 0.0)


@st.composite
def random_kb(draw):
    n_atoms = draw(st.integers(1, 10))
    atoms = [f"a{i}" for i in range(n_atoms)]
    kinds = {a: draw(st.sampled_from(["symptom", "trigger"])) for a in atoms}
    conditions = {}
    for i in range(draw(st.integers(0, 6))):
        ev = draw(st.sets(st.sampled_from(atoms), min_size=1))
        conditions[f"C{i}"] = (
            {a for a in ev if kinds[a] == "symptom"},
            {a for a in ev if kinds[a] == "trigger"},
        )
    q = draw(st.sets(st.sampled_from(atoms)))
    return conditions, kinds, q


@given(random_kb())
def test_beta_and_ratios_match_brute_force(case):
    conditions, kinds, q = case
    kb = tiny_kb(conditions, kinds)
    beta = suspected_conditions(kb, q)
    assert beta == brute_beta(conditions, q)
    ratios = participation_ratios(kb, beta, q)
    expected = brute_ratios(conditions, beta, q & universe(kb))
    assert ratios == {a: float(r) for a, r in expected.items()}
    for r in ratios.values():
        assert 0 < r <= 1


@given(random_kb(), st.sampled_from([f"a{i}" for i in range(10)]))
def test_adding_evidence_never_shrinks_beta(case, extra):
    conditions, kinds, q = case
    kb = tiny_kb(conditions, kinds)
    assert suspected_conditions(kb, q) <= suspected_conditions(kb, q | {extra})


def test_weight_grid_symmetry_and_bounds():
    rng = random.Random(3)
    for _ in range(2000):
        a, b = rng.random(), rng.random()
        w = certainty_weight(a, b)
        assert 0 <= w <= 1
        assert w == certainty_weight(b, a)
