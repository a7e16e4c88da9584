"""Certainty-factor reasoning for monitoring exercise-induced respiratory conditions."""

from respmon.cf_calculus import (
    CFScale,
    PriorBelief,
    certainty_factor,
    combine_incremental,
    interpret_cf,
    measure_of_belief,
    measure_of_disbelief,
    propagate_conjunctive,
    propagate_disjunctive,
)
from respmon.event_store import (
    EventStore,
    EventWindow,
    MappingThresholds,
    SensorRecord,
    build_observation_set,
    map_record,
)
from respmon.inference import (
    DiscriminationRule,
    InferenceReport,
    PatientProfile,
    Status,
    SuspicionEntry,
    run_inference,
    select_phi,
)
from respmon.knowledge_base import (
    KnowledgeBase,
    ObservationSet,
    certainty_weight,
    default_kb,
    gamma_theta,
    load_kb,
    participation_ratios,
    suspected_conditions,
    universe,
)

__version__ = "0.1.0"
