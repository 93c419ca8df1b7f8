"""Entangled q-station measurements vs deterministic hidden-variable models.

The library answers one question at every scale from q = 2 to q ~ 1e27: how
often does the best per-station deterministic answer table fail to reproduce
the entangled state's predictions, how often does the real (error-prone)
quantum setup fail, and at what station count does the difference between
the two fall below any given experimental resolution.
"""

from .asymptotics import (
    AVOGADRO,
    CONSTITUENT_FACTORS,
    GapReport,
    MacroscopicReport,
    REFERENCE_EPSILON,
    WATER_MOLAR_MASS_KG,
    classical_failure_probability,
    epsilon_threshold,
    gap,
    gap_asymptotic,
    gap_asymptotic_fraction,
    gap_exact_fraction,
    macroscopic_report,
    particles_in_mass,
)
from .configs import (
    Configuration,
    ConfigurationClass,
    String,
    Word,
    classify,
    enumerate_configurations,
    enumerate_words,
    parse_configuration,
    word_count,
    word_eigenvalue,
)
from .errors import CapacityError, ConfigParseError, DomainError, GhzGapError
from .experiment import (
    ExperimentConfig,
    ExperimentReport,
    LhvModel,
    QuantumModel,
    TrialRecord,
    iter_trials,
    min_trials_to_disprove,
    run_experiment,
    trials_to_distinguish,
    wilson_interval,
)
from .quantum import (
    NoiseModel,
    OracleEntry,
    OracleReport,
    OutcomeTuple,
    entangled_state,
    failure_probability_closed,
    failure_probability_exact,
    failure_probability_sum,
    joint_outcome_probabilities,
    parity_attenuation,
    product_observable_expectation,
    sample_outcome_batch,
    sample_outcomes,
    statevector_oracle,
)
from .strategies import (
    BadWordReport,
    CanonicalStrategy,
    DeterministicStrategy,
    bad_word_count_analytic,
    bad_word_count_naive,
    canonicalize,
    max_classical_mermin_sum,
    mermin_bound,
    mermin_sum,
    minimize_bad_words,
    minimize_bad_words_brute_force,
    predict_total,
)

__version__ = "0.1.0"

__all__ = [
    "AVOGADRO",
    "BadWordReport",
    "CanonicalStrategy",
    "CapacityError",
    "ConfigParseError",
    "Configuration",
    "ConfigurationClass",
    "CONSTITUENT_FACTORS",
    "DeterministicStrategy",
    "DomainError",
    "ExperimentConfig",
    "ExperimentReport",
    "GapReport",
    "GhzGapError",
    "LhvModel",
    "MacroscopicReport",
    "NoiseModel",
    "OracleEntry",
    "OracleReport",
    "OutcomeTuple",
    "QuantumModel",
    "REFERENCE_EPSILON",
    "String",
    "TrialRecord",
    "WATER_MOLAR_MASS_KG",
    "Word",
    "bad_word_count_analytic",
    "bad_word_count_naive",
    "canonicalize",
    "classical_failure_probability",
    "classify",
    "entangled_state",
    "enumerate_configurations",
    "enumerate_words",
    "epsilon_threshold",
    "failure_probability_closed",
    "failure_probability_exact",
    "failure_probability_sum",
    "gap",
    "gap_asymptotic",
    "gap_asymptotic_fraction",
    "gap_exact_fraction",
    "iter_trials",
    "joint_outcome_probabilities",
    "macroscopic_report",
    "max_classical_mermin_sum",
    "mermin_bound",
    "mermin_sum",
    "min_trials_to_disprove",
    "minimize_bad_words",
    "minimize_bad_words_brute_force",
    "parity_attenuation",
    "parse_configuration",
    "particles_in_mass",
    "predict_total",
    "product_observable_expectation",
    "run_experiment",
    "sample_outcome_batch",
    "sample_outcomes",
    "statevector_oracle",
    "trials_to_distinguish",
    "wilson_interval",
    "word_count",
    "word_eigenvalue",
]
