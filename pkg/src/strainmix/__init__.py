"""Causal contrasts for exposures with multiple latent versions.

An observed binary exposure (infected or not) can hide several versions of
itself (pathogen strains).  This package computes the standardized contrast
such studies report, decomposes it into strain-specific effects weighted by
the strain mixture, transports effects between populations, simulates
cohorts, and checks when the strain distinction matters at all.
"""

from .charts import render_chart
from .errors import (
    EmptyCellError,
    EmptyReportError,
    EngineError,
    NonStochasticError,
    PositivityError,
    ScenarioSchemaError,
    ScenarioSyntaxError,
    ScenarioValidationError,
    UnknownOutcomeError,
    UnknownStrainError,
    UnknownStratumError,
)
from .exact import (
    ContrastReport,
    ContrastTerm,
    DriftPoint,
    DriftReport,
    IrrelevanceReport,
    StrainEffect,
    StratumIrrelevance,
    TransportReport,
    TransportTarget,
    contrast_timeseries,
    decompose_contrast,
    observed_risk,
    oracle_contrast,
    standardized_contrast,
    strain_specific_effect,
    target_from_scenario,
    transport_contrast,
    trial_view,
    version_irrelevance_check,
)
from .fixtures import FIXTURES, fixture_path, s_b, s_c, s_conf, s_triv, s_two_outcomes
from .rng import mix_seed
from .scenario import (
    CONDITIONAL,
    MARGINAL,
    NONE_VERSION,
    Scenario,
    Stratum,
    ValidationReport,
    VersionMixture,
    Violation,
    conditional_entries,
    marginal_entries,
    mixture_given_infection,
    prevalence,
    rename_versions,
    validate_scenario,
)
from .scenario_io import (
    load_scenario,
    parse_scenario_file,
    scenario_from_mapping,
    scenario_to_json,
    scenario_to_mapping,
)
from .reports import write_report
from .simulate import (
    Cohort,
    CohortRecord,
    EstimateReport,
    McSummary,
    StrainAwareReport,
    estimate_aware,
    estimate_blind,
    monte_carlo_study,
    sample_cohort,
)

__version__ = "0.1.0"

__all__ = [
    "CONDITIONAL",
    "Cohort",
    "CohortRecord",
    "ContrastReport",
    "ContrastTerm",
    "DriftPoint",
    "DriftReport",
    "EmptyCellError",
    "EmptyReportError",
    "EngineError",
    "EstimateReport",
    "FIXTURES",
    "IrrelevanceReport",
    "MARGINAL",
    "McSummary",
    "NONE_VERSION",
    "NonStochasticError",
    "PositivityError",
    "Scenario",
    "ScenarioSchemaError",
    "ScenarioSyntaxError",
    "ScenarioValidationError",
    "StrainAwareReport",
    "StrainEffect",
    "Stratum",
    "StratumIrrelevance",
    "TransportReport",
    "TransportTarget",
    "UnknownOutcomeError",
    "UnknownStrainError",
    "UnknownStratumError",
    "ValidationReport",
    "VersionMixture",
    "Violation",
    "conditional_entries",
    "contrast_timeseries",
    "decompose_contrast",
    "estimate_aware",
    "estimate_blind",
    "fixture_path",
    "load_scenario",
    "marginal_entries",
    "mix_seed",
    "mixture_given_infection",
    "monte_carlo_study",
    "observed_risk",
    "oracle_contrast",
    "parse_scenario_file",
    "prevalence",
    "rename_versions",
    "render_chart",
    "s_b",
    "s_c",
    "s_conf",
    "s_triv",
    "s_two_outcomes",
    "sample_cohort",
    "scenario_from_mapping",
    "scenario_to_json",
    "scenario_to_mapping",
    "standardized_contrast",
    "strain_specific_effect",
    "target_from_scenario",
    "transport_contrast",
    "trial_view",
    "validate_scenario",
    "version_irrelevance_check",
    "write_report",
]
