"""Finite-cohort sampling and estimation.

The sampler draws from the scenario's data-generating process: stratum
first, then the latent version within the stratum, then each outcome from
the version's risk; the binary exposure is derived from the version.  Both
estimators are empirical analogs of the exact quantities: the strain-blind
one standardizes (L, A, Y) cell means, the strain-aware one estimates
per-strain effects and recombines them with empirical mixture weights,
reproducing the blind estimate identically.

Cohorts are stored column-wise (numpy arrays) with a record view for
convenience; all draws use inverse-CDF over the declared category order
from a single PCG64 generator, so a cohort is a pure function of
(scenario, n, seed).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import EmptyCellError, ScenarioValidationError, UnknownOutcomeError
from .exact import StrainEffect, standardized_contrast
from .rng import mix_seed
from .scenario import NONE_VERSION, Scenario, marginal_entries, validate_scenario

# Cells smaller than this draw a warning in estimate reports.
SMALL_CELL = 5


@dataclass(frozen=True)
class CohortRecord:
    """One sampled individual."""

    stratum: str
    version: str
    exposure: int
    outcomes: dict[str, int]


@dataclass(frozen=True)
class Cohort:
    """Column-wise cohort sample.

    ``version_labels[i]`` lists stratum ``i``'s versions with positive
    sampling mass, in declared order; ``version_idx`` indexes into it.
    """

    scenario: str
    stratum_labels: tuple[str, ...]
    version_labels: tuple[tuple[str, ...], ...]
    outcome_names: tuple[str, ...]
    stratum_idx: np.ndarray
    version_idx: np.ndarray
    exposure: np.ndarray
    outcomes: dict[str, np.ndarray]

    def __len__(self) -> int:
        return int(self.stratum_idx.shape[0])

    def record(self, i: int) -> CohortRecord:
        si = int(self.stratum_idx[i])
        return CohortRecord(
            stratum=self.stratum_labels[si],
            version=self.version_labels[si][int(self.version_idx[i])],
            exposure=int(self.exposure[i]),
            outcomes={name: int(col[i]) for name, col in self.outcomes.items()},
        )

    def records(self) -> Iterator[CohortRecord]:
        return (self.record(i) for i in range(len(self)))


@dataclass(frozen=True)
class StratumCells:
    stratum: str
    n: int
    exposed: int
    unexposed: int


@dataclass(frozen=True)
class EstimateReport:
    """Strain-blind standardized estimate with its cell bookkeeping."""

    estimand: str
    outcome: str
    estimate: float
    n: int
    cells: tuple[StratumCells, ...]
    warnings: tuple[str, ...]


@dataclass(frozen=True)
class VersionCell:
    stratum: str
    version: str
    count: int


@dataclass(frozen=True)
class StrainAwareReport:
    """Per-strain effect estimates plus their mixture-weighted recombination."""

    outcome: str
    n: int
    effects: tuple[StrainEffect, ...]
    contrast: float
    cells: tuple[VersionCell, ...]
    warnings: tuple[str, ...]


@dataclass(frozen=True)
class McSummary:
    outcome: str
    reps: int
    n: int
    mean_estimate: float
    empirical_se: float
    exact_value: float
    mean_bias: float


def _require_valid(scenario: Scenario) -> None:
    report = validate_scenario(scenario)
    if not report.ok:
        first = report.violations[0]
        raise ScenarioValidationError(f"invalid scenario: {first.where}: {first.message}", report)


def sample_cohort(scenario: Scenario, n: int, seed: int) -> Cohort:
    """Draw ``n`` independent records; identical arguments give identical
    cohorts regardless of how the caller schedules the work."""
    _require_valid(scenario)
    if n < 0:
        raise ValueError("cohort size must be non-negative")
    rng = np.random.Generator(np.random.PCG64(int(seed)))

    stratum_labels = tuple(st.label for st in scenario.strata)
    weights = np.array([st.weight for st in scenario.strata], dtype=np.float64)
    cum_w = np.cumsum(weights)
    cum_w /= cum_w[-1]
    cum_w[-1] = 1.0

    # Per stratum: positive-mass versions in declared order and their CDF.
    version_labels = []
    cdfs = []
    exposed_flags = []
    for st in scenario.strata:
        pairs = [(k, p) for k, p in marginal_entries(st.mixture) if p > 0.0]
        labels = tuple(k for k, _ in pairs)
        probs = np.array([p for _, p in pairs], dtype=np.float64)
        cdf = np.cumsum(probs)
        cdf /= cdf[-1]
        cdf[-1] = 1.0
        version_labels.append(labels)
        cdfs.append(cdf)
        exposed_flags.append(np.array([k != NONE_VERSION for k in labels]))

    max_versions = max(len(v) for v in version_labels)
    risk_tables = {}
    for outcome in scenario.outcomes:
        table = np.zeros((len(scenario.strata), max_versions), dtype=np.float64)
        for i, st in enumerate(scenario.strata):
            for j, k in enumerate(version_labels[i]):
                table[i, j] = st.risk(outcome, k)
        risk_tables[outcome] = table

    # Fixed draw order: stratum uniforms, version uniforms, one uniform
    # block per outcome in declared order.
    u_stratum = rng.random(n)
    u_version = rng.random(n)
    stratum_idx = np.searchsorted(cum_w, u_stratum, side="right").astype(np.int32)
    version_idx = np.zeros(n, dtype=np.int32)
    exposure = np.zeros(n, dtype=np.int8)
    for i in range(len(scenario.strata)):
        mask = stratum_idx == i
        if not mask.any():
            continue
        local = np.searchsorted(cdfs[i], u_version[mask], side="right")
        version_idx[mask] = local
        exposure[mask] = exposed_flags[i][local]

    outcomes = {}
    for outcome in scenario.outcomes:
        u = rng.random(n)
        risks = risk_tables[outcome][stratum_idx, version_idx]
        outcomes[outcome] = (u < risks).astype(np.int8)

    return Cohort(scenario.name, stratum_labels, tuple(version_labels),
                  tuple(scenario.outcomes), stratum_idx, version_idx, exposure, outcomes)


def _outcome_column(cohort: Cohort, outcome: str) -> np.ndarray:
    if outcome not in cohort.outcomes:
        raise UnknownOutcomeError(f"unknown outcome {outcome!r}")
    return cohort.outcomes[outcome].astype(np.float64)


def estimate_blind(cohort: Cohort, outcome: str) -> EstimateReport:
    """Stratified standardization from (L, A, Y) only, weighting strata by
    their empirical share; never reads the latent version column."""
    n = len(cohort)
    if n == 0:
        raise EmptyCellError("cohort is empty")
    y = _outcome_column(cohort, outcome)
    n_strata = len(cohort.stratum_labels)

    counts = np.bincount(cohort.stratum_idx, minlength=n_strata)
    exposed = cohort.exposure == 1
    counts_1 = np.bincount(cohort.stratum_idx[exposed], minlength=n_strata)
    counts_0 = counts - counts_1
    sums_1 = np.bincount(cohort.stratum_idx[exposed], weights=y[exposed], minlength=n_strata)
    sums_0 = np.bincount(cohort.stratum_idx[~exposed], weights=y[~exposed], minlength=n_strata)

    cells = []
    warnings = []
    empty = []
    for i, label in enumerate(cohort.stratum_labels):
        cells.append(StratumCells(label, int(counts[i]), int(counts_1[i]), int(counts_0[i])))
        if counts[i] == 0:
            warnings.append(f"stratum {label!r} has no records")
            continue
        for arm, c in ((1, counts_1[i]), (0, counts_0[i])):
            if c == 0:
                empty.append(f"(stratum {label!r}, A={arm})")
            elif c < SMALL_CELL:
                warnings.append(f"small cell (stratum {label!r}, A={arm}): {int(c)} records")
    if empty:
        raise EmptyCellError("no observations in cells: " + ", ".join(empty))

    estimate = 0.0
    for i in range(n_strata):
        if counts[i] == 0:
            continue
        estimate += (sums_1[i] / counts_1[i] - sums_0[i] / counts_0[i]) * (counts[i] / n)

    return EstimateReport("standardized-contrast-blind", outcome, float(estimate),
                          n, tuple(cells), tuple(warnings))


def estimate_aware(cohort: Cohort, outcome: str) -> StrainAwareReport:
    """Per-(stratum, strain) effect estimates from the latent version column,
    recombined with empirical mixture weights into the same contrast the
    blind estimator reports."""
    n = len(cohort)
    if n == 0:
        raise EmptyCellError("cohort is empty")
    y = _outcome_column(cohort, outcome)
    n_strata = len(cohort.stratum_labels)
    max_versions = max(len(v) for v in cohort.version_labels)

    flat = cohort.stratum_idx.astype(np.int64) * max_versions + cohort.version_idx
    counts = np.bincount(flat, minlength=n_strata * max_versions)
    sums = np.bincount(flat, weights=y, minlength=n_strata * max_versions)
    counts = counts.reshape(n_strata, max_versions)
    sums = sums.reshape(n_strata, max_versions)
    stratum_counts = counts.sum(axis=1)

    warnings = []
    empty = []
    cells = []
    effects = []
    contrast = 0.0
    for i, label in enumerate(cohort.stratum_labels):
        labels = cohort.version_labels[i]
        for j, version in enumerate(labels):
            cells.append(VersionCell(label, version, int(counts[i, j])))
        if stratum_counts[i] == 0:
            warnings.append(f"stratum {label!r} has no records")
            continue
        missing = [(j, k) for j, k in enumerate(labels) if counts[i, j] == 0]
        if NONE_VERSION not in labels:
            missing.append((None, NONE_VERSION))
        if missing:
            empty.extend(f"(stratum {label!r}, version {k!r})" for _, k in missing)
            continue
        none_j = labels.index(NONE_VERSION)
        exposed_count = stratum_counts[i] - counts[i, none_j]
        if exposed_count == 0:
            empty.append(f"(stratum {label!r}, A=1)")
            continue
        base_mean = sums[i, none_j] / counts[i, none_j]
        stratum_weight = stratum_counts[i] / n
        order = sorted((k, j) for j, k in enumerate(labels) if k != NONE_VERSION)
        for k, j in order:
            if counts[i, j] < SMALL_CELL:
                warnings.append(f"small cell (stratum {label!r}, version {k!r}): "
                                f"{int(counts[i, j])} records")
            effect = sums[i, j] / counts[i, j] - base_mean
            effects.append(StrainEffect(label, k, float(effect)))
            contrast += effect * (counts[i, j] / exposed_count) * stratum_weight
    if empty:
        raise EmptyCellError("no observations in cells: " + ", ".join(empty))

    return StrainAwareReport(outcome, n, tuple(effects), float(contrast),
                             tuple(cells), tuple(warnings))


def monte_carlo_study(scenario: Scenario, outcome: str, n: int, reps: int,
                      master_seed: int, workers: int = 1) -> McSummary:
    """Repeated sample-and-estimate against the exact contrast.

    Replicate ``r`` is seeded with ``mix_seed(master_seed, r)``; results are
    collected by replicate index, so the summary does not depend on
    ``workers``.  An empty estimator cell aborts the study (skipping
    replicates would bias the summary); the error names the replicate.
    """
    if reps < 1:
        raise ValueError("reps must be at least 1")
    exact_value = standardized_contrast(scenario, outcome)

    def run(r: int) -> float:
        cohort = sample_cohort(scenario, n, mix_seed(master_seed, r))
        try:
            return estimate_blind(cohort, outcome).estimate
        except EmptyCellError as exc:
            raise EmptyCellError(f"replicate {r}: {exc}") from None

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            estimates = list(pool.map(run, range(reps)))
    else:
        estimates = [run(r) for r in range(reps)]

    arr = np.array(estimates, dtype=np.float64)
    mean = float(arr.mean())
    se = float(arr.std(ddof=1)) if reps > 1 else 0.0
    return McSummary(outcome, reps, n, mean, se, exact_value, mean - exact_value)
