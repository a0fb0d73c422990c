"""Closed-form population quantities for a scenario, plus an independent
brute-force oracle.

Everything here is a pure function of an immutable :class:`Scenario`.  The
central identity implemented and tested throughout: the standardized
contrast

    sum_l { E[Y | A=1, L=l] - E[Y | A=0, L=l] } Pr(L=l)

equals the mixture-weighted average of strain-specific effects

    sum_{l,k} { E[Y^k | L=l] - E[Y^0 | L=l] } Pr(K=k | A=1, L=l) Pr(L=l)

so the reported number depends on the strain composition among the
infected, not only on the strain effects themselves.

Summation order is fixed everywhere (strata in declared order, versions in
ascending label order) so repeated runs are byte-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    NonStochasticError,
    PositivityError,
    ScenarioValidationError,
    UnknownOutcomeError,
    UnknownStrainError,
    UnknownStratumError,
)
from .scenario import (
    NONE_VERSION,
    SUM_TOLERANCE,
    Scenario,
    Stratum,
    conditional_entries,
    marginal_entries,
    prevalence,
    validate_scenario,
)


@dataclass(frozen=True)
class ContrastTerm:
    """One (stratum, strain) contribution to the standardized contrast."""

    stratum: str
    version: str
    effect: float        # E[Y^k | L=l] - E[Y^0 | L=l]
    weight: float        # Pr(K=k | A=1, L=l) * Pr(L=l)
    contribution: float  # effect * weight


@dataclass(frozen=True)
class ContrastReport:
    """Standardized contrast with its trial-view arms and decomposition."""

    scenario: str
    outcome: str
    contrast: float
    arm1_mean: float
    arm0_mean: float
    terms: tuple[ContrastTerm, ...]


@dataclass(frozen=True)
class StrainEffect:
    stratum: str
    version: str
    effect: float


@dataclass(frozen=True)
class TransportTarget:
    """Target population: stratum weights plus per-stratum conditional
    (on infection) strain mixtures.  Prevalences never enter the
    weighted-average form of the contrast, so none are needed."""

    weights: dict[str, float]
    mixtures: dict[str, dict[str, float]]


@dataclass(frozen=True)
class TransportReport:
    scenario: str
    outcome: str
    source_contrast: float
    target_contrast: float
    mixture_divergence: dict[str, float]  # per target stratum, total variation
    weight_divergence: float              # total variation between L-distributions


@dataclass(frozen=True)
class DriftPoint:
    time: str
    contrast: float
    mixtures: dict[str, dict[str, float]]


@dataclass(frozen=True)
class DriftReport:
    scenario: str
    outcome: str
    points: tuple[DriftPoint, ...]


@dataclass(frozen=True)
class StratumIrrelevance:
    stratum: str
    spread: float  # max - min strain risk
    irrelevant: bool


@dataclass(frozen=True)
class IrrelevanceReport:
    scenario: str
    outcome: str
    tolerance: float
    strata: tuple[StratumIrrelevance, ...]
    irrelevant: bool = field(default=False)


def _require_valid(scenario: Scenario) -> None:
    report = validate_scenario(scenario)
    if not report.ok:
        first = report.violations[0]
        raise ScenarioValidationError(
            f"invalid scenario: {first.where}: {first.message}"
            + (f" (+{len(report.violations) - 1} more)" if len(report.violations) > 1 else ""),
            report,
        )


def _require_outcome(scenario: Scenario, outcome: str) -> None:
    if outcome not in scenario.outcomes:
        raise UnknownOutcomeError(f"unknown outcome {outcome!r}")


def _require_positivity(scenario: Scenario) -> None:
    # Both arms must have mass in every stratum: prevalence 0 leaves the
    # infected arm undefined, prevalence 1 the uninfected arm.
    bad = [f"{st.label!r} (prevalence {prevalence(st)!r})"
           for st in scenario.strata if not 0.0 < prevalence(st) < 1.0]
    if bad:
        raise PositivityError("positivity violated in strata: " + ", ".join(bad))


def _sorted_conditional(stratum: Stratum) -> tuple[tuple[str, float], ...]:
    _, strains = conditional_entries(stratum.mixture)
    return tuple(sorted(strains))


def observed_risk(scenario: Scenario, outcome: str, a: int, stratum_label: str) -> float:
    """``E[Y | A=a, L=l]``: the no-infection risk for ``a=0``, the
    mixture-weighted strain risk for ``a=1``."""
    _require_valid(scenario)
    _require_outcome(scenario, outcome)
    st = scenario.stratum(stratum_label)
    if a not in (0, 1):
        raise ValueError(f"exposure arm must be 0 or 1, got {a!r}")
    prev = prevalence(st)
    if a == 0:
        if prev >= 1.0:
            raise PositivityError(
                f"stratum {stratum_label!r} has prevalence 1: E[Y | A=0] undefined")
        return st.risk(outcome, NONE_VERSION)
    if prev <= 0.0:
        raise PositivityError(
            f"stratum {stratum_label!r} has prevalence 0: E[Y | A=1] undefined")
    return sum(p * st.risk(outcome, k) for k, p in _sorted_conditional(st))


def standardized_contrast(scenario: Scenario, outcome: str) -> float:
    """The often-reported standardized difference between exposure arms."""
    _require_valid(scenario)
    _require_outcome(scenario, outcome)
    _require_positivity(scenario)
    total = 0.0
    for st in scenario.strata:
        risk1 = sum(p * st.risk(outcome, k) for k, p in _sorted_conditional(st))
        risk0 = st.risk(outcome, NONE_VERSION)
        total += (risk1 - risk0) * st.weight
    return total


def trial_view(scenario: Scenario, outcome: str) -> tuple[float, float]:
    """Arm means of the hypothetical trial that assigns versions with their
    exposure- and stratum-conditional frequencies; the arm difference equals
    the standardized contrast."""
    _require_valid(scenario)
    _require_outcome(scenario, outcome)
    _require_positivity(scenario)
    arm1 = 0.0
    arm0 = 0.0
    for st in scenario.strata:
        arm1 += sum(p * st.risk(outcome, k) for k, p in _sorted_conditional(st)) * st.weight
        arm0 += st.risk(outcome, NONE_VERSION) * st.weight
    return arm1, arm0


def strain_specific_effect(scenario: Scenario, outcome: str, version: str,
                           stratum_label: str) -> StrainEffect:
    """``E[Y^k | L=l] - E[Y^0 | L=l]`` for one strain in one stratum."""
    _require_valid(scenario)
    _require_outcome(scenario, outcome)
    st = scenario.stratum(stratum_label)
    if version == NONE_VERSION or version not in st.strains():
        raise UnknownStrainError(f"{version!r} is not a strain of stratum {stratum_label!r}")
    effect = st.risk(outcome, version) - st.risk(outcome, NONE_VERSION)
    return StrainEffect(stratum_label, version, effect)


def decompose_contrast(scenario: Scenario, outcome: str) -> ContrastReport:
    """Per-(stratum, strain) decomposition of the standardized contrast.

    The ``contrast`` field is computed through :func:`standardized_contrast`
    itself, so it matches that operation bit for bit; the term contributions
    sum to it within float accumulation error.  One term is emitted per
    strain declared in the stratum's mixture, zero-mass strains included.
    """
    contrast = standardized_contrast(scenario, outcome)
    arm1, arm0 = trial_view(scenario, outcome)
    terms = []
    for st in scenario.strata:
        risk0 = st.risk(outcome, NONE_VERSION)
        for k, p in _sorted_conditional(st):
            effect = st.risk(outcome, k) - risk0
            weight = p * st.weight
            terms.append(ContrastTerm(st.label, k, effect, weight, effect * weight))
    return ContrastReport(scenario.name, outcome, contrast, arm1, arm0, tuple(terms))


def oracle_contrast(scenario: Scenario, outcome: str) -> float:
    """Independent check: the same contrast from the full joint table.

    Enumerates every ``(L, K, Y)`` cell by direct multiplication, derives
    ``A = 1[K != "none"]``, and standardizes the arm means over the table.
    Shares no arithmetic with :func:`standardized_contrast`; agreement
    between the two is asserted throughout the test suite.
    """
    _require_valid(scenario)
    _require_outcome(scenario, outcome)
    _require_positivity(scenario)

    cells = []  # (stratum index, exposed, y, probability)
    for i, st in enumerate(scenario.strata):
        for k, p in marginal_entries(st.mixture):
            r = st.risk(outcome, k)
            mass = st.weight * p
            exposed = k != NONE_VERSION
            cells.append((i, exposed, 1, mass * r))
            cells.append((i, exposed, 0, mass * (1.0 - r)))

    total = 0.0
    for i in range(len(scenario.strata)):
        mass_l = sum(p for j, _, _, p in cells if j == i)
        mass_1 = sum(p for j, e, _, p in cells if j == i and e)
        mass_0 = sum(p for j, e, _, p in cells if j == i and not e)
        y1 = sum(p for j, e, y, p in cells if j == i and e and y == 1)
        y0 = sum(p for j, e, y, p in cells if j == i and not e and y == 1)
        total += (y1 / mass_1 - y0 / mass_0) * mass_l
    return total


def _check_distribution(entries: dict[str, float], what: str) -> None:
    for k, p in entries.items():
        if not 0.0 <= p <= 1.0:
            raise NonStochasticError(f"{what}: probability {p!r} for {k!r} out of [0, 1]")
    if entries and abs(sum(entries.values()) - 1.0) > SUM_TOLERANCE:
        raise NonStochasticError(f"{what} not stochastic (sum {sum(entries.values())!r})")


def _tv_distance(p: dict[str, float], q: dict[str, float]) -> float:
    support = sorted(set(p) | set(q))
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in support)


def _weighted_average_contrast(scenario: Scenario, outcome: str,
                               weights: dict[str, float],
                               mixtures: dict[str, dict[str, float]]) -> float:
    # The reduced weighted-average form; used for both sides of a transport
    # so that identical distributions give bitwise-identical contrasts.
    total = 0.0
    for st in scenario.strata:
        if st.label not in weights:
            continue
        w = weights[st.label]
        risk0 = st.risk(outcome, NONE_VERSION)
        mix = mixtures[st.label]
        for k in sorted(mix):
            total += (st.risk(outcome, k) - risk0) * (mix[k] * w)
    return total


def transport_contrast(source: Scenario, outcome: str, target: TransportTarget) -> TransportReport:
    """Contrast the source world's strain effects would produce in a target
    population with different stratum weights and strain mixtures.

    Strain effects are held fixed at the source's values; only the
    distributions move.  Zero divergence on both axes therefore returns the
    source contrast exactly.
    """
    _require_valid(source)
    _require_outcome(source, outcome)
    _require_positivity(source)

    source_labels = {st.label for st in source.strata}
    for label in list(target.weights) + list(target.mixtures):
        if label not in source_labels:
            raise UnknownStratumError(f"target names unknown stratum {label!r}")
    _check_distribution(target.weights, "target stratum weights")
    for label, mix in target.mixtures.items():
        st = source.stratum(label)
        for k in mix:
            if k == NONE_VERSION or k not in st.strains():
                raise UnknownStrainError(
                    f"target mixture for stratum {label!r} names {k!r}, "
                    f"which has no strain effect in the source")
        _check_distribution(mix, f"target mixture for stratum {label!r}")
    for label, w in target.weights.items():
        if w > 0.0 and label not in target.mixtures:
            raise UnknownStratumError(f"target provides no conditional mixture for stratum {label!r}")

    source_weights = {st.label: st.weight for st in source.strata}
    source_mixtures = {st.label: dict(_sorted_conditional(st)) for st in source.strata}

    source_contrast = _weighted_average_contrast(source, outcome, source_weights, source_mixtures)
    target_contrast = _weighted_average_contrast(
        source, outcome, target.weights,
        {l: target.mixtures.get(l, {}) for l in target.weights})

    mixture_div = {}
    for st in source.strata:
        if st.label in target.mixtures:
            mixture_div[st.label] = _tv_distance(source_mixtures[st.label],
                                                 target.mixtures[st.label])
    weight_div = _tv_distance(source_weights, dict(target.weights))

    return TransportReport(source.name, outcome, source_contrast, target_contrast,
                           mixture_div, weight_div)


def target_from_scenario(scenario: Scenario) -> TransportTarget:
    """Convenience: read a full scenario as a transport target, keeping its
    stratum weights and conditional mixtures and ignoring its risks."""
    weights = {st.label: st.weight for st in scenario.strata}
    mixtures = {st.label: dict(_sorted_conditional(st)) for st in scenario.strata}
    return TransportTarget(weights, mixtures)


def contrast_timeseries(scenario: Scenario, outcome: str,
                        schedule: list[tuple[str, dict[str, dict[str, float]]]]) -> DriftReport:
    """Contrast under drifting strain composition, risks held fixed.

    Each schedule entry supplies per-stratum conditional mixtures for one
    time tag; the stratum weights stay at the source's.  Errors from an
    entry are re-raised annotated with its time tag.
    """
    _require_valid(scenario)
    _require_outcome(scenario, outcome)
    _require_positivity(scenario)
    weights = {st.label: st.weight for st in scenario.strata}
    points = []
    for tag, mixtures in schedule:
        try:
            report = transport_contrast(scenario, outcome, TransportTarget(weights, mixtures))
        except (UnknownStratumError, UnknownStrainError, NonStochasticError) as exc:
            raise type(exc)(f"schedule time {tag!r}: {exc}") from exc
        points.append(DriftPoint(str(tag), report.target_contrast,
                                 {l: dict(m) for l, m in mixtures.items()}))
    return DriftReport(scenario.name, outcome, tuple(points))


def version_irrelevance_check(scenario: Scenario, outcome: str,
                              tolerance: float = 0.0) -> IrrelevanceReport:
    """Whether strain identity is irrelevant to this outcome at the
    stratum-mean level: the spread of strain risks within each stratum must
    not exceed ``tolerance``.  (Individual-level irrelevance is stronger and
    not determined by risks alone.)"""
    _require_valid(scenario)
    _require_outcome(scenario, outcome)
    rows = []
    for st in scenario.strata:
        risks = [st.risk(outcome, k) for k in st.strains()]
        spread = max(risks) - min(risks) if risks else 0.0
        rows.append(StratumIrrelevance(st.label, spread, spread <= tolerance))
    return IrrelevanceReport(scenario.name, outcome, tolerance, tuple(rows),
                             irrelevant=all(r.irrelevant for r in rows))
