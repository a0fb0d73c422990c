"""Discrete world model: strata, version mixtures and per-version risks.

A :class:`Scenario` fully specifies the joint law of a finite population:
``Pr(L = l)`` (stratum weights), ``Pr(K = k | L = l)`` (the version mixture,
where the reserved version ``"none"`` means no infection) and the Bernoulli
risk ``E[Y | K = k, L = l]`` for every declared outcome.  The binary
exposure is never stored: it is the coarsening ``A = 1 iff K != "none"``.

Mixtures may be declared in two parameterizations:

* ``marginal`` -- probabilities over all versions including ``"none"``;
* ``conditional`` -- probabilities over strains only, conditional on
  infection, together with a ``prevalence`` value ``Pr(A = 1 | L = l)``.

All consumers normalize through :func:`marginal_entries` /
:func:`conditional_entries`, so the two forms are interchangeable.
Scenario values are treated as immutable once built; validation and every
downstream computation never mutate them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import PositivityError, UnknownStratumError

NONE_VERSION = "none"

MARGINAL = "marginal"
CONDITIONAL = "conditional"

# Tolerance for user-supplied probability sums; internal identities are
# checked far tighter (1e-12) by the test suite.
SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class VersionMixture:
    """Distribution over exposure versions within one stratum.

    ``entries`` maps version label to probability, in declared order.
    ``form`` selects the parameterization; ``prevalence`` is required for
    the conditional form and must be absent for the marginal form.
    """

    entries: dict[str, float]
    form: str = MARGINAL
    prevalence: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "entries", {str(k): float(v) for k, v in self.entries.items()})
        if self.prevalence is not None:
            object.__setattr__(self, "prevalence", float(self.prevalence))


@dataclass(frozen=True)
class Stratum:
    """One confounder level: its weight ``Pr(L = l)``, version mixture and
    per-outcome risk table ``E[Y | K = k, L = l]``."""

    label: str
    weight: float
    mixture: VersionMixture
    risks: dict[str, dict[str, float]]

    def __post_init__(self):
        object.__setattr__(self, "weight", float(self.weight))
        object.__setattr__(
            self,
            "risks",
            {str(o): {str(k): float(r) for k, r in table.items()} for o, table in self.risks.items()},
        )

    def versions(self) -> tuple[str, ...]:
        """All version labels of this stratum including ``"none"``."""
        if self.mixture.form == CONDITIONAL:
            return (NONE_VERSION, *self.mixture.entries)
        return tuple(self.mixture.entries)

    def strains(self) -> tuple[str, ...]:
        """Version labels excluding ``"none"``, in declared order."""
        return tuple(k for k in self.versions() if k != NONE_VERSION)

    def risk(self, outcome: str, version: str) -> float:
        return self.risks[outcome][version]


@dataclass(frozen=True)
class Scenario:
    """Named collection of outcomes and strata; the engine's ground truth."""

    name: str
    outcomes: tuple[str, ...]
    strata: tuple[Stratum, ...]

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "strata", tuple(self.strata))

    def stratum(self, label: str) -> Stratum:
        for st in self.strata:
            if st.label == label:
                return st
        raise UnknownStratumError(f"unknown stratum {label!r}")


@dataclass(frozen=True)
class Violation:
    """One failed invariant, with enough context to locate it."""

    rule: str
    where: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...] = field(default_factory=tuple)


def marginal_entries(mixture: VersionMixture) -> tuple[tuple[str, float], ...]:
    """Mixture as ``(label, Pr(K = k | L = l))`` pairs including ``"none"``.

    Conditional-form mixtures are expanded as ``none = 1 - prevalence`` and
    ``k = prevalence * Pr(K = k | A = 1, L = l)``, with ``"none"`` first.
    """
    if mixture.form == CONDITIONAL:
        prev = mixture.prevalence if mixture.prevalence is not None else 0.0
        return ((NONE_VERSION, 1.0 - prev), *((k, p * prev) for k, p in mixture.entries.items()))
    return tuple(mixture.entries.items())


def conditional_entries(mixture: VersionMixture) -> tuple[float, tuple[tuple[str, float], ...]]:
    """Mixture as ``(prevalence, ((strain, Pr(K = k | A = 1, L = l)), ...))``.

    Raises :class:`PositivityError` when the mixture puts no mass on
    infection, since the conditional distribution is then undefined.
    """
    if mixture.form == CONDITIONAL:
        prev = mixture.prevalence if mixture.prevalence is not None else 0.0
        if prev <= 0.0:
            raise PositivityError("prevalence is 0: no infected version mass")
        return prev, tuple(mixture.entries.items())
    prev = 1.0 - mixture.entries.get(NONE_VERSION, 0.0)
    if prev <= 0.0:
        raise PositivityError("prevalence is 0: no infected version mass")
    # p/prev can round a hair past 1 for a near-total strain; clamp so the
    # result is always a probability
    strains = tuple((k, min(p / prev, 1.0))
                    for k, p in mixture.entries.items() if k != NONE_VERSION)
    return prev, strains


def prevalence(stratum: Stratum) -> float:
    """``Pr(A = 1 | L = l)`` regardless of mixture form."""
    if stratum.mixture.form == CONDITIONAL:
        return stratum.mixture.prevalence if stratum.mixture.prevalence is not None else 0.0
    return 1.0 - stratum.mixture.entries.get(NONE_VERSION, 0.0)


def mixture_given_infection(scenario: Scenario, stratum_label: str) -> tuple[float, dict[str, float]]:
    """Prevalence and strain distribution conditional on infection.

    Marginal-form input is renormalized by dividing each strain mass by the
    prevalence ``1 - Pr(K = "none" | L = l)``; conditional-form input is
    returned unchanged.
    """
    st = scenario.stratum(stratum_label)
    prev, strains = conditional_entries(st.mixture)
    return prev, dict(strains)


def rename_versions(scenario: Scenario, mapping: dict[str, str]) -> Scenario:
    """Scenario with strain labels renamed through a bijection.

    The reserved ``"none"`` label cannot be renamed; the mapping must not
    merge two labels within any stratum.
    """
    if mapping.get(NONE_VERSION, NONE_VERSION) != NONE_VERSION:
        raise ValueError('"none" cannot be renamed')

    def rn(label: str) -> str:
        return label if label == NONE_VERSION else mapping.get(label, label)

    strata = []
    for st in scenario.strata:
        new_entries = {rn(k): p for k, p in st.mixture.entries.items()}
        if len(new_entries) != len(st.mixture.entries):
            raise ValueError(f"rename collides within stratum {st.label!r}")
        mixture = VersionMixture(new_entries, st.mixture.form, st.mixture.prevalence)
        risks = {o: {rn(k): r for k, r in table.items()} for o, table in st.risks.items()}
        strata.append(Stratum(st.label, st.weight, mixture, risks))
    return Scenario(scenario.name, scenario.outcomes, tuple(strata))


def _check_probability(value, rule, where, what, out):
    if not isinstance(value, (int, float)) or isinstance(value, bool) or math.isnan(value):
        out.append(Violation(rule, where, f"{what} is not a number"))
        return False
    if not 0.0 <= value <= 1.0:
        out.append(Violation(rule, where, f"{what} {value!r} out of [0, 1]"))
        return False
    return True


def validate_scenario(scenario: Scenario) -> ValidationReport:
    """Check every structural invariant; violations are returned, not raised."""
    v: list[Violation] = []

    if not scenario.outcomes:
        v.append(Violation("outcomes-nonempty", "scenario", "no outcomes declared"))
    seen = set()
    for o in scenario.outcomes:
        if not o:
            v.append(Violation("outcome-label", "scenario", "empty outcome name"))
        if o in seen:
            v.append(Violation("outcome-unique", "scenario", f"duplicate outcome {o!r}"))
        seen.add(o)

    if not scenario.strata:
        v.append(Violation("strata-nonempty", "scenario", "no strata declared"))
    seen = set()
    for st in scenario.strata:
        if not st.label:
            v.append(Violation("stratum-label", "scenario", "empty stratum label"))
        if st.label in seen:
            v.append(Violation("stratum-unique", "scenario", f"duplicate stratum {st.label!r}"))
        seen.add(st.label)

    total = 0.0
    weights_ok = True
    for st in scenario.strata:
        weights_ok &= _check_probability(st.weight, "weight-range", f"stratum {st.label!r}", "weight", v)
        total += st.weight
    if scenario.strata and weights_ok and abs(total - 1.0) > SUM_TOLERANCE:
        v.append(Violation("weights-stochastic", "scenario",
                           f"strata weights not stochastic (sum {total!r})"))

    for st in scenario.strata:
        _validate_stratum(scenario, st, v)

    return ValidationReport(ok=not v, violations=tuple(v))


def _validate_stratum(scenario: Scenario, st: Stratum, v: list[Violation]) -> None:
    where = f"stratum {st.label!r}"
    mix = st.mixture

    if mix.form not in (MARGINAL, CONDITIONAL):
        v.append(Violation("mixture-form", where, f"unknown mixture form {mix.form!r}"))
        return

    for label in mix.entries:
        if not label:
            v.append(Violation("version-label", where, "empty version label"))

    entries_ok = all([
        _check_probability(p, "mixture-range", f"{where} version {k!r}", "probability", v)
        for k, p in mix.entries.items()
    ])

    if mix.form == MARGINAL:
        if NONE_VERSION not in mix.entries:
            v.append(Violation("none-version", where, 'marginal mixture must include "none" exactly once'))
        if mix.prevalence is not None:
            v.append(Violation("mixture-form", where, "prevalence given for a marginal-form mixture"))
        if entries_ok and abs(sum(mix.entries.values()) - 1.0) > SUM_TOLERANCE:
            v.append(Violation("mixture-stochastic", where,
                               f"mixture not stochastic (sum {sum(mix.entries.values())!r})"))
    else:
        if NONE_VERSION in mix.entries:
            v.append(Violation("none-version", where, 'conditional mixture must not include "none"'))
        if mix.prevalence is None:
            v.append(Violation("prevalence-missing", where, "conditional mixture requires a prevalence"))
        else:
            _check_probability(mix.prevalence, "prevalence-range", where, "prevalence", v)
        if entries_ok and mix.entries and abs(sum(mix.entries.values()) - 1.0) > SUM_TOLERANCE:
            v.append(Violation("mixture-stochastic", where,
                               f"conditional mixture not stochastic (sum {sum(mix.entries.values())!r})"))

    declared = set(st.versions())
    for outcome in scenario.outcomes:
        owhere = f"{where} outcome {outcome!r}"
        table = st.risks.get(outcome)
        if table is None:
            v.append(Violation("risk-missing", owhere, "no risk table for this outcome"))
            continue
        for k in declared:
            if k not in table:
                v.append(Violation("risk-missing", f"{owhere} version {k!r}", "no risk entry"))
        for k, r in table.items():
            if k not in declared:
                v.append(Violation("risk-undeclared", f"{owhere} version {k!r}",
                                   "risk entry for undeclared version"))
            else:
                _check_probability(r, "risk-range", f"{owhere} version {k!r}", "risk", v)
    for outcome in st.risks:
        if outcome not in scenario.outcomes:
            v.append(Violation("risk-undeclared", f"{where} outcome {outcome!r}",
                               "risk table for undeclared outcome"))
