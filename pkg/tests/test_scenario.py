"""Scenario model, mixture conversions, renaming, validation."""

import math

import pytest

from strainmix import (
    CONDITIONAL,
    PositivityError,
    Scenario,
    Stratum,
    UnknownStratumError,
    VersionMixture,
    conditional_entries,
    marginal_entries,
    mixture_given_infection,
    prevalence,
    rename_versions,
    s_b,
    s_c,
    validate_scenario,
)
from tests.conftest import random_scenario, rng_for


def make(mixture, risks=None, weight=1.0, outcomes=("y",)):
    versions = list(mixture.entries)
    if mixture.form == CONDITIONAL:
        versions = ["none", *versions]
    if risks is None:
        risks = {o: {k: 0.5 for k in versions} for o in outcomes}
    return Scenario("t", outcomes, (Stratum("l0", weight, mixture, risks),))


def test_versions_and_strains_ordering():
    st = s_b().strata[0]
    assert st.versions() == ("none", "s1", "s2", "s3")
    assert st.strains() == ("s1", "s2", "s3")
    st = s_c().strata[0]
    # conditional form lists "none" first, then the declared strains
    assert st.versions() == ("none", "s1", "s2", "s3")


def test_stratum_lookup_unknown_label():
    with pytest.raises(UnknownStratumError, match="nope"):
        s_b().stratum("nope")


def test_prevalence_both_forms():
    assert prevalence(s_b().strata[0]) == pytest.approx(0.5, abs=1e-15)
    assert prevalence(s_c().strata[0]) == 0.5


def test_mixture_given_infection_marginal():
    prev, cond = mixture_given_infection(s_b(), "l0")
    assert prev == pytest.approx(0.5, abs=1e-15)
    assert cond["s1"] == pytest.approx(0.2, abs=1e-12)
    assert cond["s2"] == pytest.approx(0.5, abs=1e-12)
    assert cond["s3"] == pytest.approx(0.3, abs=1e-12)
    assert sum(cond.values()) == pytest.approx(1.0, abs=1e-12)


def test_mixture_given_infection_conditional_passthrough():
    prev, cond = mixture_given_infection(s_c(), "l0")
    assert prev == 0.5
    assert cond == {"s1": 0.4, "s2": 0.1, "s3": 0.5}


def test_conversion_round_trip_random():
    for case in range(50):
        scenario = random_scenario(rng_for(case))
        for st in scenario.strata:
            prev, cond = conditional_entries(st.mixture)
            marg = dict(marginal_entries(st.mixture))
            assert abs(sum(marg.values()) - 1.0) < 1e-9
            assert marg["none"] == pytest.approx(1.0 - prev, abs=1e-12)
            for k, p in cond:
                assert marg[k] == pytest.approx(p * prev, abs=1e-12)


def test_conditional_entries_rejects_zero_prevalence():
    mix = VersionMixture({"none": 1.0, "s1": 0.0})
    with pytest.raises(PositivityError):
        conditional_entries(mix)


def test_rename_versions_bijection():
    renamed = rename_versions(s_b(), {"s1": "alpha", "s3": "gamma"})
    st = renamed.strata[0]
    assert set(st.strains()) == {"alpha", "s2", "gamma"}
    assert st.risk("hosp", "alpha") == 0.25
    assert st.risk("hosp", "none") == 0.05


def test_rename_versions_rejects_none_and_collisions():
    with pytest.raises(ValueError, match="none"):
        rename_versions(s_b(), {"none": "zero"})
    with pytest.raises(ValueError, match="collides"):
        rename_versions(s_b(), {"s1": "s2"})


def test_validate_fixture_scenarios_ok():
    for fn in (s_b, s_c):
        assert validate_scenario(fn()).ok


def test_validate_weights_not_stochastic():
    sc = make(VersionMixture({"none": 0.5, "s1": 0.5}), weight=0.9)
    report = validate_scenario(sc)
    assert not report.ok
    assert any(v.rule == "weights-stochastic" and "0.9" in v.message
               for v in report.violations)


def test_validate_weight_out_of_range():
    sc = make(VersionMixture({"none": 0.5, "s1": 0.5}), weight=1.5)
    rules = {v.rule for v in validate_scenario(sc).violations}
    assert "weight-range" in rules


def test_validate_marginal_requires_none():
    sc = make(VersionMixture({"s1": 1.0}),
              risks={"y": {"s1": 0.5}})
    report = validate_scenario(sc)
    assert any(v.rule == "none-version" and v.where == "stratum 'l0'"
               for v in report.violations)


def test_validate_conditional_excludes_none():
    mix = VersionMixture({"none": 0.5, "s1": 0.5}, form=CONDITIONAL, prevalence=0.5)
    sc = make(mix, risks={"y": {"none": 0.1, "s1": 0.5}})
    assert any(v.rule == "none-version"
               for v in validate_scenario(sc).violations)


def test_validate_conditional_needs_prevalence():
    mix = VersionMixture({"s1": 1.0}, form=CONDITIONAL)
    sc = make(mix)
    assert any(v.rule == "prevalence-missing"
               for v in validate_scenario(sc).violations)


def test_validate_prevalence_range():
    mix = VersionMixture({"s1": 1.0}, form=CONDITIONAL, prevalence=1.2)
    sc = make(mix)
    assert any(v.rule == "prevalence-range"
               for v in validate_scenario(sc).violations)


def test_validate_mixture_not_stochastic():
    sc = make(VersionMixture({"none": 0.5, "s1": 0.4}))
    assert any(v.rule == "mixture-stochastic"
               for v in validate_scenario(sc).violations)


def test_validate_mixture_probability_range():
    sc = make(VersionMixture({"none": -0.2, "s1": 1.2}))
    report = validate_scenario(sc)
    assert sum(v.rule == "mixture-range" for v in report.violations) == 2


def test_validate_risk_rules():
    mix = VersionMixture({"none": 0.5, "s1": 0.5})
    sc = make(mix, risks={"y": {"none": 0.1, "s1": 1.5, "ghost": 0.2}})
    rules = {v.rule for v in validate_scenario(sc).violations}
    assert "risk-range" in rules
    assert "risk-undeclared" in rules

    sc = make(mix, risks={"y": {"none": 0.1}})
    report = validate_scenario(sc)
    assert any(v.rule == "risk-missing" and "s1" in v.where
               for v in report.violations)

    sc = make(mix, risks={})
    assert any(v.rule == "risk-missing"
               for v in validate_scenario(sc).violations)


def test_validate_risk_table_for_undeclared_outcome():
    mix = VersionMixture({"none": 0.5, "s1": 0.5})
    risks = {"y": {"none": 0.1, "s1": 0.2}, "phantom": {"none": 0.1, "s1": 0.2}}
    sc = make(mix, risks=risks)
    assert any(v.rule == "risk-undeclared" and "phantom" in v.where
               for v in validate_scenario(sc).violations)


def test_validate_empty_scenario_and_duplicates():
    sc = Scenario("t", (), ())
    rules = {v.rule for v in validate_scenario(sc).violations}
    assert {"outcomes-nonempty", "strata-nonempty"} <= rules

    st = s_b().strata[0]
    sc = Scenario("t", ("hosp", "hosp"), (st, st))
    rules = {v.rule for v in validate_scenario(sc).violations}
    assert {"outcome-unique", "stratum-unique"} <= rules


def test_validate_nan_probability_rejected():
    sc = make(VersionMixture({"none": 0.5, "s1": math.nan}))
    assert any(v.rule == "mixture-range"
               for v in validate_scenario(sc).violations)


def test_validate_collects_all_violations():
    mix = VersionMixture({"none": 0.3, "s1": 0.3})
    sc = make(mix, risks={"y": {"none": 2.0}}, weight=0.8)
    report = validate_scenario(sc)
    assert len(report.violations) >= 3
