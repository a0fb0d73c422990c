"""Named example scenarios shipped with the package.

The same five worlds exist as JSON files under ``strainmix/data/`` (see
:func:`fixture_path`) so CLI and service examples can be run verbatim.
"""

from __future__ import annotations

from importlib import resources

from .scenario import CONDITIONAL, Scenario, Stratum, VersionMixture


def s_triv() -> Scenario:
    """Single stratum, single strain: the contrast equals the strain effect."""
    return Scenario(
        name="s_triv",
        outcomes=("hosp",),
        strata=(
            Stratum(
                label="l0",
                weight=1.0,
                mixture=VersionMixture({"none": 0.5, "s1": 0.5}),
                risks={"hosp": {"none": 0.1, "s1": 0.3}},
            ),
        ),
    )


def s_b() -> Scenario:
    """Three strains, the null strain (s2) carrying half the infected mass."""
    return Scenario(
        name="s_b",
        outcomes=("hosp",),
        strata=(
            Stratum(
                label="l0",
                weight=1.0,
                mixture=VersionMixture({"none": 0.5, "s1": 0.10, "s2": 0.25, "s3": 0.15}),
                risks={"hosp": {"none": 0.05, "s1": 0.25, "s2": 0.05, "s3": 0.45}},
            ),
        ),
    )


def s_c() -> Scenario:
    """Same strain effects as :func:`s_b` but the null strain is rare;
    declared in conditional-on-infection form."""
    return Scenario(
        name="s_c",
        outcomes=("hosp",),
        strata=(
            Stratum(
                label="l0",
                weight=1.0,
                mixture=VersionMixture({"s1": 0.4, "s2": 0.1, "s3": 0.5},
                                       form=CONDITIONAL, prevalence=0.5),
                risks={"hosp": {"none": 0.05, "s1": 0.25, "s2": 0.05, "s3": 0.45}},
            ),
        ),
    )


def s_conf() -> Scenario:
    """Two strata with different mixtures and risks: confounded world."""
    return Scenario(
        name="s_conf",
        outcomes=("hosp",),
        strata=(
            Stratum(
                label="young",
                weight=0.6,
                mixture=VersionMixture({"none": 0.7, "s1": 0.2, "s2": 0.1}),
                risks={"hosp": {"none": 0.02, "s1": 0.10, "s2": 0.02}},
            ),
            Stratum(
                label="old",
                weight=0.4,
                mixture=VersionMixture({"none": 0.4, "s1": 0.3, "s2": 0.3}),
                risks={"hosp": {"none": 0.10, "s1": 0.30, "s2": 0.10}},
            ),
        ),
    )


def s_two_outcomes() -> Scenario:
    """Two outcomes over the same strains: every strain carries the same
    "fever" risk but different "hosp" risks, so version relevance differs
    by outcome."""
    return Scenario(
        name="s_two_outcomes",
        outcomes=("fever", "hosp"),
        strata=(
            Stratum(
                label="l0",
                weight=1.0,
                mixture=VersionMixture({"none": 0.5, "s1": 0.2, "s2": 0.3}),
                risks={
                    "fever": {"none": 0.1, "s1": 0.3, "s2": 0.3},
                    "hosp": {"none": 0.05, "s1": 0.10, "s2": 0.30},
                },
            ),
        ),
    )


FIXTURES = {
    "s_triv": s_triv,
    "s_b": s_b,
    "s_c": s_c,
    "s_conf": s_conf,
    "s_two_outcomes": s_two_outcomes,
}


def fixture_path(name: str):
    """Filesystem path of a shipped fixture's JSON file."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}")
    return resources.files("strainmix").joinpath("data", f"{name}.json")
