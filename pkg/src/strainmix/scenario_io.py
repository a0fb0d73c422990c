"""Scenario file parsing and serialization.

The on-disk format is strict JSON (unknown keys rejected, no comments):

    {
      "name": "s_b",
      "outcomes": ["hosp"],
      "strata": [
        {
          "label": "l0",
          "weight": 1.0,
          "versions": [
            {"label": "none", "prob": 0.5, "risk": 0.05},
            {"label": "s1", "prob": 0.1, "risk": 0.25}
          ]
        }
      ]
    }

Each version entry carries either ``risks`` (a map outcome -> probability)
or, when exactly one outcome is declared, the shorthand ``risk``.  A
per-stratum ``prevalence`` key switches the version list to the
conditional-on-infection form: the listed versions are then strains only
(``"none"`` must not appear) with probabilities conditional on infection,
and the no-infection risk moves to a stratum-level ``none_risks`` map (or
``none_risk`` shorthand under a single declared outcome).
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import ScenarioSchemaError, ScenarioSyntaxError, ScenarioValidationError
from .scenario import (
    CONDITIONAL,
    NONE_VERSION,
    Scenario,
    Stratum,
    VersionMixture,
    validate_scenario,
)

_SCENARIO_KEYS = {"name", "outcomes", "strata"}
_STRATUM_KEYS = {"label", "weight", "versions", "prevalence", "none_risk", "none_risks"}
_VERSION_KEYS = {"label", "prob", "risk", "risks"}


def _require_keys(mapping: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ScenarioSchemaError(f"{where}: unknown key {unknown[0]!r}")


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ScenarioSchemaError(message)


def _as_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioSchemaError(f"{where}: expected a number, got {type(value).__name__}")
    return float(value)


def _as_text(value, where: str) -> str:
    if not isinstance(value, str) or not value:
        raise ScenarioSchemaError(f"{where}: expected non-empty text")
    return value


def scenario_from_mapping(data) -> Scenario:
    """Build a :class:`Scenario` from parsed JSON, strictly; schema errors
    name the offending stratum or version."""
    _require(isinstance(data, dict), "scenario document must be a JSON object")
    _require_keys(data, _SCENARIO_KEYS, "scenario")
    for key in ("name", "outcomes", "strata"):
        _require(key in data, f"scenario: missing key {key!r}")

    name = _as_text(data["name"], "scenario name")
    _require(isinstance(data["outcomes"], list), "scenario: 'outcomes' must be a list")
    outcomes = tuple(_as_text(o, "outcome name") for o in data["outcomes"])
    _require(isinstance(data["strata"], list), "scenario: 'strata' must be a list")

    strata = [_stratum_from_mapping(entry, outcomes) for entry in data["strata"]]
    return Scenario(name, outcomes, tuple(strata))


def _stratum_from_mapping(entry, outcomes: tuple[str, ...]) -> Stratum:
    _require(isinstance(entry, dict), "stratum entry must be a JSON object")
    _require_keys(entry, _STRATUM_KEYS, "stratum")
    for key in ("label", "weight", "versions"):
        _require(key in entry, f"stratum: missing key {key!r}")
    label = _as_text(entry["label"], "stratum label")
    where = f"stratum {label!r}"
    weight = _as_number(entry["weight"], f"{where} weight")
    conditional = "prevalence" in entry

    _require(isinstance(entry["versions"], list), f"{where}: 'versions' must be a list")
    entries: dict[str, float] = {}
    risks: dict[str, dict[str, float]] = {o: {} for o in outcomes}
    for vdata in entry["versions"]:
        _require(isinstance(vdata, dict), f"{where}: version entry must be a JSON object")
        _require_keys(vdata, _VERSION_KEYS, f"{where} version")
        for key in ("label", "prob"):
            _require(key in vdata, f"{where} version: missing key {key!r}")
        vlabel = _as_text(vdata["label"], f"{where} version label")
        vwhere = f"{where} version {vlabel!r}"
        _require(vlabel not in entries, f"{vwhere}: duplicate version label")
        entries[vlabel] = _as_number(vdata["prob"], f"{vwhere} prob")
        _read_risk_entry(vdata, vlabel, vwhere, outcomes, risks)

    if conditional:
        _require(NONE_VERSION not in entries,
                 f'{where}: conditional-form versions must not include "none"')
        prev = _as_number(entry["prevalence"], f"{where} prevalence")
        mixture = VersionMixture(entries, form=CONDITIONAL, prevalence=prev)
        _read_risk_entry(entry, NONE_VERSION, f'{where} "none"', outcomes, risks,
                         single_key="none_risk", map_key="none_risks")
    else:
        for key in ("none_risk", "none_risks"):
            _require(key not in entry,
                     f"{where}: {key!r} is only valid with a 'prevalence' key")
        _require(NONE_VERSION in entries, f'{where}: missing the "none" version')
        mixture = VersionMixture(entries)
    return Stratum(label, weight, mixture, risks)


def _read_risk_entry(data, vlabel, vwhere, outcomes, risks,
                     single_key: str = "risk", map_key: str = "risks") -> None:
    has_single = single_key in data
    has_map = map_key in data
    _require(has_single != has_map,
             f"{vwhere}: exactly one of {single_key!r} or {map_key!r} required")
    if has_single:
        _require(len(outcomes) == 1,
                 f"{vwhere}: {single_key!r} shorthand requires exactly one declared outcome")
        risks[outcomes[0]][vlabel] = _as_number(data[single_key], f"{vwhere} risk")
    else:
        table = data[map_key]
        _require(isinstance(table, dict), f"{vwhere}: {map_key!r} must be a map")
        for outcome, r in table.items():
            _require(outcome in outcomes, f"{vwhere}: risk for undeclared outcome {outcome!r}")
            risks[outcome][vlabel] = _as_number(r, f"{vwhere} risk for {outcome!r}")


def parse_scenario_file(data: bytes | str, validate: bool = True) -> Scenario:
    """Parse scenario JSON into a validated :class:`Scenario`.

    Raises :class:`ScenarioSyntaxError` with line/column context for
    malformed JSON, :class:`ScenarioSchemaError` for structural problems and
    :class:`ScenarioValidationError` when invariants fail.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        parsed = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(
            f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    scenario = scenario_from_mapping(parsed)
    if validate:
        report = validate_scenario(scenario)
        if not report.ok:
            details = "; ".join(f"{v.where}: {v.message}" for v in report.violations)
            raise ScenarioValidationError(f"scenario invalid: {details}", report)
    return scenario


def load_scenario(path: str | Path, validate: bool = True) -> Scenario:
    return parse_scenario_file(Path(path).read_bytes(), validate=validate)


def scenario_to_mapping(scenario: Scenario) -> dict:
    """Scenario as the documented JSON structure (declared order kept)."""
    strata = []
    for st in scenario.strata:
        entry: dict = {"label": st.label, "weight": st.weight}
        if st.mixture.form == CONDITIONAL:
            entry["prevalence"] = st.mixture.prevalence
            entry["none_risks"] = {o: st.risks[o][NONE_VERSION] for o in scenario.outcomes}
        entry["versions"] = [
            {"label": k, "prob": p,
             "risks": {o: st.risks[o][k] for o in scenario.outcomes}}
            for k, p in st.mixture.entries.items()
        ]
        strata.append(entry)
    return {"name": scenario.name, "outcomes": list(scenario.outcomes), "strata": strata}


def scenario_to_json(scenario: Scenario) -> bytes:
    from .reports import json_bytes

    return json_bytes(scenario_to_mapping(scenario))
