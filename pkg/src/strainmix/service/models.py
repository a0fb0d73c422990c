"""Pydantic request/response models for the HTTP service.

Request bodies mirror the scenario file schema one-to-one, so a scenario
JSON document can be pasted into the "scenario" field unchanged.  Unknown
keys are rejected, matching the strict file parser.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict

from ..exact import TransportTarget
from ..scenario import Scenario
from ..scenario_io import scenario_from_mapping


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class VersionSpec(_Strict):
    label: str
    prob: float
    risk: float | None = None
    risks: dict[str, float] | None = None


class StratumSpec(_Strict):
    label: str
    weight: float
    versions: list[VersionSpec]
    prevalence: float | None = None
    none_risk: float | None = None
    none_risks: dict[str, float] | None = None


class ScenarioSpec(_Strict):
    name: str
    outcomes: list[str]
    strata: list[StratumSpec]

    def to_scenario(self) -> Scenario:
        # route through the file parser so service and CLI accept exactly
        # the same documents
        return scenario_from_mapping(self.model_dump(exclude_none=True))


class TargetStratumSpec(_Strict):
    label: str
    versions: dict[str, float]


class TargetSpec(_Strict):
    weights: dict[str, float]
    strata: list[TargetStratumSpec]

    def to_target(self) -> TransportTarget:
        return TransportTarget(
            dict(self.weights),
            {s.label: dict(s.versions) for s in self.strata},
        )


class SchedulePointSpec(_Strict):
    time: float | str
    strata: list[TargetStratumSpec]


class ScenarioRequest(_Strict):
    scenario: ScenarioSpec
    outcome: str | None = None


class SimulateRequest(ScenarioRequest):
    n: int = 10000
    seed: int = 0


class McRequest(SimulateRequest):
    reps: int = 100
    workers: int = 1


class TransportRequest(ScenarioRequest):
    target: TargetSpec


class DriftRequest(ScenarioRequest):
    schedule: list[SchedulePointSpec]


class IrrelevanceRequest(ScenarioRequest):
    tolerance: float = 0.0


class ChartRequest(ScenarioRequest):
    schedule: list[SchedulePointSpec] | None = None


class ViolationModel(_Strict):
    rule: str
    where: str
    message: str


class ValidationResponse(_Strict):
    ok: bool
    violations: list[ViolationModel]


class ExactResponse(_Strict):
    scenario: str
    outcome: str
    contrast: float
    arm1_mean: float
    arm0_mean: float


class TermModel(_Strict):
    stratum: str
    version: str
    effect: float
    weight: float
    contribution: float


class ContrastResponse(_Strict):
    scenario: str
    outcome: str
    contrast: float
    arm1_mean: float
    arm0_mean: float
    terms: list[TermModel]


class TransportResponse(_Strict):
    scenario: str
    outcome: str
    source_contrast: float
    target_contrast: float
    mixture_divergence: dict[str, float]
    weight_divergence: float


class DriftPointModel(_Strict):
    time: str
    contrast: float
    mixtures: dict[str, dict[str, float]]


class DriftResponse(_Strict):
    scenario: str
    outcome: str
    points: list[DriftPointModel]


class StratumIrrelevanceModel(_Strict):
    stratum: str
    spread: float
    irrelevant: bool


class IrrelevanceResponse(_Strict):
    scenario: str
    outcome: str
    tolerance: float
    irrelevant: bool
    strata: list[StratumIrrelevanceModel]


class CellModel(_Strict):
    stratum: str
    n: int
    exposed: int
    unexposed: int


class EstimateResponse(_Strict):
    estimand: str
    outcome: str
    estimate: float
    n: int
    cells: list[CellModel]
    warnings: list[str]


class EffectModel(_Strict):
    stratum: str
    version: str
    effect: float


class VersionCellModel(_Strict):
    stratum: str
    version: str
    count: int


class AwareResponse(_Strict):
    outcome: str
    n: int
    contrast: float
    effects: list[EffectModel]
    cells: list[VersionCellModel]
    warnings: list[str]


class McResponse(_Strict):
    outcome: str
    reps: int
    n: int
    mean_estimate: float
    empirical_se: float
    exact_value: float
    mean_bias: float
