"""FastAPI application wrapping the engine.

Every endpoint is a pure function of its request body; the service holds no
state.  Domain errors surface as HTTP 422 with the error class name, so
clients can distinguish a positivity violation from a malformed scenario.
Run with ``strainmix serve`` or ``uvicorn strainmix.service.app:app``.
"""

from __future__ import annotations

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from ..charts import render_chart
from ..errors import EngineError, ScenarioSchemaError
from ..exact import (
    contrast_timeseries,
    decompose_contrast,
    standardized_contrast,
    transport_contrast,
    trial_view,
    version_irrelevance_check,
)
from ..reports import to_mapping
from ..scenario import validate_scenario
from ..simulate import estimate_aware, estimate_blind, monte_carlo_study, sample_cohort
from .models import (
    AwareResponse,
    ChartRequest,
    ContrastResponse,
    DriftRequest,
    DriftResponse,
    EstimateResponse,
    ExactResponse,
    IrrelevanceRequest,
    IrrelevanceResponse,
    McRequest,
    McResponse,
    ScenarioRequest,
    SimulateRequest,
    TransportRequest,
    TransportResponse,
    ValidationResponse,
)

app = FastAPI(
    title="strainmix",
    description="Causal contrasts for exposures with multiple latent versions.",
    version="0.1.0",
)


@app.exception_handler(EngineError)
async def _engine_error(_: Request, exc: EngineError) -> JSONResponse:
    return JSONResponse(status_code=422,
                        content={"error": type(exc).__name__, "detail": str(exc)})


@app.exception_handler(ScenarioSchemaError)
async def _schema_error(_: Request, exc: ScenarioSchemaError) -> JSONResponse:
    return JSONResponse(status_code=422,
                        content={"error": type(exc).__name__, "detail": str(exc)})


def _outcome(req: ScenarioRequest, scenario) -> str:
    return req.outcome if req.outcome is not None else scenario.outcomes[0]


@app.get("/health")
async def health() -> dict:
    return {"status": "ok"}


@app.post("/validate", response_model=ValidationResponse)
async def validate(req: ScenarioRequest) -> ValidationResponse:
    report = validate_scenario(req.scenario.to_scenario())
    return ValidationResponse(**to_mapping(report))


@app.post("/exact", response_model=ExactResponse)
async def exact(req: ScenarioRequest) -> ExactResponse:
    scenario = req.scenario.to_scenario()
    outcome = _outcome(req, scenario)
    arm1, arm0 = trial_view(scenario, outcome)
    return ExactResponse(scenario=scenario.name, outcome=outcome,
                         contrast=standardized_contrast(scenario, outcome),
                         arm1_mean=arm1, arm0_mean=arm0)


@app.post("/decompose", response_model=ContrastResponse)
async def decompose(req: ScenarioRequest) -> ContrastResponse:
    scenario = req.scenario.to_scenario()
    report = decompose_contrast(scenario, _outcome(req, scenario))
    return ContrastResponse(**to_mapping(report))


@app.post("/transport", response_model=TransportResponse)
async def transport(req: TransportRequest) -> TransportResponse:
    scenario = req.scenario.to_scenario()
    report = transport_contrast(scenario, _outcome(req, scenario),
                                req.target.to_target())
    return TransportResponse(**to_mapping(report))


@app.post("/drift", response_model=DriftResponse)
async def drift(req: DriftRequest) -> DriftResponse:
    scenario = req.scenario.to_scenario()
    schedule = [(str(p.time), {s.label: dict(s.versions) for s in p.strata})
                for p in req.schedule]
    report = contrast_timeseries(scenario, _outcome(req, scenario), schedule)
    return DriftResponse(**to_mapping(report))


@app.post("/irrelevance", response_model=IrrelevanceResponse)
async def irrelevance(req: IrrelevanceRequest) -> IrrelevanceResponse:
    scenario = req.scenario.to_scenario()
    report = version_irrelevance_check(scenario, _outcome(req, scenario),
                                       req.tolerance)
    return IrrelevanceResponse(**to_mapping(report))


@app.post("/simulate", response_model=EstimateResponse)
async def simulate(req: SimulateRequest) -> EstimateResponse:
    scenario = req.scenario.to_scenario()
    cohort = sample_cohort(scenario, req.n, req.seed)
    report = estimate_blind(cohort, _outcome(req, scenario))
    return EstimateResponse(**to_mapping(report))


@app.post("/aware", response_model=AwareResponse)
async def aware(req: SimulateRequest) -> AwareResponse:
    scenario = req.scenario.to_scenario()
    cohort = sample_cohort(scenario, req.n, req.seed)
    report = estimate_aware(cohort, _outcome(req, scenario))
    return AwareResponse(**to_mapping(report))


@app.post("/mc", response_model=McResponse)
async def mc(req: McRequest) -> McResponse:
    scenario = req.scenario.to_scenario()
    report = monte_carlo_study(scenario, _outcome(req, scenario), req.n,
                               req.reps, req.seed, workers=req.workers)
    return McResponse(**to_mapping(report))


@app.post("/chart")
async def chart(req: ChartRequest) -> Response:
    scenario = req.scenario.to_scenario()
    outcome = _outcome(req, scenario)
    if req.schedule is not None:
        schedule = [(str(p.time), {s.label: dict(s.versions) for s in p.strata})
                    for p in req.schedule]
        report = contrast_timeseries(scenario, outcome, schedule)
    else:
        report = decompose_contrast(scenario, outcome)
    return Response(content=render_chart(report), media_type="image/svg+xml")
