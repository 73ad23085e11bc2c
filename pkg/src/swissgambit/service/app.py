"""HTTP face of the simulation laboratory.

Campaigns run synchronously in the request; this is a compute service
for one operator, not a multi-tenant queue.  The command-line client
mounts this app in-process by default, so every feature works without a
running daemon, and ``swissgambit serve`` exposes the same app over a
socket when a shared instance is wanted.
"""

from __future__ import annotations

from dataclasses import asdict

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import outcome, trf
from ..harness import (
    TOURNAMENT_COLUMNS,
    run_campaign_data,
    simulate_tournament,
    summary_dict,
    tournament_row,
    write_outputs,
)
from ..pairing import ColorInfeasibleError, PairingInfeasibleError, PairingSystem, pair_round
from ..presets import PRESETS, resolve
from . import schemas


def create_app() -> FastAPI:
    app = FastAPI(title="swissgambit", version=_version())

    @app.exception_handler(ValueError)
    async def _bad_value(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(PairingInfeasibleError)
    @app.exception_handler(ColorInfeasibleError)
    async def _bad_pairing(request: Request, exc: Exception) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", version=_version())

    @app.get("/presets", response_model=list[schemas.PresetInfo])
    def presets() -> list[schemas.PresetInfo]:
        out = []
        for preset in PRESETS.values():
            campaigns = [
                schemas.PresetCampaign(label=label, config=schemas.ConfigModel.from_core(config))
                for label, config in resolve(preset.name)
            ]
            out.append(
                schemas.PresetInfo(
                    name=preset.name, description=preset.description, campaigns=campaigns
                )
            )
        return out

    @app.post("/calibrate", response_model=schemas.CalibrateResponse)
    def calibrate() -> schemas.CalibrateResponse:
        params = outcome.fit_surrogate(outcome.TABLE_ANCHORS)
        return schemas.CalibrateResponse(
            **asdict(params), max_table_residual=outcome.max_table_residual(params)
        )

    @app.post("/simulate", response_model=schemas.SimulateResponse)
    def simulate(request: schemas.SimulateRequest) -> schemas.SimulateResponse:
        config = request.config.to_core()
        seed = request.seed if request.seed is not None else config.tournament_seed(request.tournament_index)
        course, ranking = simulate_tournament(config, seed)
        return schemas.SimulateResponse(
            seed=seed,
            course=schemas.CourseModel.from_core(course),
            ranking=list(ranking.order),
        )

    @app.post("/campaigns/run", response_model=schemas.CampaignResponse)
    def run_campaign_endpoint(request: schemas.CampaignRequest) -> schemas.CampaignResponse:
        merged = {**request.config.model_dump(), **request.overrides.as_dict()}
        config = schemas.ConfigModel(**merged).to_core()
        data = run_campaign_data(config)
        out_dir = None
        if request.out_dir:
            out_dir = str(write_outputs(data, request.out_dir))
        rows = [list(tournament_row(run, config.heuristic)) for run in data.runs]
        return schemas.CampaignResponse(
            summary=summary_dict(data),
            tournaments=schemas.TournamentRowsModel(columns=list(TOURNAMENT_COLUMNS), rows=rows),
            out_dir=out_dir,
        )

    @app.post("/pairing/next-round", response_model=schemas.PairResponse)
    def next_round(request: schemas.PairRequest) -> schemas.PairResponse:
        system = PairingSystem(request.system)
        rnd = pair_round(request.course.to_core(), system)
        return schemas.PairResponse(round=schemas.RoundModel.from_core(rnd))

    @app.post("/trf/export", response_model=schemas.TrfExportResponse)
    def trf_export(request: schemas.TrfExportRequest) -> schemas.TrfExportResponse:
        return schemas.TrfExportResponse(trf=trf.export_trf(request.course.to_core()))

    @app.post("/trf/import", response_model=schemas.TrfImportResponse)
    def trf_import(request: schemas.TrfImportRequest) -> schemas.TrfImportResponse:
        course = trf.import_trf(request.trf)
        return schemas.TrfImportResponse(course=schemas.CourseModel.from_core(course))

    return app


def _version() -> str:
    from .. import __version__

    return __version__
