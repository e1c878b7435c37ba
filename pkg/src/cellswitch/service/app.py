"""FastAPI application exposing the simulator over HTTP."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..solvers import SearchSpaceError
from . import handlers, schemas


def create_app() -> FastAPI:
    app = FastAPI(
        title="cellswitch",
        description=(
            "Energy-aware cell switching for a HAPS-assisted network: "
            "scenario generation, switch-vector evaluation, solvers and sweeps."
        ),
    )

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return handlers.handle_health()

    @app.post("/scenario/generate", response_model=schemas.ScenarioResponse)
    def generate(req: schemas.ScenarioRequest) -> schemas.ScenarioResponse:
        return _run(handlers.handle_generate, req)

    @app.post("/evaluate", response_model=schemas.EvaluateResponse)
    def evaluate(req: schemas.EvaluateRequest) -> schemas.EvaluateResponse:
        return _run(handlers.handle_evaluate, req)

    @app.post("/solve", response_model=schemas.SolveResponse)
    def solve(req: schemas.SolveRequest) -> schemas.SolveResponse:
        return _run(handlers.handle_solve, req)

    @app.post("/sweep", response_model=schemas.SweepResponse)
    def sweep(req: schemas.SweepRequest) -> schemas.SweepResponse:
        return _run(handlers.handle_sweep, req)

    @app.post("/compare", response_model=schemas.CompareResponse)
    def compare(req: schemas.CompareRequest) -> schemas.CompareResponse:
        return _run(handlers.handle_compare, req)

    @app.post("/demo", response_model=schemas.DemoResponse)
    def demo(req: schemas.DemoRequest) -> schemas.DemoResponse:
        return _run(handlers.handle_demo, req)

    return app


def _run(handler, req):
    try:
        return handler(req)
    except (ValueError, SearchSpaceError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


app = create_app()
