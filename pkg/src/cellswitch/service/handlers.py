"""Service-layer functions mapping request models to response models.

These are the single entry points for both the HTTP routes and the CLI.
"""

from __future__ import annotations

from .. import __version__
from ..harness import (
    COMPARE_COLUMNS,
    SWEEP_COLUMNS,
    compare_solvers,
    rows_to_csv,
    run_demo,
    run_sweep,
)
from ..objectives import Evaluator, SwitchVector
from ..propagation import build_link_table
from ..scenario import generate_scenario
from ..solvers import solve
from . import schemas


def handle_health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


def handle_generate(req: schemas.ScenarioRequest) -> schemas.ScenarioResponse:
    return schemas.ScenarioResponse(scenario=generate_scenario(req.config, req.seed))


def _evaluator(req) -> Evaluator:
    scenario = generate_scenario(req.config, req.seed)
    table = build_link_table(scenario)
    return Evaluator(scenario, table, weights=req.weights, rate_policy=req.rate_policy)


def handle_evaluate(req: schemas.EvaluateRequest) -> schemas.EvaluateResponse:
    evaluator = _evaluator(req)
    report = evaluator.evaluate(SwitchVector.from_bits(req.delta))
    return schemas.EvaluateResponse(
        delta=list(report.delta.bits),
        power_w=report.power_w,
        unconnected=report.unconnected,
        dissatisfied=report.dissatisfied,
        wsm_score=report.wsm_score,
        ecm_feasible=report.ecm_feasible,
        power_before_w=evaluator.baseline.power_w,
        unconnected_before=evaluator.baseline.unconnected,
    )


def handle_solve(req: schemas.SolveRequest) -> schemas.SolveResponse:
    evaluator = _evaluator(req)
    result = solve(evaluator, req.formulation, req.solver, req.ga)
    report = result.best_report
    return schemas.SolveResponse(
        best_delta=list(result.best_delta.bits),
        off_sbs_ids=list(result.best_delta.off_sbs_ids()),
        power_before_w=evaluator.baseline.power_w,
        power_after_w=report.power_w,
        unconnected_before=evaluator.baseline.unconnected,
        unconnected_after=report.unconnected,
        dissatisfied=report.dissatisfied,
        wsm_score=report.wsm_score,
        ecm_feasible=report.ecm_feasible,
        evaluations=result.evaluations,
        wall_time_s=result.wall_time_s,
    )


def handle_sweep(req: schemas.SweepRequest) -> schemas.SweepResponse:
    rows = run_sweep(req.spec, req.config)
    return schemas.SweepResponse(csv_text=rows_to_csv(rows, SWEEP_COLUMNS), n_rows=len(rows))


def handle_compare(req: schemas.CompareRequest) -> schemas.CompareResponse:
    rows = compare_solvers(req.spec, req.config)
    return schemas.CompareResponse(
        csv_text=rows_to_csv(rows, COMPARE_COLUMNS), n_rows=len(rows)
    )


def handle_demo(req: schemas.DemoRequest) -> schemas.DemoResponse:
    demo = run_demo(req.seed, req.config)
    return schemas.DemoResponse(
        report_text=demo.render(),
        delta=list(demo.delta.bits),
        off_sbs_ids=list(demo.off_sbs_ids),
        least_loaded_sbs_ids=list(demo.least_loaded_sbs_ids),
        moved_users=demo.moved_users,
        power_before_w=demo.power_before_w,
        power_after_w=demo.power_after_w,
        unconnected_before=demo.unconnected_before,
        unconnected_after=demo.unconnected_after,
        ecm_feasible=demo.ecm_feasible,
    )
