"""Request/response models for the HTTP service.

The CLI builds these same models and runs the handlers in-process, so the
wire format and the command line stay in lockstep.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..harness import DEFAULT_DEMO_SEED, SweepSpec
from ..objectives import Formulation, RatePolicy
from ..scenario import Scenario, ScenarioConfig
from ..solvers import GaConfig


class HealthResponse(BaseModel):
    status: str
    version: str


class ScenarioRequest(BaseModel):
    config: ScenarioConfig = ScenarioConfig()
    seed: int | None = None


class ScenarioResponse(BaseModel):
    scenario: Scenario


class EvaluateRequest(BaseModel):
    config: ScenarioConfig = ScenarioConfig()
    seed: int | None = None
    delta: list[int]
    weights: tuple[float, float, float] = (1.0, 1.0, 1.0)
    rate_policy: RatePolicy = RatePolicy.PER_USER


class EvaluateResponse(BaseModel):
    delta: list[int]
    power_w: float
    unconnected: int
    dissatisfied: int
    wsm_score: float
    ecm_feasible: bool
    power_before_w: float
    unconnected_before: int


class SolveRequest(BaseModel):
    config: ScenarioConfig = ScenarioConfig()
    seed: int | None = None
    formulation: Formulation = Formulation.ECM
    solver: str = "exhaustive"
    weights: tuple[float, float, float] = (1.0, 1.0, 1.0)
    rate_policy: RatePolicy = RatePolicy.PER_USER
    ga: GaConfig = GaConfig()


class SolveResponse(BaseModel):
    best_delta: list[int]
    off_sbs_ids: list[int]
    power_before_w: float
    power_after_w: float
    unconnected_before: int
    unconnected_after: int
    dissatisfied: int
    wsm_score: float
    ecm_feasible: bool
    evaluations: int
    wall_time_s: float


class SweepRequest(BaseModel):
    spec: SweepSpec = SweepSpec()
    config: ScenarioConfig = ScenarioConfig()


class SweepResponse(BaseModel):
    csv_text: str
    n_rows: int


class CompareRequest(BaseModel):
    spec: SweepSpec = SweepSpec()
    config: ScenarioConfig = ScenarioConfig()


class CompareResponse(BaseModel):
    csv_text: str
    n_rows: int


class DemoRequest(BaseModel):
    seed: int = Field(default=DEFAULT_DEMO_SEED, ge=0)
    config: ScenarioConfig | None = None


class DemoResponse(BaseModel):
    report_text: str
    delta: list[int]
    off_sbs_ids: list[int]
    least_loaded_sbs_ids: list[int]
    moved_users: list[tuple[int, int, int]]
    power_before_w: float
    power_after_w: float
    unconnected_before: int
    unconnected_after: int
    ecm_feasible: bool
