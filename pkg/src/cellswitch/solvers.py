"""Switch-vector search: exhaustive enumeration, greedy switch-off and a
binary-chromosome genetic algorithm.

All three return only formulation-feasible vectors and share a tie-break:
lower objective first, then more SBSs off, then the lexicographically
smallest vector. The all-on vector anchors every search, so the ecm
feasible set is never empty and the efm/wsm objective never ends above the
baseline.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .objectives import EvaluationReport, Evaluator, Formulation, SwitchVector
from .scenario import DOMAIN_GA, seeded_rng

EXHAUSTIVE_GAMMA_CAP = 20


class SearchSpaceError(ValueError):
    """Search space too large to enumerate."""


@dataclass
class SolverResult:
    best_delta: SwitchVector
    best_report: EvaluationReport
    evaluations: int
    wall_time_s: float


class GaConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    population: int = Field(default=32, ge=2)
    generations: int = Field(default=60, ge=1)
    crossover_rate: float = Field(default=0.9, ge=0.0, le=1.0)
    # None selects one expected flip per chromosome (1/gamma per bit)
    mutation_rate: float | None = Field(default=None, ge=0.0, le=1.0)
    elitism: int = Field(default=2, ge=0)
    tournament_size: int = Field(default=3, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def _elitism_below_population(self) -> "GaConfig":
        if self.elitism >= self.population:
            raise ValueError("elitism must be smaller than the population")
        return self


def _tiebreak_key(objective: float, delta: SwitchVector) -> tuple[float, int, tuple[int, ...]]:
    return (objective, delta.num_on, delta.bits)


def exhaustive(
    evaluator: Evaluator,
    formulation: Formulation,
    gamma_cap: int = EXHAUSTIVE_GAMMA_CAP,
) -> SolverResult:
    """Evaluate every ON/OFF combination and return the global optimum."""
    gamma = evaluator.gamma
    if gamma > gamma_cap:
        raise SearchSpaceError(
            f"exhaustive search over {gamma} SBSs needs 2^{gamma} evaluations; "
            f"cap is {gamma_cap} (the candidate count grows exponentially)"
        )
    start = time.perf_counter()
    start_evals = evaluator.evaluations

    best: tuple[tuple[float, int, tuple[int, ...]], EvaluationReport] | None = None
    for code in range(2**gamma):
        delta = SwitchVector.from_bits((code >> (gamma - 1 - i)) & 1 for i in range(gamma))
        report = evaluator.evaluate(delta)
        if not evaluator.feasible(report, formulation):
            continue
        key = _tiebreak_key(evaluator.objective(report, formulation), delta)
        if best is None or key < best[0]:
            best = (key, report)

    assert best is not None  # the all-on vector is always feasible
    return SolverResult(
        best_delta=best[1].delta,
        best_report=best[1],
        evaluations=evaluator.evaluations - start_evals,
        wall_time_s=time.perf_counter() - start,
    )


def greedy(evaluator: Evaluator, formulation: Formulation) -> SolverResult:
    """Iteratively switch off the SBS whose removal improves the objective
    most, starting from all-on; stops when no feasible improving move is
    left. Needs at most gamma*(gamma+1)/2 + 1 evaluations."""
    start = time.perf_counter()
    start_evals = evaluator.evaluations

    current = SwitchVector.all_on(evaluator.gamma)
    current_report = evaluator.evaluate(current)
    current_obj = evaluator.objective(current_report, formulation)

    while True:
        best_move: tuple[float, EvaluationReport] | None = None
        for i, bit in enumerate(current.bits):
            if bit == 0:
                continue
            cand = SwitchVector.from_bits(
                current.bits[:i] + (0,) + current.bits[i + 1 :]
            )
            report = evaluator.evaluate(cand)
            if not evaluator.feasible(report, formulation):
                continue
            obj = evaluator.objective(report, formulation)
            if obj < current_obj and (best_move is None or obj < best_move[0]):
                best_move = (obj, report)
        if best_move is None:
            break
        current_obj, current_report = best_move
        current = current_report.delta

    return SolverResult(
        best_delta=current,
        best_report=current_report,
        evaluations=evaluator.evaluations - start_evals,
        wall_time_s=time.perf_counter() - start,
    )


def genetic(
    evaluator: Evaluator, formulation: Formulation, config: GaConfig | None = None
) -> SolverResult:
    """Binary-chromosome GA with tournament selection, uniform crossover,
    per-bit mutation and elitism; deterministic for a given seed.

    Infeasible chromosomes rank behind every feasible one, and the result is
    the best feasible vector ever evaluated, so elitism preserves an optimum
    present in any generation.
    """
    cfg = config or GaConfig()
    gamma = evaluator.gamma
    mutation = cfg.mutation_rate if cfg.mutation_rate is not None else 1.0 / gamma
    rng = seeded_rng(cfg.seed, DOMAIN_GA)
    start = time.perf_counter()
    start_evals = evaluator.evaluations

    def rank_key(report: EvaluationReport) -> tuple:
        feasible = evaluator.feasible(report, formulation)
        return (0 if feasible else 1, *_tiebreak_key(evaluator.objective(report, formulation), report.delta))

    best: tuple[tuple, EvaluationReport] | None = None

    def register(report: EvaluationReport) -> tuple:
        nonlocal best
        key = rank_key(report)
        if evaluator.feasible(report, formulation) and (best is None or key < best[0]):
            best = (key, report)
        return key

    population = [SwitchVector.all_on(gamma)]
    population += [
        SwitchVector.from_bits(rng.integers(0, 2, size=gamma))
        for _ in range(cfg.population - 1)
    ]
    keys = [register(evaluator.evaluate(ind)) for ind in population]

    def tournament() -> SwitchVector:
        picks = rng.integers(0, cfg.population, size=cfg.tournament_size)
        winner = min(picks, key=lambda j: keys[j])
        return population[winner]

    for _ in range(cfg.generations):
        ranked = sorted(range(cfg.population), key=lambda j: keys[j])
        next_pop = [population[j] for j in ranked[: cfg.elitism]]
        while len(next_pop) < cfg.population:
            p1, p2 = tournament(), tournament()
            if rng.random() < cfg.crossover_rate:
                mask = rng.random(gamma) < 0.5
                child_bits = np.where(mask, p1.bits, p2.bits)
            else:
                child_bits = np.asarray(p1.bits)
            flips = rng.random(gamma) < mutation
            child_bits = np.where(flips, 1 - child_bits, child_bits)
            next_pop.append(SwitchVector.from_bits(child_bits))
        population = next_pop
        keys = [register(evaluator.evaluate(ind)) for ind in population]

    assert best is not None
    return SolverResult(
        best_delta=best[1].delta,
        best_report=best[1],
        evaluations=evaluator.evaluations - start_evals,
        wall_time_s=time.perf_counter() - start,
    )


SOLVERS = {
    "exhaustive": exhaustive,
    "greedy": greedy,
    "ga": genetic,
}


def solve(
    evaluator: Evaluator,
    formulation: Formulation,
    solver: str,
    ga_config: GaConfig | None = None,
    gamma_cap: int = EXHAUSTIVE_GAMMA_CAP,
) -> SolverResult:
    """Dispatch by solver name; unknown names raise ValueError."""
    if solver == "exhaustive":
        return exhaustive(evaluator, formulation, gamma_cap)
    if solver == "greedy":
        return greedy(evaluator, formulation)
    if solver == "ga":
        return genetic(evaluator, formulation, ga_config)
    raise ValueError(f"unknown solver {solver!r}; expected one of {sorted(SOLVERS)}")
