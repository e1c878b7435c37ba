"""Objective values for candidate switch vectors.

Three formulations share one evaluation pipeline:

* ``efm`` minimizes total network power alone;
* ``wsm`` minimizes a weighted sum of normalized power, unconnected-user
  count and dissatisfied-user count;
* ``ecm`` minimizes power subject to no loss of connectivity and no
  per-user rate degradation against the all-on baseline.

All stochastic channel draws are frozen per snapshot, so before/after
comparisons isolate the effect of the switch vector; the all-on vector is
therefore always ecm-feasible.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .power import max_network_power_w, network_power
from .propagation import LinkTable
from .radio import AssociationState, associate
from .scenario import Scenario


class Formulation(str, Enum):
    EFM = "efm"
    WSM = "wsm"
    ECM = "ecm"


class RatePolicy(str, Enum):
    PER_USER = "per_user"
    AGGREGATE = "aggregate"


@dataclass(frozen=True)
class SwitchVector:
    """ON/OFF pattern over the SBSs; the decision variable of every solver."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("switch vector entries must be 0 or 1")

    @classmethod
    def all_on(cls, gamma: int) -> "SwitchVector":
        return cls(bits=(1,) * gamma)

    @classmethod
    def from_bits(cls, bits) -> "SwitchVector":
        return cls(bits=tuple(int(b) for b in bits))

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def num_on(self) -> int:
        return sum(self.bits)

    @property
    def num_off(self) -> int:
        return len(self.bits) - self.num_on

    def off_sbs_ids(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, b in enumerate(self.bits) if b == 0)


@dataclass
class Baseline:
    """All-SBS-on reference the objectives compare against."""

    association: AssociationState
    rates_bps: np.ndarray
    unconnected: int
    power_w: float


@dataclass
class EvaluationReport:
    """Metrics of one candidate switch vector."""

    delta: SwitchVector
    power_w: float
    unconnected: int
    dissatisfied: int
    wsm_score: float
    ecm_feasible: bool
    association: AssociationState


def count_unconnected(state: AssociationState) -> int:
    """Users with no active BS satisfying sensitivity and RB availability."""
    return int(np.sum(state.serving < 0))


def count_dissatisfied(baseline_rates: np.ndarray, after_rates: np.ndarray) -> int:
    """Users whose rate dropped strictly below their pre-switching rate.

    Users disconnected by the switch have rate 0 and count whenever they had
    a positive rate before.
    """
    return int(np.sum(after_rates < baseline_rates))


def wsm_score(
    power_w: float,
    unconnected: int,
    dissatisfied: int,
    weights: tuple[float, float, float],
    p_max_w: float,
    chi: int,
) -> float:
    """Weighted sum of normalized power, unconnected and dissatisfied terms."""
    alpha, beta, upsilon = weights
    for name, w in (("alpha", alpha), ("beta", beta), ("upsilon", upsilon)):
        if not 0.0 <= w <= 1.0:
            raise ValueError(f"weight {name}={w} outside [0, 1]")
    if p_max_w <= 0.0:
        raise ValueError("normalization power must be positive")
    if chi <= 0:
        raise ValueError("user count must be positive")
    return alpha * power_w / p_max_w + beta * unconnected / chi + upsilon * dissatisfied / chi


def ecm_feasible(
    baseline: Baseline,
    after: AssociationState,
    rate_policy: RatePolicy = RatePolicy.PER_USER,
) -> bool:
    """Connectivity and rate constraints against the all-on baseline.

    Feasible when the unconnected count did not grow and the rate condition
    holds: per-user (no user connected in both states got slower) or
    aggregate (total rate did not drop), by policy.
    """
    if count_unconnected(after) > baseline.unconnected:
        return False
    if rate_policy == RatePolicy.PER_USER:
        both = baseline.association.connected & after.connected
        return bool(np.all(after.rate_bps[both] >= baseline.rates_bps[both]))
    return bool(after.rate_bps.sum() >= baseline.rates_bps.sum())


def p_max(scenario: Scenario) -> float:
    """Normalization constant: all BSs active at full load."""
    return max_network_power_w(scenario.base_stations)


class Evaluator:
    """Memoizing evaluation pipeline for one scenario snapshot.

    Builds the all-on baseline once, then maps switch vectors to reports.
    Distinct vectors are associated, powered and scored independently, so
    candidate evaluations can safely run in parallel over the shared
    immutable inputs; the cache keeps solver costs bounded by the number of
    distinct vectors visited.
    """

    def __init__(
        self,
        scenario: Scenario,
        table: LinkTable,
        weights: tuple[float, float, float] = (1.0, 1.0, 1.0),
        rate_policy: RatePolicy = RatePolicy.PER_USER,
    ) -> None:
        self.scenario = scenario
        self.table = table
        self.weights = weights
        self.rate_policy = rate_policy
        self.gamma = scenario.gamma
        self.p_max_w = p_max(scenario)
        self._cache: dict[tuple[int, ...], EvaluationReport] = {}
        self.evaluations = 0

        base_state = associate(scenario, SwitchVector.all_on(self.gamma).bits, table)
        base_power = network_power(scenario, SwitchVector.all_on(self.gamma).bits, base_state)
        self.baseline = Baseline(
            association=base_state,
            rates_bps=base_state.rate_bps.copy(),
            unconnected=count_unconnected(base_state),
            power_w=base_power.total_w,
        )

    def evaluate(self, delta: SwitchVector) -> EvaluationReport:
        if len(delta) != self.gamma:
            raise ValueError(f"switch vector length {len(delta)} != gamma {self.gamma}")
        cached = self._cache.get(delta.bits)
        if cached is not None:
            return cached

        state = associate(self.scenario, delta.bits, self.table)
        report = EvaluationReport(
            delta=delta,
            power_w=network_power(self.scenario, delta.bits, state).total_w,
            unconnected=count_unconnected(state),
            dissatisfied=count_dissatisfied(self.baseline.rates_bps, state.rate_bps),
            wsm_score=0.0,
            ecm_feasible=ecm_feasible(self.baseline, state, self.rate_policy),
            association=state,
        )
        report.wsm_score = wsm_score(
            report.power_w,
            report.unconnected,
            report.dissatisfied,
            self.weights,
            self.p_max_w,
            self.scenario.chi,
        )
        self._cache[delta.bits] = report
        self.evaluations += 1
        return report

    def objective(self, report: EvaluationReport, formulation: Formulation) -> float:
        if formulation == Formulation.WSM:
            return report.wsm_score
        return report.power_w

    def feasible(self, report: EvaluationReport, formulation: Formulation) -> bool:
        return report.ecm_feasible if formulation == Formulation.ECM else True
