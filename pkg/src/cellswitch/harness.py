"""Sweep and comparison harness around the solver suite.

``run_sweep`` walks a grid of building-entry-loss values, user counts,
formulations and seeds. Every grid cell is solved once per mobility
snapshot and averaged; it emits one CSV row per user class plus one
network-wide row. ``compare_solvers`` benchmarks the three solvers on
identical instances under the constraint formulation, and
``run_demo`` runs the small 3-SBS/10-user switch-off walkthrough.

Sweep CSV columns:
    bel_db, users, formulation, weights, solver, seed, snapshots, scope,
    mean_rate_before_bps, mean_rate_after_bps, power_before_w,
    power_after_w, unconnected_before, unconnected_after, dissatisfied,
    mean_sbs_off

``scope`` is one of the three user classes or ``network`` (all users).
Rates average over every user of the scope, counting unconnected users at
rate 0; power, connectivity and dissatisfaction columns are network-wide
on every row. All rows are snapshot averages.

Comparison CSV columns:
    users, seed, solver, power_before_w, power_after_w, evaluations,
    wall_time_s, matches_exhaustive
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .objectives import Evaluator, Formulation, RatePolicy, SwitchVector
from .params import BSKind, UserClass
from .propagation import build_link_table
from .radio import AssociationState
from .scenario import Scenario, ScenarioConfig, generate_scenario, step_mobility
from .solvers import EXHAUSTIVE_GAMMA_CAP, GaConfig, SearchSpaceError, exhaustive, solve

DEFAULT_DEMO_SEED = 5

DEFAULT_BEL_VALUES = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
DEFAULT_USER_COUNTS = (200, 400, 600, 800, 1000, 1200)
DEFAULT_WEIGHT_SETS = ((1.0, 1.0, 1.0), (1.0, 0.3, 0.25), (1.0, 0.1, 0.1))

SWEEP_COLUMNS = (
    "bel_db",
    "users",
    "formulation",
    "weights",
    "solver",
    "seed",
    "snapshots",
    "scope",
    "mean_rate_before_bps",
    "mean_rate_after_bps",
    "power_before_w",
    "power_after_w",
    "unconnected_before",
    "unconnected_after",
    "dissatisfied",
    "mean_sbs_off",
)

COMPARE_COLUMNS = (
    "users",
    "seed",
    "solver",
    "power_before_w",
    "power_after_w",
    "evaluations",
    "wall_time_s",
    "matches_exhaustive",
)


class SweepSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    bel_values: tuple[float, ...] = DEFAULT_BEL_VALUES
    user_counts: tuple[int, ...] = DEFAULT_USER_COUNTS
    formulations: tuple[Formulation, ...] = (Formulation.EFM,)
    wsm_weight_sets: tuple[tuple[float, float, float], ...] = DEFAULT_WEIGHT_SETS
    solver: str = "greedy"
    seeds: tuple[int, ...] = (0,)
    snapshots: int = Field(default=10, ge=1)
    rate_policy: RatePolicy = RatePolicy.PER_USER
    ga: GaConfig = GaConfig()

    @model_validator(mode="after")
    def _validate(self) -> "SweepSpec":
        for name in ("bel_values", "user_counts", "formulations", "wsm_weight_sets", "seeds"):
            if not getattr(self, name):
                raise ValueError(f"{name} must not be empty")
        if any(not 0.0 <= b <= 30.0 for b in self.bel_values):
            raise ValueError("BEL values must lie in [0, 30] dB")
        if self.solver not in ("exhaustive", "greedy", "ga"):
            raise ValueError(f"unknown solver {self.solver!r}")
        return self


def _snapshot_chain(scenario: Scenario, count: int) -> list[Scenario]:
    chain = [scenario]
    for _ in range(count - 1):
        chain.append(step_mobility(chain[-1]))
    return chain


def _class_indices(scenario: Scenario) -> dict[str, np.ndarray]:
    groups: dict[str, np.ndarray] = {
        uc.value: np.array(
            [u.id - 1 for u in scenario.users if u.user_class == uc], dtype=int
        )
        for uc in UserClass
    }
    groups["network"] = np.arange(scenario.chi)
    return groups


def _check_exhaustive_cap(spec_solver: str, gamma: int) -> None:
    if spec_solver == "exhaustive" and gamma > EXHAUSTIVE_GAMMA_CAP:
        raise SearchSpaceError(
            f"sweep requests exhaustive search with gamma={gamma} above the "
            f"cap of {EXHAUSTIVE_GAMMA_CAP}"
        )


def run_sweep(spec: SweepSpec, config: ScenarioConfig) -> list[dict]:
    """Run the sweep grid and return CSV-ready row dicts."""
    _check_exhaustive_cap(spec.solver, config.gamma)

    cells: list[tuple[Formulation, tuple[float, float, float] | None]] = []
    for f in spec.formulations:
        if f == Formulation.WSM:
            cells.extend((f, w) for w in spec.wsm_weight_sets)
        else:
            cells.append((f, None))

    scenario_cache: dict[tuple[int, int], list[Scenario]] = {}
    rows: list[dict] = []
    for bel in spec.bel_values:
        for chi in spec.user_counts:
            for formulation, weights in cells:
                for seed in spec.seeds:
                    key = (chi, seed)
                    if key not in scenario_cache:
                        base = generate_scenario(
                            config.model_copy(update={"chi": chi}), seed
                        )
                        scenario_cache[key] = _snapshot_chain(base, spec.snapshots)
                    rows.extend(
                        _sweep_cell_rows(
                            spec, scenario_cache[key], bel, chi, formulation, weights, seed
                        )
                    )
    return rows


def _sweep_cell_rows(
    spec: SweepSpec,
    snapshots: list[Scenario],
    bel: float,
    chi: int,
    formulation: Formulation,
    weights: tuple[float, float, float] | None,
    seed: int,
) -> list[dict]:
    eval_weights = weights if weights is not None else (1.0, 1.0, 1.0)
    acc: dict[str, list[float]] = {
        "rate_before": [],
        "rate_after": [],
        "power_before": [],
        "power_after": [],
        "u_before": [],
        "u_after": [],
        "dissatisfied": [],
        "sbs_off": [],
    }
    class_rates: dict[str, dict[str, list[float]]] = {}

    for snap in snapshots:
        radio = snap.radio.model_copy(update={"bel_db": bel})
        scenario = snap.model_copy(update={"radio": radio})
        table = build_link_table(scenario)
        evaluator = Evaluator(
            scenario, table, weights=eval_weights, rate_policy=spec.rate_policy
        )
        result = solve(evaluator, formulation, spec.solver, spec.ga)
        report = result.best_report

        groups = _class_indices(scenario)
        for scope, idx in groups.items():
            slot = class_rates.setdefault(scope, {"before": [], "after": []})
            slot["before"].append(float(np.mean(evaluator.baseline.rates_bps[idx])))
            slot["after"].append(float(np.mean(report.association.rate_bps[idx])))
        acc["power_before"].append(evaluator.baseline.power_w)
        acc["power_after"].append(report.power_w)
        acc["u_before"].append(evaluator.baseline.unconnected)
        acc["u_after"].append(report.unconnected)
        acc["dissatisfied"].append(report.dissatisfied)
        acc["sbs_off"].append(report.delta.num_off)

    weights_text = "" if weights is None else ",".join(str(w) for w in weights)
    rows = []
    for scope in [uc.value for uc in UserClass] + ["network"]:
        rows.append(
            {
                "bel_db": bel,
                "users": chi,
                "formulation": formulation.value,
                "weights": weights_text,
                "solver": spec.solver,
                "seed": seed,
                "snapshots": spec.snapshots,
                "scope": scope,
                "mean_rate_before_bps": float(np.mean(class_rates[scope]["before"])),
                "mean_rate_after_bps": float(np.mean(class_rates[scope]["after"])),
                "power_before_w": float(np.mean(acc["power_before"])),
                "power_after_w": float(np.mean(acc["power_after"])),
                "unconnected_before": float(np.mean(acc["u_before"])),
                "unconnected_after": float(np.mean(acc["u_after"])),
                "dissatisfied": float(np.mean(acc["dissatisfied"])),
                "mean_sbs_off": float(np.mean(acc["sbs_off"])),
            }
        )
    return rows


def compare_solvers(spec: SweepSpec, config: ScenarioConfig) -> list[dict]:
    """Benchmark exhaustive, greedy and GA on identical constraint-mode
    instances; one row per (user count, seed, solver)."""
    if config.gamma > EXHAUSTIVE_GAMMA_CAP:
        raise SearchSpaceError(
            f"solver comparison needs exhaustive search; gamma={config.gamma} "
            f"exceeds the cap of {EXHAUSTIVE_GAMMA_CAP}"
        )
    rows: list[dict] = []
    for chi in spec.user_counts:
        for seed in spec.seeds:
            base = generate_scenario(config.model_copy(update={"chi": chi}), seed)
            snapshots = _snapshot_chain(base, spec.snapshots)
            per_solver: dict[str, dict[str, list[float]]] = {
                name: {"power_b": [], "power_a": [], "evals": [], "wall": [], "match": []}
                for name in ("exhaustive", "greedy", "ga")
            }
            for scenario in snapshots:
                table = build_link_table(scenario)
                reference = None
                for name in ("exhaustive", "greedy", "ga"):
                    evaluator = Evaluator(scenario, table, rate_policy=spec.rate_policy)
                    result = solve(evaluator, Formulation.ECM, name, spec.ga)
                    if name == "exhaustive":
                        reference = result.best_report.power_w
                    stats = per_solver[name]
                    stats["power_b"].append(evaluator.baseline.power_w)
                    stats["power_a"].append(result.best_report.power_w)
                    stats["evals"].append(result.evaluations)
                    stats["wall"].append(result.wall_time_s)
                    stats["match"].append(
                        1.0 if abs(result.best_report.power_w - reference) <= 1e-9 else 0.0
                    )
            for name in ("exhaustive", "greedy", "ga"):
                stats = per_solver[name]
                rows.append(
                    {
                        "users": chi,
                        "seed": seed,
                        "solver": name,
                        "power_before_w": float(np.mean(stats["power_b"])),
                        "power_after_w": float(np.mean(stats["power_a"])),
                        "evaluations": float(np.mean(stats["evals"])),
                        "wall_time_s": float(np.sum(stats["wall"])),
                        "matches_exhaustive": float(np.mean(stats["match"])),
                    }
                )
    return rows


@dataclass
class DemoResult:
    """Structured outcome of the small switch-off walkthrough."""

    scenario: Scenario
    delta: SwitchVector
    off_sbs_ids: tuple[int, ...]
    least_loaded_sbs_ids: tuple[int, ...]
    baseline_loads: dict[int, int]
    moved_users: list[tuple[int, int, int]]  # (user id, from BS id, to BS id)
    power_before_w: float
    power_after_w: float
    unconnected_before: int
    unconnected_after: int
    ecm_feasible: bool
    before: AssociationState = field(repr=False, default=None)
    after: AssociationState = field(repr=False, default=None)

    def render(self) -> str:
        lines = [
            f"demo scenario: {self.scenario.gamma} SBS + MBS + HAPS, "
            f"{self.scenario.chi} users, seed {self.scenario.seed}",
            f"baseline SBS loads (RBs): "
            + ", ".join(f"SBS{b}={n}" for b, n in sorted(self.baseline_loads.items())),
            "",
            "association before -> after:",
        ]
        names = _bs_names(self.scenario)
        for u in range(self.scenario.chi):
            b0 = self.before.serving[u]
            b1 = self.after.serving[u]
            lines.append(
                f"  user {u + 1:2d}: {names[b0] if b0 >= 0 else 'unconnected':>10} "
                f"-> {names[b1] if b1 >= 0 else 'unconnected':>10}"
            )
        lines += [
            "",
            f"switch decision: {'SBS ' + ', '.join(map(str, self.off_sbs_ids)) + ' sleeps' if self.off_sbs_ids else 'all SBSs stay on'}",
            f"least-loaded SBS(s): {', '.join(map(str, self.least_loaded_sbs_ids))}",
            f"offloaded users: "
            + (
                "; ".join(
                    f"user {u} {names[f - 1]} -> {names[t - 1]}" for u, f, t in self.moved_users
                )
                if self.moved_users
                else "none"
            ),
            f"power: {self.power_before_w:.2f} W -> {self.power_after_w:.2f} W",
            f"unconnected users: {self.unconnected_before} -> {self.unconnected_after}",
            f"constraint check (no connectivity or rate loss): "
            f"{'satisfied' if self.ecm_feasible else 'VIOLATED'}",
        ]
        return "\n".join(lines)


def _bs_names(scenario: Scenario) -> list[str]:
    names = []
    for bs in scenario.base_stations:
        if bs.kind == BSKind.SBS:
            names.append(f"SBS{bs.id}")
        elif bs.kind == BSKind.MBS:
            names.append("MBS")
        else:
            names.append("HAPS")
    return names


def run_demo(
    seed: int = DEFAULT_DEMO_SEED, config: ScenarioConfig | None = None
) -> DemoResult:
    """Run the 3-SBS/10-user constraint-mode walkthrough.

    Exhaustive search under the constraint formulation decides which SBSs
    can sleep without degrading anyone; on the default seed exactly the
    least-loaded SBS sleeps and its user moves to the macro cell.
    """
    base = config or ScenarioConfig()
    cfg = base.model_copy(update={"gamma": 3, "chi": 10})
    scenario = generate_scenario(cfg, seed)
    table = build_link_table(scenario)
    evaluator = Evaluator(scenario, table)
    result = exhaustive(evaluator, Formulation.ECM)

    before = evaluator.baseline.association
    after = result.best_report.association
    sbs_cols = [i for i, bs in enumerate(scenario.base_stations) if bs.kind == BSKind.SBS]
    loads = {c + 1: int(before.rb_used[c]) for c in sbs_cols}
    least = min(loads.values())
    moved = [
        (u + 1, int(before.serving[u]) + 1, int(after.serving[u]) + 1)
        for u in range(scenario.chi)
        if before.serving[u] >= 0 and after.serving[u] >= 0 and before.serving[u] != after.serving[u]
    ]
    return DemoResult(
        scenario=scenario,
        delta=result.best_delta,
        off_sbs_ids=result.best_delta.off_sbs_ids(),
        least_loaded_sbs_ids=tuple(b for b, n in sorted(loads.items()) if n == least),
        baseline_loads=loads,
        moved_users=moved,
        power_before_w=evaluator.baseline.power_w,
        power_after_w=result.best_report.power_w,
        unconnected_before=evaluator.baseline.unconnected,
        unconnected_after=result.best_report.unconnected,
        ecm_feasible=result.best_report.ecm_feasible,
        before=before,
        after=after,
    )


def rows_to_csv(rows: list[dict], columns: tuple[str, ...]) -> str:
    """Serialize rows with a fixed column order; deterministic for equal input."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def rows_to_gnuplot(rows: list[dict], columns: tuple[str, ...]) -> str:
    """Whitespace-separated table with a commented header for gnuplot."""
    lines = ["# " + " ".join(columns)]
    for row in rows:
        lines.append(" ".join(str(row[c]) for c in columns))
    return "\n".join(lines) + "\n"
