import csv
import io
import math

import numpy as np
import pytest
from pydantic import ValidationError

from cellswitch.harness import (
    COMPARE_COLUMNS,
    DEFAULT_DEMO_SEED,
    SWEEP_COLUMNS,
    SweepSpec,
    compare_solvers,
    rows_to_csv,
    rows_to_gnuplot,
    run_demo,
    run_sweep,
)
from cellswitch.objectives import Formulation
from cellswitch.params import RadioParams
from cellswitch.scenario import ScenarioConfig
from cellswitch.solvers import SearchSpaceError

SMALL_CONFIG = ScenarioConfig(gamma=4, chi=30)


def small_spec(**overrides) -> SweepSpec:
    base = dict(
        bel_values=(0.0,),
        user_counts=(30,),
        formulations=(Formulation.EFM,),
        seeds=(0,),
        snapshots=2,
    )
    base.update(overrides)
    return SweepSpec(**base)


class TestRunSweep:
    def test_row_count_contract(self):
        rows = run_sweep(small_spec(), SMALL_CONFIG)
        assert len(rows) == 4
        assert [r["scope"] for r in rows] == [
            "high_loss_indoor",
            "low_loss_indoor",
            "outdoor",
            "network",
        ]

    def test_efm_power_never_exceeds_baseline(self):
        spec = small_spec(bel_values=(0.0, 20.0), user_counts=(30, 60), snapshots=2)
        for row in run_sweep(spec, SMALL_CONFIG):
            assert row["power_after_w"] <= row["power_before_w"] + 1e-9

    def test_rerun_is_byte_identical(self):
        spec = small_spec(bel_values=(0.0, 10.0))
        a = rows_to_csv(run_sweep(spec, SMALL_CONFIG), SWEEP_COLUMNS)
        b = rows_to_csv(run_sweep(spec, SMALL_CONFIG), SWEEP_COLUMNS)
        assert a == b

    def test_wsm_emits_one_cell_per_weight_set(self):
        spec = small_spec(
            formulations=(Formulation.WSM,),
            wsm_weight_sets=((1.0, 1.0, 1.0), (1.0, 0.1, 0.1)),
        )
        rows = run_sweep(spec, SMALL_CONFIG)
        assert len(rows) == 8
        assert {r["weights"] for r in rows} == {"1.0,1.0,1.0", "1.0,0.1,0.1"}

    def test_every_numeric_cell_is_finite(self):
        rows = run_sweep(small_spec(formulations=(Formulation.ECM,)), SMALL_CONFIG)
        for row in rows:
            for column in SWEEP_COLUMNS:
                value = row[column]
                if isinstance(value, float):
                    assert math.isfinite(value)

    def test_rejects_unknown_formulation_and_solver(self):
        with pytest.raises(ValidationError):
            small_spec(formulations=("simulated_annealing",))
        with pytest.raises(ValidationError):
            small_spec(solver="annealing")
        with pytest.raises(ValidationError):
            small_spec(bel_values=())
        with pytest.raises(ValidationError):
            small_spec(bel_values=(45.0,))

    def test_exhaustive_cap_conflict_fails_fast(self):
        spec = small_spec(solver="exhaustive")
        with pytest.raises(SearchSpaceError):
            run_sweep(spec, ScenarioConfig(gamma=21, chi=10))


class TestCsvWriters:
    def test_csv_round_trip_preserves_weights_cell(self):
        spec = small_spec(formulations=(Formulation.WSM,), wsm_weight_sets=((1.0, 0.3, 0.25),))
        text = rows_to_csv(run_sweep(spec, SMALL_CONFIG), SWEEP_COLUMNS)
        parsed = list(csv.DictReader(io.StringIO(text)))
        assert parsed[0]["weights"] == "1.0,0.3,0.25"
        assert len(parsed) == 4

    def test_gnuplot_output_shape(self):
        rows = run_sweep(small_spec(), SMALL_CONFIG)
        text = rows_to_gnuplot(rows, SWEEP_COLUMNS)
        lines = text.strip().splitlines()
        assert lines[0].startswith("# bel_db users")
        assert len(lines) == len(rows) + 1


class TestDemo:
    def test_default_seed_story(self):
        demo = run_demo()
        assert len(demo.off_sbs_ids) == 1
        off = demo.off_sbs_ids[0]
        assert demo.least_loaded_sbs_ids == (off,)
        assert demo.ecm_feasible
        mbs_id = demo.scenario.gamma + 1
        movers = [m for m in demo.moved_users if m[1] == off]
        assert movers and all(m[2] == mbs_id for m in movers)
        assert demo.power_after_w < demo.power_before_w

    def test_constraints_recheck_against_oracle(self):
        demo = run_demo()
        before, after = demo.before, demo.after
        assert demo.unconnected_after <= demo.unconnected_before
        both = before.connected & after.connected
        assert np.all(after.rate_bps[both] >= before.rate_bps[both])

    def test_scenario_shape(self):
        demo = run_demo()
        assert demo.scenario.gamma == 3 and demo.scenario.chi == 10
        assert len(demo.scenario.base_stations) == 5

    def test_unreachable_network_sleeps_everything(self):
        # with an unreachable sensitivity floor nobody connects under any
        # vector, the constraints bind on nothing, and pure power
        # minimization puts every SBS to sleep
        config = ScenarioConfig(radio=RadioParams(receiver_sensitivity_dbm=1e9))
        demo = run_demo(seed=DEFAULT_DEMO_SEED, config=config)
        assert demo.unconnected_before == 10 and demo.unconnected_after == 10
        assert demo.off_sbs_ids == (1, 2, 3)
        assert demo.ecm_feasible

    def test_render_mentions_decision(self):
        text = run_demo().render()
        assert "sleeps" in text and "power:" in text


class TestCompareSolvers:
    def test_exhaustive_lower_bounds_rows(self):
        spec = SweepSpec(user_counts=(36,), seeds=(0, 1, 2), snapshots=1)
        rows = compare_solvers(spec, ScenarioConfig(gamma=6, chi=36))
        assert len(rows) == 9
        by_key = {(r["users"], r["seed"], r["solver"]): r for r in rows}
        for seed in (0, 1, 2):
            ref = by_key[(36, seed, "exhaustive")]["power_after_w"]
            assert by_key[(36, seed, "greedy")]["power_after_w"] >= ref - 1e-9
            assert by_key[(36, seed, "ga")]["power_after_w"] >= ref - 1e-9
            assert by_key[(36, seed, "exhaustive")]["matches_exhaustive"] == 1.0

    def test_greedy_gap_statistics_over_twenty_seeds(self):
        spec = SweepSpec(user_counts=(30,), seeds=tuple(range(20)), snapshots=1)
        rows = compare_solvers(spec, ScenarioConfig(gamma=6, chi=30))
        gaps = []
        by_key = {(r["seed"], r["solver"]): r for r in rows}
        for seed in range(20):
            gaps.append(
                by_key[(seed, "greedy")]["power_after_w"]
                - by_key[(seed, "exhaustive")]["power_after_w"]
            )
        assert all(g >= -1e-9 for g in gaps)
        assert math.isfinite(float(np.mean(gaps))) and math.isfinite(float(np.max(gaps)))

    def test_cap_guard(self):
        with pytest.raises(SearchSpaceError):
            compare_solvers(SweepSpec(user_counts=(10,)), ScenarioConfig(gamma=22, chi=10))

    def test_csv_columns(self):
        spec = SweepSpec(user_counts=(20,), seeds=(0,), snapshots=1)
        text = rows_to_csv(compare_solvers(spec, ScenarioConfig(gamma=4, chi=20)), COMPARE_COLUMNS)
        header = text.splitlines()[0]
        assert header == ",".join(COMPARE_COLUMNS)
