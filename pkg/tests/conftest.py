import pytest

from cellswitch.objectives import Evaluator
from cellswitch.params import RadioParams, default_kind_params
from cellswitch.propagation import build_link_table
from cellswitch.scenario import BaseStation, Scenario, ScenarioConfig, User, generate_scenario


def make_config(gamma=4, chi=30, seed=0, **radio_overrides) -> ScenarioConfig:
    radio = RadioParams(**radio_overrides) if radio_overrides else RadioParams()
    return ScenarioConfig(gamma=gamma, chi=chi, seed=seed, radio=radio)


def make_evaluator(scenario, **kwargs) -> Evaluator:
    return Evaluator(scenario, build_link_table(scenario), **kwargs)


def custom_scenario(bs_specs, user_specs, radio=None, area=(200.0, 200.0), seed=0) -> Scenario:
    """Hand-built world: bs_specs as (kind, position), user_specs as
    (position, user_class); ids assigned in list order."""
    kinds = default_kind_params()
    stations = []
    for i, (kind, pos) in enumerate(bs_specs):
        p = kinds[kind]
        stations.append(
            BaseStation(
                id=i + 1,
                kind=kind,
                position=pos,
                transmit_power_dbm=p.transmit_power_dbm,
                operational_power_w=p.operational_power_w,
                sleep_power_w=p.sleep_power_w,
                efficiency=p.efficiency,
                total_rbs=p.total_rbs,
                carrier_frequency_ghz=p.carrier_frequency_ghz,
            )
        )
    users = tuple(
        User(id=i + 1, position=pos, user_class=uc) for i, (pos, uc) in enumerate(user_specs)
    )
    return Scenario(
        area_m=area,
        base_stations=tuple(stations),
        users=users,
        radio=radio or RadioParams(),
        seed=seed,
    )


@pytest.fixture
def small_scenario():
    return generate_scenario(make_config(gamma=4, chi=30, seed=0))
