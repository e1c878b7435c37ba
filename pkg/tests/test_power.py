import math

import pytest

from cellswitch.params import BSKind, UserClass
from cellswitch.power import bs_power_w, dbm_to_watts, max_network_power_w, network_power
from cellswitch.propagation import build_link_table
from cellswitch.radio import associate
from cellswitch.scenario import BaseStation, generate_scenario

from conftest import custom_scenario, make_config


def station(tx_dbm=38.0, p_o=56.0, p_s=39.0, eta=2.6, kind=BSKind.SBS):
    return BaseStation(
        id=1,
        kind=kind,
        position=(0.0, 0.0, 10.0),
        transmit_power_dbm=tx_dbm,
        operational_power_w=p_o,
        sleep_power_w=p_s,
        efficiency=eta,
        total_rbs=100,
        carrier_frequency_ghz=2.0,
    )


class TestBsPower:
    def test_off_draws_sleep_floor(self):
        assert bs_power_w(station(), load=0.0, on=False) == 39.0

    def test_on_zero_load_draws_circuit_power(self):
        assert bs_power_w(station(), load=0.0, on=True) == 56.0

    def test_full_load_reference(self):
        # 20 W transmit power, eta 4.7: 130 + 4.7 * 20 = 224 W
        tx_dbm = 10.0 * math.log10(20.0 * 1000.0)
        bs = station(tx_dbm=tx_dbm, p_o=130.0, p_s=75.0, eta=4.7, kind=BSKind.MBS)
        assert bs_power_w(bs, load=1.0, on=True) == pytest.approx(224.0, rel=1e-9)

    def test_rejects_bad_loads(self):
        with pytest.raises(ValueError):
            bs_power_w(station(), load=1.2, on=True)
        with pytest.raises(ValueError):
            bs_power_w(station(), load=-0.1, on=True)
        with pytest.raises(ValueError):
            bs_power_w(station(), load=0.5, on=False)

    def test_dbm_conversion(self):
        assert dbm_to_watts(30.0) == pytest.approx(1.0, rel=1e-12)
        assert dbm_to_watts(46.0) == pytest.approx(39.810717055349734, rel=1e-12)


def _empty_network(gamma=3):
    # one user nobody can hear: every load is zero
    s = generate_scenario(make_config(gamma=gamma, chi=1, seed=0, receiver_sensitivity_dbm=math.inf))
    table = build_link_table(s)
    return s, table


class TestNetworkPower:
    def test_all_sbs_off_zero_load_formula(self):
        s, table = _empty_network(gamma=3)
        state = associate(s, (0, 0, 0), table)
        report = network_power(s, (0, 0, 0), state)
        mbs, haps = s.base_stations[-2], s.base_stations[-1]
        sbs = s.base_stations[0]
        expected = mbs.operational_power_w + haps.operational_power_w + 3 * sbs.sleep_power_w
        assert report.total_w == pytest.approx(expected, rel=1e-12)

    def test_all_on_vs_all_off_difference_identity(self):
        s, table = _empty_network(gamma=4)
        on = network_power(s, (1, 1, 1, 1), associate(s, (1, 1, 1, 1), table))
        off = network_power(s, (0, 0, 0, 0), associate(s, (0, 0, 0, 0), table))
        sbs = s.base_stations[0]
        expected = 4 * (sbs.operational_power_w - sbs.sleep_power_w)  # loads are zero
        assert on.total_w - off.total_w == pytest.approx(expected, rel=1e-12)

    def test_randomized_instance_vs_term_by_term_sum(self):
        s = generate_scenario(make_config(gamma=5, chi=60, seed=13))
        table = build_link_table(s)
        delta = (1, 0, 1, 1, 0)
        state = associate(s, delta, table)
        report = network_power(s, delta, state)
        total = 0.0
        for i, bs in enumerate(s.base_stations):
            if bs.kind == BSKind.SBS and delta[i] == 0:
                total += bs.sleep_power_w
            else:
                total += bs.operational_power_w + bs.efficiency * float(
                    state.load[i]
                ) * dbm_to_watts(bs.transmit_power_dbm)
        assert report.total_w == pytest.approx(total, rel=1e-9)
        assert report.total_w == pytest.approx(sum(report.per_bs_w), rel=1e-12)

    def test_every_bs_draws_at_least_its_sleep_floor(self):
        s = generate_scenario(make_config(gamma=4, chi=50, seed=3))
        table = build_link_table(s)
        state = associate(s, (1, 0, 1, 0), table)
        report = network_power(s, (1, 0, 1, 0), state)
        for w, bs in zip(report.per_bs_w, s.base_stations):
            assert w >= min(bs.sleep_power_w, bs.operational_power_w) - 1e-12

    def test_monotone_in_number_of_on_sbs_for_fixed_loads(self):
        s = generate_scenario(make_config(gamma=4, chi=40, seed=8))
        table = build_link_table(s)
        state = associate(s, (1, 1, 1, 1), table)
        totals = [
            network_power(s, delta, state).total_w
            for delta in ((0, 0, 0, 0), (1, 0, 0, 0), (1, 1, 0, 0), (1, 1, 1, 0), (1, 1, 1, 1))
        ]
        assert all(b >= a for a, b in zip(totals, totals[1:]))

    def test_total_invariant_to_user_relabeling(self):
        bs = [
            (BSKind.SBS, (30.0, 30.0, 10.0)),
            (BSKind.MBS, (100.0, 100.0, 25.0)),
            (BSKind.HAPS_SMBS, (100.0, 100.0, 20_000.0)),
        ]
        users = [
            ((20.0, 25.0, 1.5), UserClass.OUTDOOR),
            ((150.0, 160.0, 1.5), UserClass.LOW_LOSS_INDOOR),
            ((80.0, 90.0, 1.5), UserClass.HIGH_LOSS_INDOOR),
        ]
        a = custom_scenario(bs, users, seed=4)
        b = custom_scenario(bs, list(reversed(users)), seed=4)
        pa = network_power(a, (1,), associate(a, (1,), build_link_table(a)))
        pb = network_power(b, (1,), associate(b, (1,), build_link_table(b)))
        assert pa.total_w == pytest.approx(pb.total_w, rel=1e-12)


def test_max_network_power_without_sbs_terms():
    # only the always-on cells remain when no SBS exists
    mbs = station(tx_dbm=46.0, p_o=130.0, p_s=75.0, eta=4.7, kind=BSKind.MBS)
    haps = station(tx_dbm=46.0, p_o=130.0, p_s=75.0, eta=4.7, kind=BSKind.HAPS_SMBS)
    expected = 2 * (130.0 + 4.7 * dbm_to_watts(46.0))
    assert max_network_power_w([mbs, haps]) == pytest.approx(expected, rel=1e-12)
