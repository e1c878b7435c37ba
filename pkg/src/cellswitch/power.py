"""Affine BS power model: circuit power plus load-proportional transmit
term when active, sleep floor when switched off."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .radio import AssociationState
from .scenario import BaseStation, BSKind, Scenario


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class PowerReport:
    """Per-BS consumption in watts, ordered by BS id."""

    per_bs_w: tuple[float, ...]

    @property
    def total_w(self) -> float:
        return float(sum(self.per_bs_w))

    def to_rows(self) -> list[tuple[int, float]]:
        return [(i + 1, w) for i, w in enumerate(self.per_bs_w)]


def bs_power_w(bs: BaseStation, load: float, on: bool) -> float:
    """Power draw of one BS at the given RB load factor."""
    if not 0.0 <= load <= 1.0:
        raise ValueError(f"load factor {load} outside [0, 1]")
    if not on:
        if load != 0.0:
            raise ValueError("a switched-off BS cannot carry load")
        return bs.sleep_power_w
    return bs.operational_power_w + bs.efficiency * load * dbm_to_watts(bs.transmit_power_dbm)


def network_power(
    scenario: Scenario, delta: Sequence[int], state: AssociationState
) -> PowerReport:
    """Total network consumption for a switch vector and its association.

    The macro and HAPS cells always contribute their active form; each SBS
    contributes its active form or the sleep floor according to the vector.
    """
    per_bs = []
    sbs_pos = 0
    for i, bs in enumerate(scenario.base_stations):
        if bs.kind == BSKind.SBS:
            on = bool(delta[sbs_pos])
            sbs_pos += 1
        else:
            on = True
        load = float(state.load[i]) if on else 0.0
        per_bs.append(bs_power_w(bs, load, on))
    return PowerReport(per_bs_w=tuple(per_bs))


def max_network_power_w(base_stations: Sequence[BaseStation]) -> float:
    """Worst-case consumption: every BS active at full load."""
    return float(
        sum(
            bs.operational_power_w + bs.efficiency * dbm_to_watts(bs.transmit_power_dbm)
            for bs in base_stations
        )
    )
