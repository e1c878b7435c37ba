"""SINR computation, user association and achievable rates.

Association processes users in ascending id. Each user joins the active,
sensitivity-satisfying BS with the highest SINR that still has resource
blocks for its demand; SINR ties break toward the lowest BS index. Users
with no feasible BS stay unconnected (rate 0, no RB usage). Because the
macro and HAPS cells are always active, the per-BS load factors never
exceed one by construction.

Among active BSs the SINR ordering of one user's links equals its
received-power ordering (the interference sum is common up to the serving
term), which lets the implementation assign from precomputed power
rankings and compute SINR only for chosen links.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .propagation import LinkTable
from .scenario import Scenario


@dataclass
class AssociationState:
    """Outcome of one association pass.

    ``serving`` holds 0-based BS column indices, -1 for unconnected users;
    ``serving_ids`` exposes the 1-based BS ids.
    """

    serving: np.ndarray
    sinr: np.ndarray
    rate_bps: np.ndarray
    rb_used: np.ndarray
    load: np.ndarray

    @property
    def serving_ids(self) -> list[int | None]:
        return [int(b) + 1 if b >= 0 else None for b in self.serving]

    @property
    def connected(self) -> np.ndarray:
        return self.serving >= 0

    def to_rows(self) -> list[tuple[int, int | None, float, float]]:
        """CSV-friendly rows: (user id, serving BS id, SINR dB, rate bit/s)."""
        rows = []
        for u in range(len(self.serving)):
            b = self.serving[u]
            sinr_db = 10.0 * math.log10(self.sinr[u]) if b >= 0 and self.sinr[u] > 0 else float("-inf")
            rows.append(
                (u + 1, int(b) + 1 if b >= 0 else None, sinr_db, float(self.rate_bps[u]))
            )
        return rows


def active_bs_mask(table: LinkTable, delta: Sequence[int]) -> np.ndarray:
    """Expand a switch vector over the SBS columns; MBS and HAPS stay on."""
    sbs_cols = np.flatnonzero(table.sbs_mask)
    if len(delta) != len(sbs_cols):
        raise ValueError(f"switch vector length {len(delta)} != SBS count {len(sbs_cols)}")
    if any(d not in (0, 1) for d in delta):
        raise ValueError("switch vector entries must be 0 or 1")
    active = np.ones(table.n_bs, dtype=bool)
    active[sbs_cols] = np.asarray(delta, dtype=bool)
    return active


def _interference_mw(table: LinkTable, active: np.ndarray, cross_tier: bool) -> np.ndarray:
    """Per-(user, BS) interference sum over active BSs, excluding the serving one."""
    if cross_tier:
        total = table.rx_mw @ active.astype(float)
        return total[:, None] - np.where(active[None, :], table.rx_mw, 0.0)
    tn = table.rx_mw @ (active & table.terrestrial).astype(float)
    ntn = table.rx_mw @ (active & ~table.terrestrial).astype(float)
    tier_total = np.where(table.terrestrial[None, :], tn[:, None], ntn[:, None])
    return tier_total - np.where(active[None, :], table.rx_mw, 0.0)


def sinr(scenario: Scenario, table: LinkTable, user_id: int, bs_id: int, delta: Sequence[int]) -> float:
    """Linear SINR of one link under a given switch vector.

    The BS must be active; all powers are summed in linear milliwatts.
    """
    active = active_bs_mask(table, delta)
    u, b = user_id - 1, bs_id - 1
    if not active[b]:
        raise ValueError(f"BS {bs_id} is not active under this switch vector")
    interf = _interference_mw(table, active, scenario.radio.cross_tier_interference)[u, b]
    return float(table.rx_mw[u, b] / (table.noise_mw + interf))


def shannon_rate_bps(sinr_linear: float, rb_bandwidth_hz: float, demand_rbs: int = 1) -> float:
    return demand_rbs * rb_bandwidth_hz * math.log2(1.0 + sinr_linear)


def achievable_rate(
    state: AssociationState, user_id: int, rb_bandwidth_hz: float, demand_rbs: int = 1
) -> float:
    """Shannon rate over the user's allocated RBs; 0 for unconnected users."""
    u = user_id - 1
    if state.serving[u] < 0:
        return 0.0
    return shannon_rate_bps(float(state.sinr[u]), rb_bandwidth_hz, demand_rbs)


def _assign(table: LinkTable, active: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Assign users to BSs in ascending id; returns (serving, rb_used)."""
    allowed = table.sens_ok & active[None, :]
    has_candidate = allowed.any(axis=1)
    masked = np.where(allowed, table.rx_dbm, -np.inf)
    choice = np.argmax(masked, axis=1)

    counts = np.bincount(
        choice[has_candidate],
        weights=table.demands[has_candidate].astype(float),
        minlength=table.n_bs,
    )
    if np.all(counts <= table.caps):
        # no RB contention: everyone gets their top feasible choice, which
        # is exactly what sequential admission yields
        serving = np.where(has_candidate, choice, -1)
        rb_used = counts.astype(np.int64)
        return serving, rb_used

    serving = np.full(table.n_users, -1, dtype=np.int64)
    remaining = table.caps.copy()
    demands = table.demands
    active_list = active.tolist()
    for u in range(table.n_users):
        need = demands[u]
        for b in table.ranked[u]:
            if active_list[b] and remaining[b] >= need:
                serving[u] = b
                remaining[b] -= need
                break
    return serving, table.caps - remaining


def associate(scenario: Scenario, delta: Sequence[int], table: LinkTable) -> AssociationState:
    """Associate every user under a switch vector and compute SINR and rates."""
    active = active_bs_mask(table, delta)
    serving, rb_used = _assign(table, active)

    interf = _interference_mw(table, active, scenario.radio.cross_tier_interference)
    connected = serving >= 0
    idx = np.flatnonzero(connected)
    sinr_arr = np.zeros(table.n_users)
    sinr_arr[idx] = table.rx_mw[idx, serving[idx]] / (
        table.noise_mw + interf[idx, serving[idx]]
    )
    rate = np.zeros(table.n_users)
    rate[idx] = (
        table.demands[idx]
        * scenario.radio.rb_bandwidth_hz
        * np.log2(1.0 + sinr_arr[idx])
    )

    return AssociationState(
        serving=serving,
        sinr=sinr_arr,
        rate_bps=rate,
        rb_used=rb_used.astype(np.int64),
        load=rb_used / table.caps,
    )


def associate_reference(
    scenario: Scenario, delta: Sequence[int], table: LinkTable
) -> AssociationState:
    """Plain per-user sequential admission; oracle for the fast path."""
    active = active_bs_mask(table, delta)
    serving = np.full(table.n_users, -1, dtype=np.int64)
    remaining = table.caps.copy()
    for u in range(table.n_users):
        best_b, best_rx = -1, -np.inf
        for b in range(table.n_bs):
            if not (active[b] and table.sens_ok[u, b]):
                continue
            if remaining[b] < table.demands[u]:
                continue
            if table.rx_dbm[u, b] > best_rx:
                best_b, best_rx = b, table.rx_dbm[u, b]
        if best_b >= 0:
            serving[u] = best_b
            remaining[best_b] -= table.demands[u]

    interf = _interference_mw(table, active, scenario.radio.cross_tier_interference)
    sinr_arr = np.zeros(table.n_users)
    rate = np.zeros(table.n_users)
    for u in np.flatnonzero(serving >= 0):
        b = serving[u]
        sinr_arr[u] = table.rx_mw[u, b] / (table.noise_mw + interf[u, b])
        rate[u] = shannon_rate_bps(
            float(sinr_arr[u]), scenario.radio.rb_bandwidth_hz, int(table.demands[u])
        )
    rb_used = table.caps - remaining
    return AssociationState(
        serving=serving,
        sinr=sinr_arr,
        rate_bps=rate,
        rb_used=rb_used.astype(np.int64),
        load=rb_used / table.caps,
    )


def delta_path_loss_db(
    user_id: int, before: AssociationState, after: AssociationState, table: LinkTable
) -> float | None:
    """Extra link loss a user picked up by being reassigned.

    Defined against the before/after serving links; None when the user lost
    connectivity, and an error if it was not connected to begin with.
    """
    u = user_id - 1
    b_before = before.serving[u]
    if b_before < 0:
        raise ValueError(f"user {user_id} was not connected before switching")
    b_after = after.serving[u]
    if b_after < 0:
        return None
    return float(table.loss_db[u, b_after] - table.loss_db[u, b_before])
