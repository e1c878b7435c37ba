"""Link-loss models and per-snapshot link tables.

Terrestrial links follow the 3GPP urban-macro LoS/NLoS curves with
log-normal shadowing, building entry loss for indoor users, a per-class
extra loss and optional small-scale fading. The HAPS link is free-space
path loss plus a constant atmospheric term and the same indoor penalties;
it carries no shadowing or fading term.

All stochastic draws (LoS state, shadowing, fading) are made once per
(user, BS) pair per scenario snapshot from generators keyed on the scenario
seed and step counter, so evaluating different switch vectors or BEL values
on the same snapshot sees identical channels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import INDOOR_CLASSES, BSKind, FadingMode, RadioParams, UserClass
from .scenario import DOMAIN_LINK, BaseStation, Scenario, User, seeded_rng

RICIAN_K_DB = 10.0

_SUB_LOS = 0
_SUB_SHADOW = 1
_SUB_FADING = 2


@dataclass(frozen=True)
class LinkLoss:
    """Additive decomposition of one link's loss in dB."""

    base_db: float
    shadowing_db: float = 0.0
    bel_db: float = 0.0
    extra_db: float = 0.0
    fading_db: float = 0.0
    atmospheric_db: float = 0.0

    @property
    def total_db(self) -> float:
        return (
            self.base_db
            + self.shadowing_db
            + self.bel_db
            + self.extra_db
            + self.fading_db
            + self.atmospheric_db
        )


def _check_link_args(d3d_m: float, f_ghz: float) -> None:
    if d3d_m <= 0.0:
        raise ValueError("3-D distance must be positive")
    if f_ghz <= 0.0:
        raise ValueError("carrier frequency must be positive")


def _indoor_bel(params: RadioParams, user_class: UserClass) -> float:
    return params.bel_db if user_class in INDOOR_CLASSES else 0.0


def path_loss_tn_los(
    d3d_m: float,
    f_ghz: float,
    params: RadioParams,
    user_class: UserClass,
    shadowing_db: float = 0.0,
    fading_db: float = 0.0,
) -> LinkLoss:
    """Terrestrial LoS loss: 28 + 22 log10(d) + 20 log10(f) plus extras."""
    _check_link_args(d3d_m, f_ghz)
    base = 28.0 + 22.0 * math.log10(d3d_m) + 20.0 * math.log10(f_ghz)
    return LinkLoss(
        base_db=base,
        shadowing_db=shadowing_db,
        bel_db=_indoor_bel(params, user_class),
        extra_db=params.extra_loss_db.for_class(user_class),
        fading_db=fading_db if params.fading_mode == FadingMode.STOCHASTIC else 0.0,
    )


def path_loss_tn_nlos(
    d3d_m: float,
    f_ghz: float,
    params: RadioParams,
    user_class: UserClass,
    shadowing_db: float = 0.0,
    fading_db: float = 0.0,
) -> LinkLoss:
    """Terrestrial NLoS loss: 32.54 + 30 log10(d) + 20 log10(f) plus extras."""
    _check_link_args(d3d_m, f_ghz)
    base = 32.54 + 30.0 * math.log10(d3d_m) + 20.0 * math.log10(f_ghz)
    return LinkLoss(
        base_db=base,
        shadowing_db=shadowing_db,
        bel_db=_indoor_bel(params, user_class),
        extra_db=params.extra_loss_db.for_class(user_class),
        fading_db=fading_db if params.fading_mode == FadingMode.STOCHASTIC else 0.0,
    )


def free_space_path_loss_db(d3d_m: float, f_ghz: float) -> float:
    """FSPL with the 92.45 constant (distance in km, frequency in GHz)."""
    _check_link_args(d3d_m, f_ghz)
    return 20.0 * math.log10(d3d_m / 1000.0) + 20.0 * math.log10(f_ghz) + 92.45


def path_loss_haps(
    d3d_m: float, f_ghz: float, params: RadioParams, user_class: UserClass
) -> LinkLoss:
    """HAPS link loss: FSPL + atmospheric loss + indoor penalties."""
    return LinkLoss(
        base_db=free_space_path_loss_db(d3d_m, f_ghz),
        bel_db=_indoor_bel(params, user_class),
        extra_db=params.extra_loss_db.for_class(user_class),
        atmospheric_db=params.atmospheric_loss_db,
    )


def los_probability(d2d_m: float) -> float:
    """Urban-macro LoS probability against 2-D distance (UE below 13 m)."""
    if d2d_m <= 18.0:
        return 1.0
    return 18.0 / d2d_m + math.exp(-d2d_m / 63.0) * (1.0 - 18.0 / d2d_m)


def received_power_dbm(bs: BaseStation, link: LinkLoss) -> float:
    """Received signal strength: transmit power minus total link loss."""
    return bs.transmit_power_dbm - link.total_db


def _los_uniforms(scenario: Scenario) -> np.ndarray:
    rng = seeded_rng(scenario.seed, DOMAIN_LINK, scenario.mobility_step, _SUB_LOS)
    return rng.random((scenario.chi, len(scenario.base_stations)))


def los_state(scenario: Scenario, user: User, bs: BaseStation) -> bool:
    """Seeded LoS/NLoS state for one terrestrial link of this snapshot.

    Returns True for LoS. The draw is shared with the vectorized link table,
    so the map is identical however it is queried.
    """
    if bs.kind == BSKind.HAPS_SMBS:
        raise ValueError("HAPS links have no LoS/NLoS state")
    d2d = math.hypot(user.position[0] - bs.position[0], user.position[1] - bs.position[1])
    u = _los_uniforms(scenario)[user.id - 1, bs.id - 1]
    return bool(u < los_probability(d2d))


@dataclass(frozen=True)
class LinkTable:
    """Per-snapshot link matrices, rows ordered by user id, columns by BS id."""

    loss_db: np.ndarray
    rx_dbm: np.ndarray
    rx_mw: np.ndarray
    los: np.ndarray
    shadow_db: np.ndarray
    fading_db: np.ndarray
    terrestrial: np.ndarray
    sbs_mask: np.ndarray
    sens_ok: np.ndarray
    ranked: tuple[tuple[int, ...], ...]
    caps: np.ndarray
    demands: np.ndarray
    noise_mw: float

    @property
    def n_users(self) -> int:
        return self.rx_dbm.shape[0]

    @property
    def n_bs(self) -> int:
        return self.rx_dbm.shape[1]


def build_link_table(scenario: Scenario) -> LinkTable:
    """Compute every link's loss and received power for one snapshot."""
    params = scenario.radio
    chi = scenario.chi
    stations = scenario.base_stations
    n_bs = len(stations)

    upos = np.array([u.position for u in scenario.users], dtype=float)
    bpos = np.array([bs.position for bs in stations], dtype=float)
    diff = upos[:, None, :] - bpos[None, :, :]
    d3d = np.linalg.norm(diff, axis=2)
    d2d = np.linalg.norm(diff[:, :, :2], axis=2)
    np.maximum(d3d, 1e-9, out=d3d)
    np.maximum(d2d, 1e-9, out=d2d)

    terrestrial = np.array([bs.kind != BSKind.HAPS_SMBS for bs in stations])
    sbs_mask = np.array([bs.kind == BSKind.SBS for bs in stations])
    freqs = np.array([bs.carrier_frequency_ghz for bs in stations], dtype=float)
    tx_dbm = np.array([bs.transmit_power_dbm for bs in stations], dtype=float)

    p_los = np.where(
        d2d <= 18.0, 1.0, 18.0 / d2d + np.exp(-d2d / 63.0) * (1.0 - 18.0 / d2d)
    )
    los = _los_uniforms(scenario) < p_los
    los &= terrestrial[None, :]

    rng_shadow = seeded_rng(scenario.seed, DOMAIN_LINK, scenario.mobility_step, _SUB_SHADOW)
    z = rng_shadow.standard_normal((chi, n_bs))
    sigma = np.where(los, params.shadow_sigma_los_db, params.shadow_sigma_nlos_db)
    shadow_db = np.where(terrestrial[None, :], z * sigma, 0.0)

    fading_db = np.zeros((chi, n_bs))
    if params.fading_mode == FadingMode.STOCHASTIC:
        rng_fad = seeded_rng(scenario.seed, DOMAIN_LINK, scenario.mobility_step, _SUB_FADING)
        z1 = rng_fad.standard_normal((chi, n_bs))
        z2 = rng_fad.standard_normal((chi, n_bs))
        k = 10.0 ** (RICIAN_K_DB / 10.0)
        rician = (np.sqrt(k / (k + 1.0)) + np.sqrt(1.0 / (2.0 * (k + 1.0))) * z1) ** 2 + (
            np.sqrt(1.0 / (2.0 * (k + 1.0))) * z2
        ) ** 2
        rayleigh = 0.5 * (z1**2 + z2**2)
        gain = np.where(los, rician, rayleigh)
        fading_db = np.where(terrestrial[None, :], -10.0 * np.log10(np.maximum(gain, 1e-12)), 0.0)

    log_d = np.log10(d3d)
    log_f = np.log10(freqs)[None, :]
    base = np.where(
        los,
        28.0 + 22.0 * log_d + 20.0 * log_f,
        32.54 + 30.0 * log_d + 20.0 * log_f,
    )
    haps_base = 20.0 * np.log10(d3d / 1000.0) + 20.0 * log_f + 92.45
    base = np.where(terrestrial[None, :], base, haps_base)

    indoor = np.array([u.user_class in INDOOR_CLASSES for u in scenario.users])
    bel_col = np.where(indoor, params.bel_db, 0.0)[:, None]
    extra_col = np.array(
        [params.extra_loss_db.for_class(u.user_class) for u in scenario.users]
    )[:, None]
    atm = np.where(terrestrial, 0.0, params.atmospheric_loss_db)[None, :]

    loss = base + shadow_db + bel_col + extra_col + fading_db + atm
    rx_dbm = tx_dbm[None, :] - loss
    rx_mw = 10.0 ** (rx_dbm / 10.0)
    sens_ok = rx_dbm >= params.receiver_sensitivity_dbm

    # Candidate order per user: received power descending, BS index breaking
    # ties; only sensitivity-satisfying links are kept. Among active BSs the
    # SINR ordering equals the received-power ordering, so this ranking is
    # valid for any switch vector.
    order = np.argsort(-rx_dbm, axis=1, kind="stable")
    ranked = tuple(
        tuple(int(b) for b in order[u] if sens_ok[u, b]) for u in range(chi)
    )

    caps = np.array([bs.total_rbs for bs in stations], dtype=np.int64)
    demands = np.array([u.demand_rbs for u in scenario.users], dtype=np.int64)

    return LinkTable(
        loss_db=loss,
        rx_dbm=rx_dbm,
        rx_mw=rx_mw,
        los=los,
        shadow_db=shadow_db,
        fading_db=fading_db,
        terrestrial=terrestrial,
        sbs_mask=sbs_mask,
        sens_ok=sens_ok,
        ranked=ranked,
        caps=caps,
        demands=demands,
        noise_mw=10.0 ** (params.noise_power_dbm / 10.0),
    )
