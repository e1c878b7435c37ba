"""World model: base stations, users, scenario generation and mobility.

A Scenario is immutable; mobility returns a new Scenario with an advanced
step counter so that any sequence of (generate, step*) calls replays
identically for a given seed.
"""

from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .params import BSKind, BSKindParams, RadioParams, UserClass, default_kind_params

# Seed-derivation domains; each stochastic subsystem draws from its own
# SeedSequence spawn key so adding draws in one never shifts another.
DOMAIN_PLACEMENT = 0
DOMAIN_MOBILITY = 1
DOMAIN_LINK = 2
DOMAIN_GA = 3

USER_CLASS_CYCLE = (
    UserClass.HIGH_LOSS_INDOOR,
    UserClass.LOW_LOSS_INDOOR,
    UserClass.OUTDOOR,
)


class BaseStation(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=1)
    kind: BSKind
    position: tuple[float, float, float]
    transmit_power_dbm: float
    operational_power_w: float = Field(gt=0.0)
    sleep_power_w: float = Field(ge=0.0)
    efficiency: float = Field(gt=0.0)
    total_rbs: int = Field(ge=1)
    carrier_frequency_ghz: float = Field(gt=0.0)

    @model_validator(mode="after")
    def _sleep_below_operational(self) -> "BaseStation":
        if self.sleep_power_w >= self.operational_power_w:
            raise ValueError("sleep power must be below operational power")
        return self


class User(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=1)
    position: tuple[float, float, float]
    user_class: UserClass
    demand_rbs: int = Field(default=1, ge=1)


class ScenarioConfig(BaseModel):
    """Scenario-generation knobs, loadable from a JSON file."""

    model_config = ConfigDict(frozen=True)

    gamma: int = Field(default=10, ge=1, description="number of small cells")
    chi: int = Field(default=600, ge=1, description="number of users")
    area_m: tuple[float, float] = (1000.0, 1000.0)
    haps_altitude_m: float = Field(default=20_000.0, gt=0.0)
    sbs_height_m: float = Field(default=10.0, gt=0.0)
    mbs_height_m: float = Field(default=25.0, gt=0.0)
    user_height_m: float = Field(default=1.5, ge=0.0)
    demand_rbs_per_user: int = Field(default=1, ge=1)
    bs_kinds: dict[BSKind, BSKindParams] = Field(default_factory=default_kind_params)
    radio: RadioParams = RadioParams()
    seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def _validate(self) -> "ScenarioConfig":
        if self.area_m[0] <= 0.0 or self.area_m[1] <= 0.0:
            raise ValueError("area dimensions must be positive")
        for kind in BSKind:
            if kind not in self.bs_kinds:
                raise ValueError(f"missing parameters for BS kind {kind.value!r}")
        return self


class Scenario(BaseModel):
    """Immutable world snapshot: geometry, radio parameters and seed."""

    model_config = ConfigDict(frozen=True)

    area_m: tuple[float, float]
    base_stations: tuple[BaseStation, ...]
    users: tuple[User, ...]
    radio: RadioParams
    seed: int = Field(ge=0, lt=2**64)
    mobility_step: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _validate(self) -> "Scenario":
        kinds = [bs.kind for bs in self.base_stations]
        if kinds.count(BSKind.MBS) != 1 or kinds.count(BSKind.HAPS_SMBS) != 1:
            raise ValueError("scenario needs exactly one MBS and one HAPS super-macro BS")
        if kinds.count(BSKind.SBS) < 1:
            raise ValueError("scenario needs at least one SBS")
        # ids double as array indices throughout the package
        if [bs.id for bs in self.base_stations] != list(range(1, len(self.base_stations) + 1)):
            raise ValueError("base station ids must run 1..B in list order")
        if [u.id for u in self.users] != list(range(1, len(self.users) + 1)):
            raise ValueError("user ids must run 1..chi in list order")
        w, h = self.area_m
        for u in self.users:
            x, y, _ = u.position
            if not (0.0 <= x <= w and 0.0 <= y <= h):
                raise ValueError(f"user {u.id} outside area bounds")
        return self

    @property
    def gamma(self) -> int:
        return sum(1 for bs in self.base_stations if bs.kind == BSKind.SBS)

    @property
    def chi(self) -> int:
        return len(self.users)

    @property
    def sbs_ids(self) -> tuple[int, ...]:
        return tuple(bs.id for bs in self.base_stations if bs.kind == BSKind.SBS)

    def class_counts(self) -> dict[UserClass, int]:
        counts = {uc: 0 for uc in UserClass}
        for u in self.users:
            counts[u.user_class] += 1
        return counts

    def to_json(self) -> str:
        return self.model_dump_json()

    @classmethod
    def from_json(cls, payload: str) -> "Scenario":
        return cls.model_validate_json(payload)


def seeded_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def _sbs_grid_positions(
    gamma: int, width: float, height: float, z: float, rng: np.random.Generator
) -> list[tuple[float, float, float]]:
    # Jittered grid: avoids the fully-overlapping cells a uniform draw can
    # produce while keeping placement seeded.
    cols = math.ceil(math.sqrt(gamma))
    rows = math.ceil(gamma / cols)
    cell_w, cell_h = width / cols, height / rows
    positions = []
    for i in range(gamma):
        r, c = divmod(i, cols)
        cx = (c + 0.5) * cell_w
        cy = (r + 0.5) * cell_h
        jx = rng.uniform(-0.25, 0.25) * cell_w
        jy = rng.uniform(-0.25, 0.25) * cell_h
        positions.append((float(cx + jx), float(cy + jy), z))
    return positions


def generate_scenario(config: ScenarioConfig, seed: int | None = None) -> Scenario:
    """Build a Scenario from a config: jittered-grid SBSs, central MBS and
    HAPS, uniformly placed users with a round-robin class split.

    Identical (config, seed) pairs produce bit-identical scenarios. The
    round-robin class assignment keeps every class count within one of
    chi / 3.
    """
    if seed is None:
        seed = config.seed
    width, height = config.area_m
    rng = seeded_rng(seed, DOMAIN_PLACEMENT)

    stations: list[BaseStation] = []
    sbs_params = config.bs_kinds[BSKind.SBS]
    for idx, pos in enumerate(
        _sbs_grid_positions(config.gamma, width, height, config.sbs_height_m, rng)
    ):
        stations.append(_station(idx + 1, BSKind.SBS, pos, sbs_params))
    center = (width / 2.0, height / 2.0)
    stations.append(
        _station(
            config.gamma + 1,
            BSKind.MBS,
            (center[0], center[1], config.mbs_height_m),
            config.bs_kinds[BSKind.MBS],
        )
    )
    stations.append(
        _station(
            config.gamma + 2,
            BSKind.HAPS_SMBS,
            (center[0], center[1], config.haps_altitude_m),
            config.bs_kinds[BSKind.HAPS_SMBS],
        )
    )

    xs = rng.uniform(0.0, width, config.chi)
    ys = rng.uniform(0.0, height, config.chi)
    users = tuple(
        User(
            id=i + 1,
            position=(float(xs[i]), float(ys[i]), config.user_height_m),
            user_class=USER_CLASS_CYCLE[i % 3],
            demand_rbs=config.demand_rbs_per_user,
        )
        for i in range(config.chi)
    )

    return Scenario(
        area_m=config.area_m,
        base_stations=tuple(stations),
        users=users,
        radio=config.radio,
        seed=seed,
    )


def _station(
    bs_id: int, kind: BSKind, pos: tuple[float, float, float], p: BSKindParams
) -> BaseStation:
    return BaseStation(
        id=bs_id,
        kind=kind,
        position=pos,
        transmit_power_dbm=p.transmit_power_dbm,
        operational_power_w=p.operational_power_w,
        sleep_power_w=p.sleep_power_w,
        efficiency=p.efficiency,
        total_rbs=p.total_rbs,
        carrier_frequency_ghz=p.carrier_frequency_ghz,
    )


def _reflect(value: float, limit: float) -> float:
    # Fold into [0, limit] treating the boundary as a mirror; handles
    # displacements larger than the area via the 2*limit period.
    if limit <= 0.0:
        return 0.0
    period = 2.0 * limit
    m = value % period
    return m if m <= limit else period - m


def step_mobility(scenario: Scenario, step_size_m: float = 5.0) -> Scenario:
    """Advance every user one random-walk step, reflecting at area edges.

    Directions are drawn from a generator keyed on (seed, step counter), so
    replaying a scenario reproduces the exact trajectory. User classes and
    heights never change.
    """
    if step_size_m < 0.0:
        raise ValueError("step size must be non-negative")
    width, height = scenario.area_m
    rng = seeded_rng(scenario.seed, DOMAIN_MOBILITY, scenario.mobility_step)
    angles = rng.uniform(0.0, 2.0 * math.pi, scenario.chi)

    moved = []
    for user, theta in zip(scenario.users, angles):
        x, y, z = user.position
        nx = _reflect(x + step_size_m * math.cos(theta), width)
        ny = _reflect(y + step_size_m * math.sin(theta), height)
        moved.append(user.model_copy(update={"position": (nx, ny, z)}))

    return scenario.model_copy(
        update={"users": tuple(moved), "mobility_step": scenario.mobility_step + 1}
    )
