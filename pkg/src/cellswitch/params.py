"""Shared enums and radio/power parameter models.

Unit conventions used across the package: distances in metres, frequencies
in GHz, losses in dB, powers in dBm (transmit / received / noise) or watts
(circuit power), bandwidth in Hz.
"""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator


class BSKind(str, Enum):
    """Terrestrial small / macro cells plus the HAPS-mounted super-macro cell."""

    SBS = "sbs"
    MBS = "mbs"
    HAPS_SMBS = "haps_smbs"


class UserClass(str, Enum):
    HIGH_LOSS_INDOOR = "high_loss_indoor"
    LOW_LOSS_INDOOR = "low_loss_indoor"
    OUTDOOR = "outdoor"


INDOOR_CLASSES = (UserClass.HIGH_LOSS_INDOOR, UserClass.LOW_LOSS_INDOOR)

TERRESTRIAL_KINDS = (BSKind.SBS, BSKind.MBS)


class FadingMode(str, Enum):
    OFF = "off"
    STOCHASTIC = "stochastic"


class ClassExtraLoss(BaseModel):
    """Per-user-class penetration loss on top of building entry loss (dB).

    Outdoor users see no extra loss by definition; building entry loss also
    never applies to them.
    """

    model_config = ConfigDict(frozen=True)

    high_loss_indoor: float = Field(default=10.0, ge=0.0)
    low_loss_indoor: float = Field(default=2.0, ge=0.0)
    outdoor: float = 0.0

    @model_validator(mode="after")
    def _outdoor_is_lossless(self) -> "ClassExtraLoss":
        if self.outdoor != 0.0:
            raise ValueError("outdoor extra loss must be 0 dB")
        return self

    def for_class(self, user_class: UserClass) -> float:
        return getattr(self, user_class.value)


class RadioParams(BaseModel):
    """Link-budget and receiver parameters shared by every link model."""

    model_config = ConfigDict(frozen=True)

    bel_db: float = Field(default=0.0, ge=0.0, le=30.0)
    extra_loss_db: ClassExtraLoss = ClassExtraLoss()
    atmospheric_loss_db: float = Field(default=1.5, ge=0.0)
    shadow_sigma_los_db: float = Field(default=4.0, ge=0.0)
    shadow_sigma_nlos_db: float = Field(default=6.0, ge=0.0)
    fading_mode: FadingMode = FadingMode.OFF
    # thermal noise over one 180 kHz resource block
    noise_power_dbm: float = -121.45
    rb_bandwidth_hz: float = Field(default=180e3, gt=0.0)
    receiver_sensitivity_dbm: float = -100.0
    # when False the SINR denominator only sums interferers of the serving
    # link's own tier (terrestrial vs HAPS)
    cross_tier_interference: bool = True


class BSKindParams(BaseModel):
    """Transmit/circuit power, efficiency and capacity for one BS kind."""

    model_config = ConfigDict(frozen=True)

    transmit_power_dbm: float
    operational_power_w: float = Field(gt=0.0)
    sleep_power_w: float = Field(ge=0.0)
    efficiency: float = Field(gt=0.0)
    total_rbs: int = Field(ge=1)
    carrier_frequency_ghz: float = Field(default=2.0, gt=0.0)

    @model_validator(mode="after")
    def _sleep_below_operational(self) -> "BSKindParams":
        if self.sleep_power_w >= self.operational_power_w:
            raise ValueError("sleep power must be below operational power")
        return self


def default_kind_params() -> dict[BSKind, BSKindParams]:
    """EARTH-style coefficient defaults per BS kind.

    The macro and HAPS super-macro cells share macro-class coefficients; the
    HAPS cell carries a larger RB pool to act as the wide-area offload layer.
    """
    return {
        BSKind.SBS: BSKindParams(
            transmit_power_dbm=38.0,
            operational_power_w=56.0,
            sleep_power_w=39.0,
            efficiency=2.6,
            total_rbs=100,
        ),
        BSKind.MBS: BSKindParams(
            transmit_power_dbm=46.0,
            operational_power_w=130.0,
            sleep_power_w=75.0,
            efficiency=4.7,
            total_rbs=200,
        ),
        BSKind.HAPS_SMBS: BSKindParams(
            transmit_power_dbm=46.0,
            operational_power_w=130.0,
            sleep_power_w=75.0,
            efficiency=4.7,
            total_rbs=500,
        ),
    }
