"""Vehicle configuration records and unit helpers.

Speeds are m/s, masses kg, angles radians. Conversions to km/h and degrees
happen only at the file boundary.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Mapping

from ebus.errors import InvalidConfig

KMH_PER_MS = 3.6


def kmh_to_ms(speed_kmh: float) -> float:
    return speed_kmh / KMH_PER_MS


def ms_to_kmh(speed_ms: float) -> float:
    return speed_ms * KMH_PER_MS


@dataclass(frozen=True)
class VehicleConfig:
    """Body, mass and resistance parameters of the bus.

    Defaults describe the 18 m reference bus. ``sim_mass`` is the mass used in
    the force equations and defaults to the payload figure (18 t), not the
    gross 28 t; set it explicitly for gross-weight studies.

    Attributes:
        curb_mass: Empty vehicle mass [kg].
        payload_mass: Carried mass [kg].
        sim_mass: Mass entering the rolling, inertial and grade terms [kg].
        frontal_area: Projected frontal area [m^2].
        drag_coeff: Aerodynamic drag coefficient [-].
        rolling_coeff: Rolling resistance coefficient [-].
        gravity: Gravitational acceleration [m/s^2].
        air_density: Air density [kg/m^3].
        top_speed: Design top speed [m/s].
        avg_speed: Typical city running speed [m/s].
        max_accel: Design acceleration [m/s^2].
        drivetrain_efficiency: Motor-shaft to wheel efficiency, in (0, 1].
        operating_range_target: Required range per charge [km].
    """

    curb_mass: float = 10000.0
    payload_mass: float = 18000.0
    sim_mass: float = 18000.0
    frontal_area: float = 8.925
    drag_coeff: float = 0.7
    rolling_coeff: float = 0.015
    gravity: float = 9.8
    air_density: float = 1.225
    top_speed: float = 22.2
    avg_speed: float = 13.89
    max_accel: float = 0.7
    drivetrain_efficiency: float = 0.85
    operating_range_target: float = 50.0

    @property
    def gross_mass(self) -> float:
        return self.curb_mass + self.payload_mass

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


_FIELD_NAMES = tuple(f.name for f in fields(VehicleConfig))


def _check(cfg: VehicleConfig) -> None:
    for name in _FIELD_NAMES:
        value = getattr(cfg, name)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InvalidConfig(name, f"expected a number, got {value!r}")
        if not math.isfinite(value):
            raise InvalidConfig(name, "must be finite")
    for name in ("curb_mass", "payload_mass", "sim_mass"):
        if getattr(cfg, name) <= 0:
            raise InvalidConfig(name, "mass must be > 0")
    if cfg.frontal_area <= 0:
        raise InvalidConfig("frontal_area", "must be > 0")
    if cfg.drag_coeff < 0:
        raise InvalidConfig("drag_coeff", "must be >= 0")
    if cfg.rolling_coeff < 0:
        raise InvalidConfig("rolling_coeff", "must be >= 0")
    if cfg.gravity <= 0:
        raise InvalidConfig("gravity", "must be > 0")
    if cfg.air_density <= 0:
        raise InvalidConfig("air_density", "must be > 0")
    if not 0 < cfg.drivetrain_efficiency <= 1:
        raise InvalidConfig("drivetrain_efficiency", "must lie in (0, 1]")
    if cfg.avg_speed <= 0:
        raise InvalidConfig("avg_speed", "must be > 0")
    if cfg.top_speed <= cfg.avg_speed:
        raise InvalidConfig("top_speed", "must exceed avg_speed")
    if cfg.max_accel < 0:
        raise InvalidConfig("max_accel", "must be >= 0")
    if cfg.operating_range_target <= 0:
        raise InvalidConfig("operating_range_target", "must be > 0")


def validate_config(raw: VehicleConfig | Mapping[str, Any]) -> VehicleConfig:
    """Return a validated :class:`VehicleConfig`.

    ``raw`` may be a config instance or a mapping of field names; missing
    mapping keys take their defaults. Values are passed through unchanged.

    Raises:
        InvalidConfig: Naming the first violated invariant.
    """
    if isinstance(raw, VehicleConfig):
        cfg = raw
    else:
        unknown = sorted(set(raw) - set(_FIELD_NAMES))
        if unknown:
            raise InvalidConfig(unknown[0], "unknown vehicle field")
        cfg = VehicleConfig(**raw)
    _check(cfg)
    return cfg


@dataclass(frozen=True)
class RoadState:
    """Road condition seen by the vehicle at one instant.

    Attributes:
        grade_angle: Road inclination [rad], positive uphill.
        headwind: Wind speed against the direction of travel [m/s].
    """

    grade_angle: float = 0.0
    headwind: float = 0.0

    def __post_init__(self) -> None:
        if not abs(self.grade_angle) < math.pi / 2:
            raise InvalidConfig("grade_angle", "|grade| must be below pi/2")
        if not math.isfinite(self.headwind):
            raise InvalidConfig("headwind", "must be finite")

    @classmethod
    def from_degrees(cls, grade_deg: float, headwind: float = 0.0) -> RoadState:
        return cls(math.radians(grade_deg), headwind)


FLAT = RoadState()
