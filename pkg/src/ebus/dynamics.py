"""Longitudinal road-load forces and traction power."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ebus.errors import NegativeRelativeSpeed
from ebus.quantities import FLAT, RoadState, VehicleConfig


@dataclass(frozen=True)
class ForceBreakdown:
    """Force components at one operating point [N].

    ``f_net`` is the inertial term M*a plus the grade term M*g*sin(theta);
    ``f_traction`` is the sum of the other three as computed.
    """

    f_rolling: float
    f_aero: float
    f_net: float
    f_traction: float


def rolling_force(cfg: VehicleConfig, road: RoadState = FLAT) -> float:
    """Rolling resistance C_r * M * g * cos(theta) using ``cfg.sim_mass``."""
    return cfg.rolling_coeff * cfg.sim_mass * cfg.gravity * math.cos(road.grade_angle)


def aero_force(cfg: VehicleConfig, speed: float, road: RoadState = FLAT) -> float:
    """Aerodynamic drag 0.5 * C_a * A_f * rho * v_rel^2.

    Raises:
        NegativeRelativeSpeed: If a tailwind exceeds the vehicle speed.
    """
    v_rel = speed + road.headwind
    if v_rel < 0:
        raise NegativeRelativeSpeed(f"relative air speed {v_rel:g} m/s < 0")
    return 0.5 * cfg.drag_coeff * cfg.frontal_area * cfg.air_density * v_rel * v_rel


def grade_force(cfg: VehicleConfig, road: RoadState = FLAT) -> float:
    return cfg.sim_mass * cfg.gravity * math.sin(road.grade_angle)


def traction_force(
    cfg: VehicleConfig, speed: float, accel: float, road: RoadState = FLAT
) -> ForceBreakdown:
    f_roll = rolling_force(cfg, road)
    f_aero = aero_force(cfg, speed, road)
    f_net = cfg.sim_mass * accel
    if road.grade_angle != 0.0:
        f_net += grade_force(cfg, road)
    return ForceBreakdown(
        f_rolling=f_roll,
        f_aero=f_aero,
        f_net=f_net,
        f_traction=f_net + f_roll + f_aero,
    )


def tractive_power(fb: ForceBreakdown, speed: float) -> float:
    """Wheel power [W]; negative when the wheels absorb energy."""
    if speed < 0:
        raise ValueError(f"speed must be >= 0, got {speed}")
    return fb.f_traction * speed


def required_motor_power(p_traction: float, efficiency: float) -> float:
    """Motor shaft power for a wheel power through the transmission.

    Propulsion divides by the efficiency; regeneration multiplies, so the
    transmission loss always reduces what reaches the far side.
    """
    if p_traction > 0:
        return p_traction / efficiency
    return p_traction * efficiency


def design_point_power(cfg: VehicleConfig) -> float:
    """Shaft power needed at top speed under design acceleration on flat road."""
    fb = traction_force(cfg, cfg.top_speed, cfg.max_accel)
    return required_motor_power(tractive_power(fb, cfg.top_speed), cfg.drivetrain_efficiency)


def size_motor_rating(cfg: VehicleConfig, granularity: float = 10e3) -> float:
    """Design-point shaft power rounded up to ``granularity`` watts.

    >>> size_motor_rating(VehicleConfig())
    450000.0
    """
    required = design_point_power(cfg)
    if required <= 0:
        return 0.0
    # relative slack keeps exact multiples from rounding up a whole step
    steps = math.ceil(required / granularity * (1 - 1e-12))
    return steps * granularity
