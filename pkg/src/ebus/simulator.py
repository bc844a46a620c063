"""Drive-cycle time stepping: road load -> motor split -> converter -> pack.

Each interval ``[t_i, t_i+1]`` uses the forward-difference acceleration and
the midpoint speed. Pack energy bookkeeping follows the battery sign
convention (positive power discharges).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ebus import battery, dynamics
from ebus.battery import SECONDS_PER_HOUR, BatteryPack
from ebus.converter import ConverterSpec, battery_power_for_link
from ebus.errors import InvalidConfig, PackDepleted
from ebus.powertrain import AllocationPolicy, MotorSpec, allocate, reference_motors
from ebus.quantities import RoadState, VehicleConfig

DEFAULT_AUX_LOAD = 8e3
DEFAULT_RESERVE_SOC = 0.05

TRACE_COLUMNS = (
    "t",
    "v",
    "a",
    "f_rolling",
    "f_aero",
    "f_net",
    "f_traction",
    "p_wheel",
    "p_mech",
    "front_mech",
    "rear_mech",
    "p_link",
    "p_battery_request",
    "p_battery",
    "p_friction",
    "soc",
)


@dataclass(frozen=True)
class DriveCycle:
    """Sampled speed profile.

    Attributes:
        t: Sample times [s], strictly increasing from 0.
        v: Speeds [m/s], non-negative.
        grade: Road angle per sample [rad]; zeros when absent.
        name: Label used in reports.
    """

    t: np.ndarray
    v: np.ndarray
    grade: np.ndarray | None = None
    name: str = "cycle"

    def __post_init__(self) -> None:
        t = np.asarray(self.t, dtype=float)
        v = np.asarray(self.v, dtype=float)
        g = np.zeros_like(t) if self.grade is None else np.asarray(self.grade, dtype=float)
        if t.ndim != 1 or t.size == 0:
            raise InvalidConfig("t", "cycle must contain at least one sample")
        if v.shape != t.shape or g.shape != t.shape:
            raise InvalidConfig("v", "t, v and grade must have equal length")
        if t[0] != 0.0:
            raise InvalidConfig("t", "first sample must be at t = 0")
        if np.any(np.diff(t) <= 0):
            raise InvalidConfig("t", "times must be strictly increasing")
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(g))):
            raise InvalidConfig("v", "values must be finite")
        if np.any(v < 0):
            raise InvalidConfig("v", "speeds must be >= 0")
        if np.any(np.abs(g) >= math.pi / 2):
            raise InvalidConfig("grade", "|grade| must be below pi/2")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "grade", g)

    @property
    def duration(self) -> float:
        return float(self.t[-1])


def constant_speed_cycle(speed: float, duration: float, dt: float = 1.0, name: str = "cruise") -> DriveCycle:
    t = np.arange(0.0, duration + 0.5 * dt, dt)
    return DriveCycle(t=t, v=np.full_like(t, speed), name=name)


def city_cycle(
    cruise_speed: float = 13.89,
    stop_spacing: float = 500.0,
    accel: float = 0.7,
    decel: float = 0.7,
    dwell: float = 20.0,
    n_stops: int = 10,
    dt: float = 1.0,
) -> DriveCycle:
    """Synthetic stop-and-go route.

    ``n_stops`` identical legs of ``stop_spacing`` metres: accelerate at
    ``accel`` to ``cruise_speed``, cruise, brake at ``decel`` to a stop, then
    dwell. The exact piecewise speed is sampled every ``dt`` seconds.
    """
    t_acc = cruise_speed / accel
    t_dec = cruise_speed / decel
    d_ramps = 0.5 * cruise_speed * (t_acc + t_dec)
    if d_ramps > stop_spacing:
        raise InvalidConfig("stop_spacing", "too short to reach cruise speed")
    t_cruise = (stop_spacing - d_ramps) / cruise_speed
    leg = t_acc + t_cruise + t_dec + dwell

    t = np.arange(0.0, n_stops * leg + 0.5 * dt, dt)
    tau = np.mod(t, leg)
    # last sample lands on a leg boundary; keep it at rest
    tau[t >= n_stops * leg - 1e-9] = leg
    v = np.where(
        tau < t_acc,
        accel * tau,
        np.where(
            tau < t_acc + t_cruise,
            cruise_speed,
            np.clip(cruise_speed - decel * (tau - t_acc - t_cruise), 0.0, None),
        ),
    )
    return DriveCycle(t=t, v=v, name="city")


@dataclass
class SimulationReport:
    """Aggregates and per-step trace of one drive-cycle run.

    Energies are battery-side watt-hours unless noted; ``energy_dropped_friction``
    sums braking power the motors or pack could not take (motor-shaft side for
    motor saturation, battery side for pack rejection).
    """

    cycle_name: str
    duration: float
    energy_from_battery: float
    energy_regenerated: float
    energy_dropped_friction: float
    energy_unmet_traction: float
    distance: float
    energy_per_km: float
    initial_soc: float
    final_soc: float
    projected_range: float
    range_target: float
    range_target_met: bool
    aux_load: float
    depleted_at: float | None = None
    trace: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def energy_net(self) -> float:
        return self.energy_from_battery - self.energy_regenerated

    def summary(self) -> dict:
        """Report fields without the trace, JSON-ready."""
        return {
            "cycle_name": self.cycle_name,
            "duration_s": self.duration,
            "energy_from_battery_wh": self.energy_from_battery,
            "energy_regenerated_wh": self.energy_regenerated,
            "energy_net_wh": self.energy_net,
            "energy_dropped_friction_wh": self.energy_dropped_friction,
            "energy_unmet_traction_wh": self.energy_unmet_traction,
            "distance_km": self.distance,
            "energy_per_km_wh": _json_float(self.energy_per_km),
            "initial_soc": self.initial_soc,
            "final_soc": self.final_soc,
            "projected_range_km": _json_float(self.projected_range),
            "range_target_km": self.range_target,
            "range_target_met": self.range_target_met,
            "aux_load_w": self.aux_load,
            "depleted_at_s": self.depleted_at,
        }


def _json_float(x: float) -> float | None:
    return x if math.isfinite(x) else None


def projected_range(
    energy_per_km: float, pack: BatteryPack, reserve_soc: float = DEFAULT_RESERVE_SOC
) -> float:
    """Distance [km] a full pack covers down to ``reserve_soc``.

    >>> projected_range(1000.0, BatteryPack())
    190.0
    """
    if not energy_per_km > 0:
        raise ValueError(f"energy_per_km must be > 0, got {energy_per_km}")
    if math.isinf(energy_per_km):
        return 0.0
    return pack.capacity * (1.0 - reserve_soc) / energy_per_km


def run(
    cycle: DriveCycle,
    cfg: VehicleConfig | None = None,
    motors: tuple[MotorSpec, MotorSpec] | None = None,
    pack: BatteryPack | None = None,
    converter: ConverterSpec | None = None,
    policy: AllocationPolicy | None = None,
    aux_load: float = DEFAULT_AUX_LOAD,
    reserve_soc: float = DEFAULT_RESERVE_SOC,
) -> SimulationReport:
    """Drive ``cycle`` and account for every watt-hour through the pack.

    Per interval: road-load forces at the midpoint speed, shaft demand through
    the transmission efficiency, front/rear split, motor and converter losses,
    a constant auxiliary draw on the battery side, then one pack step.
    Braking power the pack cannot absorb is booked as friction.

    Raises:
        PackDepleted: If the pack empties before the cycle ends; the partial
            report is attached to the exception.
    """
    cfg = cfg or VehicleConfig()
    motors = motors or reference_motors()
    pack = pack or BatteryPack()
    converter = converter or ConverterSpec()
    policy = policy or AllocationPolicy()
    if aux_load < 0:
        raise InvalidConfig("aux_load", "must be >= 0")

    if cycle.v.max(initial=0.0) > cfg.top_speed:
        warnings.warn(
            f"cycle {cycle.name!r} exceeds top speed {cfg.top_speed} m/s", stacklevel=2
        )

    n = cycle.t.size - 1
    rows = np.zeros((n, len(TRACE_COLUMNS)))
    e_out = e_in = e_friction = e_unmet = 0.0
    distance = 0.0
    soc0 = pack.soc
    depleted_at = None
    steps = 0

    for i in range(n):
        dt = float(cycle.t[i + 1] - cycle.t[i])
        a = float(cycle.v[i + 1] - cycle.v[i]) / dt
        v_mid = 0.5 * float(cycle.v[i] + cycle.v[i + 1])
        road = RoadState(grade_angle=0.5 * float(cycle.grade[i] + cycle.grade[i + 1]))

        fb = dynamics.traction_force(cfg, v_mid, a, road)
        p_wheel = dynamics.tractive_power(fb, v_mid)
        p_mech = dynamics.required_motor_power(p_wheel, cfg.drivetrain_efficiency)
        split = allocate(p_mech, v_mid, a, motors, policy)
        p_link = split.total_elec
        p_request = battery_power_for_link(p_link, converter) + aux_load

        pack, accepted = battery.step(pack, p_request, dt)

        friction = 0.0
        if split.dropped_power < 0:
            friction -= split.dropped_power
            e_friction -= split.dropped_power * dt
        elif split.dropped_power > 0:
            e_unmet += split.dropped_power * dt
        if p_request < 0 and accepted > p_request:
            friction += accepted - p_request
            e_friction += (accepted - p_request) * dt
        if accepted > 0:
            e_out += accepted * dt
        else:
            e_in -= accepted * dt
        distance += v_mid * dt

        rows[i] = (
            cycle.t[i + 1], v_mid, a,
            fb.f_rolling, fb.f_aero, fb.f_net, fb.f_traction,
            p_wheel, p_mech, split.front_mech, split.rear_mech,
            p_link, p_request, accepted, friction, pack.soc,
        )
        steps = i + 1
        if p_request > 0 and pack.soc <= 0.0 and (i < n - 1 or accepted < p_request):
            depleted_at = float(cycle.t[i + 1])
            break

    e_out_wh = e_out / SECONDS_PER_HOUR
    e_in_wh = e_in / SECONDS_PER_HOUR
    km = distance / 1000.0
    net = e_out_wh - e_in_wh
    if km > 0:
        per_km = net / km
    else:
        per_km = math.inf if net > 0 else math.nan
    if per_km > 0:
        rng = projected_range(per_km, pack, reserve_soc)
    else:
        rng = math.inf if km > 0 else 0.0
    report = SimulationReport(
        cycle_name=cycle.name,
        duration=float(cycle.t[steps]) if steps else 0.0,
        energy_from_battery=e_out_wh,
        energy_regenerated=e_in_wh,
        energy_dropped_friction=e_friction / SECONDS_PER_HOUR,
        energy_unmet_traction=e_unmet / SECONDS_PER_HOUR,
        distance=km,
        energy_per_km=per_km,
        initial_soc=soc0,
        final_soc=pack.soc,
        projected_range=rng,
        range_target=cfg.operating_range_target,
        range_target_met=bool(rng >= cfg.operating_range_target),
        aux_load=aux_load,
        depleted_at=depleted_at,
        trace={name: rows[:steps, j] for j, name in enumerate(TRACE_COLUMNS)},
    )
    if depleted_at is not None:
        raise PackDepleted(depleted_at, report)
    return report
