"""Front/rear power allocation for the dual-motor part-time AWD drivetrain."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

from ebus.errors import InvalidConfig, NotRegenCapable

Mode = Literal["propulsion", "regen"]


@dataclass(frozen=True)
class MotorSpec:
    """Power envelope of one traction motor.

    Attributes:
        axle: ``"front"`` or ``"rear"``.
        kind: ``"pmsm"`` or ``"induction"``.
        rated_power: Continuous shaft power rating [W].
        rated_voltage: Nominal supply voltage [V].
        regen_capable: Whether the motor can absorb braking power.
        drive_efficiency: Electrical to mechanical efficiency.
        regen_efficiency: Mechanical to electrical efficiency.
    """

    axle: str
    kind: str
    rated_power: float
    rated_voltage: float = 320.0
    regen_capable: bool = True
    drive_efficiency: float = 0.92
    regen_efficiency: float = 0.92

    def __post_init__(self) -> None:
        if self.axle not in ("front", "rear"):
            raise InvalidConfig("axle", f"unknown axle {self.axle!r}")
        if self.kind not in ("pmsm", "induction"):
            raise InvalidConfig("kind", f"unknown motor kind {self.kind!r}")
        if not self.rated_power > 0:
            raise InvalidConfig("rated_power", "must be > 0")
        if not self.rated_voltage > 0:
            raise InvalidConfig("rated_voltage", "must be > 0")
        for name in ("drive_efficiency", "regen_efficiency"):
            if not 0 < getattr(self, name) <= 1:
                raise InvalidConfig(name, "must lie in (0, 1]")


def reference_motors() -> tuple[MotorSpec, MotorSpec]:
    """Front 133 kW PMSM and rear 235 kW induction motor, both at 320 V."""
    front = MotorSpec(axle="front", kind="pmsm", rated_power=133e3)
    rear = MotorSpec(axle="rear", kind="induction", rated_power=235e3)
    return front, rear


@dataclass(frozen=True)
class AllocationPolicy:
    """Thresholds governing the split.

    Attributes:
        launch_speed_threshold: Below this speed [m/s] the demand is shared
            equally between axles.
        hard_accel_threshold: At or above this acceleration [m/s^2] the front
            motor only tops up what the rear cannot deliver.
        regen_front_share: Fraction of braking power offered to the front
            motor first.
    """

    launch_speed_threshold: float = 4.17
    hard_accel_threshold: float = 0.7
    regen_front_share: float = 0.6

    def __post_init__(self) -> None:
        if not self.launch_speed_threshold > 0:
            raise InvalidConfig("launch_speed_threshold", "must be > 0")
        if not self.hard_accel_threshold > 0:
            raise InvalidConfig("hard_accel_threshold", "must be > 0")
        if not 0.5 <= self.regen_front_share <= 1:
            raise InvalidConfig("regen_front_share", "must lie in [0.5, 1]")


@dataclass(frozen=True)
class PowerSplit:
    """Result of one allocation. Mechanical values are shaft powers [W].

    ``dropped_power`` is the part of the demand no motor took: unmet traction
    when positive, friction-brake power when negative. It closes the balance
    ``front_mech + rear_mech + dropped_power == demand``.
    """

    front_mech: float
    rear_mech: float
    front_elec: float
    rear_elec: float
    limited: bool
    dropped_power: float = 0.0

    @property
    def total_mech(self) -> float:
        return self.front_mech + self.rear_mech

    @property
    def total_elec(self) -> float:
        return self.front_elec + self.rear_elec


def capability(motors: Iterable[MotorSpec], mode: Mode = "propulsion") -> float:
    """Summed rating of the motors usable in ``mode``."""
    if mode == "propulsion":
        return sum(m.rated_power for m in motors)
    if mode == "regen":
        return sum(m.rated_power for m in motors if m.regen_capable)
    raise ValueError(f"unknown mode {mode!r}")


def _electrical(motor: MotorSpec, mech: float) -> float:
    if mech > 0:
        return mech / motor.drive_efficiency
    return mech * motor.regen_efficiency


def _split_propulsion(
    demand: float,
    speed: float,
    accel: float,
    front: MotorSpec,
    rear: MotorSpec,
    policy: AllocationPolicy,
) -> tuple[float, float]:
    f_cap, r_cap = front.rated_power, rear.rated_power
    if speed < policy.launch_speed_threshold:
        half = 0.5 * demand
        f = min(half, f_cap)
        r = min(half, r_cap)
        # hand the saturated side's overflow to the other axle
        r = min(r + (half - f), r_cap)
        f = min(f + (half - min(half, r_cap)), f_cap)
        return f, r
    if demand <= r_cap and accel < policy.hard_accel_threshold:
        return 0.0, demand
    r = min(demand, r_cap)
    f = min(demand - r, f_cap)
    return f, r


def allocate(
    demand_mech: float,
    speed: float,
    accel: float,
    motors: tuple[MotorSpec, MotorSpec],
    policy: AllocationPolicy | None = None,
) -> PowerSplit:
    """Split a shaft-power demand between the front and rear motors.

    Propulsion: equal shares below the launch speed; rear motor alone while it
    can cover the demand and acceleration is moderate; otherwise the rear
    saturates first and the front covers the rest. Braking: the front motor is
    offered ``regen_front_share`` of the power, the rear takes what remains,
    and anything beyond both ratings goes to the friction brakes.

    Args:
        demand_mech: Total shaft power [W], negative for braking.
        speed: Vehicle speed [m/s].
        accel: Vehicle acceleration [m/s^2].
        motors: ``(front, rear)`` pair.
        policy: Split thresholds; defaults to :class:`AllocationPolicy()`.

    Raises:
        NotRegenCapable: Braking demand with no regen-capable motor.
    """
    policy = policy or AllocationPolicy()
    front, rear = motors
    if demand_mech == 0:
        return PowerSplit(0.0, 0.0, 0.0, 0.0, False, 0.0)

    if demand_mech > 0:
        f, r = _split_propulsion(demand_mech, speed, accel, front, rear, policy)
    else:
        if not (front.regen_capable or rear.regen_capable):
            raise NotRegenCapable("no motor accepts regenerative braking")
        need = -demand_mech
        f = min(policy.regen_front_share * need, front.rated_power) if front.regen_capable else 0.0
        r = min(need - f, rear.rated_power) if rear.regen_capable else 0.0
        f, r = -f, -r

    dropped = demand_mech - f - r
    # sub-ulp residues from the subtraction are not a clipped demand
    limited = abs(dropped) > 1e-9 * abs(demand_mech)
    if not limited:
        dropped = 0.0
    return PowerSplit(
        front_mech=f,
        rear_mech=r,
        front_elec=_electrical(front, f),
        rear_elec=_electrical(rear, r),
        limited=limited,
        dropped_power=dropped,
    )
