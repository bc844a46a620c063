"""LTO traction pack: sizing arithmetic, power caps and SoC bookkeeping.

Sign convention: positive terminal power discharges the pack, negative
charges it. The pack is a lossless energy reservoir with power caps; all
conversion losses are modelled in the motors and converter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal

from ebus.errors import InvalidConfig

SECONDS_PER_HOUR = 3600.0

Direction = Literal["charge", "discharge"]


@dataclass(frozen=True)
class BatteryPack:
    """Pack parameters plus the current state of charge.

    Attributes:
        capacity: Energy capacity [Wh].
        specific_energy: [Wh/kg].
        specific_power: [W/kg].
        energy_density: [Wh/L].
        cell_voltage_nominal: [V].
        max_charge_c_rate: Charge power cap as a multiple of capacity [1/h].
        max_discharge_c_rate: Discharge power cap [1/h].
        cycle_durability: (low, high) cycle-life range, carried for reports.
        soc: State of charge in [0, 1].
    """

    capacity: float = 200e3
    specific_energy: float = 110.0
    specific_power: float = 1000.0
    energy_density: float = 177.0
    cell_voltage_nominal: float = 2.3
    max_charge_c_rate: float = 6.0
    max_discharge_c_rate: float = 10.0
    cycle_durability: tuple[int, int] = (6000, 20000)
    soc: float = 1.0

    def __post_init__(self) -> None:
        if not self.capacity > 0:
            raise InvalidConfig("capacity", "must be > 0")
        if not self.specific_energy > 0:
            raise InvalidConfig("specific_energy", "must be > 0")
        if not self.specific_power > 0:
            raise InvalidConfig("specific_power", "must be > 0")
        if not self.cell_voltage_nominal > 0:
            raise InvalidConfig("cell_voltage_nominal", "must be > 0")
        if self.max_charge_c_rate < 0 or self.max_discharge_c_rate < 0:
            raise InvalidConfig("max_charge_c_rate", "C-rates must be >= 0")
        if not 0.0 <= self.soc <= 1.0:
            raise InvalidConfig("soc", "must lie in [0, 1]")

    @property
    def stored_energy(self) -> float:
        """Energy currently stored [Wh]."""
        return self.soc * self.capacity

    def with_soc(self, soc: float) -> BatteryPack:
        return replace(self, soc=soc)


def pack_mass(p: BatteryPack) -> float:
    """Pack mass [kg] from capacity over specific energy, full precision."""
    return p.capacity / p.specific_energy


def display_mass(mass_kg: float) -> int:
    """Whole kilograms as shown in reports (truncated, not rounded)."""
    return math.floor(mass_kg)


def power_limit(p: BatteryPack, direction: Direction) -> float:
    """Terminal power cap [W]: the lower of the specific-power and C-rate bounds."""
    if direction == "charge":
        c_rate = p.max_charge_c_rate
    elif direction == "discharge":
        c_rate = p.max_discharge_c_rate
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return min(p.specific_power * pack_mass(p), c_rate * p.capacity)


def step(p: BatteryPack, terminal_power: float, dt: float) -> tuple[BatteryPack, float]:
    """Advance the pack by ``dt`` seconds at a requested terminal power.

    The request is clipped to the direction's power limit and to the energy
    headroom left in the pack, so SoC never leaves [0, 1].

    Returns:
        The updated pack and the power actually accepted [W].
    """
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    energy_j = p.capacity * SECONDS_PER_HOUR
    if terminal_power > 0:
        headroom = p.soc * energy_j / dt
        accepted = min(terminal_power, power_limit(p, "discharge"), headroom)
    elif terminal_power < 0:
        headroom = (1.0 - p.soc) * energy_j / dt
        accepted = -min(-terminal_power, power_limit(p, "charge"), headroom)
    else:
        return p, 0.0
    soc = p.soc - accepted * dt / energy_j
    return replace(p, soc=min(max(soc, 0.0), 1.0)), accepted


def series_cell_count(pack_input_voltage: float, cell_voltage: float) -> int:
    """Cells in series needed to reach ``pack_input_voltage``.

    >>> series_cell_count(80.0, 2.3)
    35
    """
    if not (pack_input_voltage > 0 and cell_voltage > 0):
        raise ValueError("voltages must be > 0")
    return math.ceil(pack_input_voltage / cell_voltage * (1 - 1e-12))
