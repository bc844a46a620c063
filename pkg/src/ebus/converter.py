"""Steady-state ideal model of the bidirectional battery-to-link DC-DC stage.

Gain law of an isolated current-fed boost:  V_out = V_in / (n * (1 - D)).
Smaller turns ratio ``n`` boosts more.
"""

from __future__ import annotations

from dataclasses import dataclass

from ebus.errors import GainSingularity, InvalidConfig, QuadrantViolation

GAIN_EPS = 1e-6
REFERENCE_LINK_VOLTAGE = 741.38


def solve_duty_cycle(input_voltage: float, turns_ratio: float, output_voltage: float) -> float:
    """Duty cycle giving ``output_voltage`` under the ideal gain law."""
    if output_voltage <= 0 or input_voltage <= 0 or turns_ratio <= 0:
        raise ValueError("voltages and turns ratio must be > 0")
    d = 1.0 - input_voltage / (turns_ratio * output_voltage)
    if not 0 < d < 1:
        raise ValueError(f"no duty cycle in (0, 1) reaches {output_voltage} V")
    return d


@dataclass(frozen=True)
class ConverterSpec:
    """Traction converter parameters.

    The default duty cycle is the one that lifts 80 V to 741.38 V with a
    0.27 turns ratio (about 0.60034).
    """

    turns_ratio: float = 0.27
    duty_cycle: float = solve_duty_cycle(80.0, 0.27, REFERENCE_LINK_VOLTAGE)
    input_voltage: float = 80.0
    efficiency: float = 0.97
    hv_link_target_range: tuple[float, float] = (700.0, 800.0)

    def __post_init__(self) -> None:
        if not self.turns_ratio > 0:
            raise InvalidConfig("turns_ratio", "must be > 0")
        if not 0 < self.duty_cycle < 1:
            raise InvalidConfig("duty_cycle", "must lie in (0, 1)")
        if not 0 < self.efficiency <= 1:
            raise InvalidConfig("efficiency", "must lie in (0, 1]")
        lo, hi = self.hv_link_target_range
        if not lo <= hi:
            raise InvalidConfig("hv_link_target_range", "low bound exceeds high bound")


def hv_link_voltage(c: ConverterSpec) -> float:
    """High-voltage link voltage [V].

    Raises:
        GainSingularity: If the duty cycle is within 1e-6 of one.
    """
    if c.duty_cycle >= 1.0 - GAIN_EPS:
        raise GainSingularity(f"duty cycle {c.duty_cycle} too close to 1")
    return c.input_voltage / (c.turns_ratio * (1.0 - c.duty_cycle))


def check_link_in_range(v: float, spec: ConverterSpec) -> bool:
    lo, hi = spec.hv_link_target_range
    return lo <= v <= hi


def transfer_power(requested: float, c: ConverterSpec, link_voltage: float | None = None) -> float:
    """Power leaving the converter for ``requested`` watts entering it.

    Positive flow runs battery to link, negative link to battery; the
    efficiency applies to the magnitude either way. Voltage stays unipolar
    while current reverses, so a negative link or input voltage is rejected.

    Raises:
        QuadrantViolation: If the operating point has reversed voltage.
    """
    v_link = hv_link_voltage(c) if link_voltage is None else link_voltage
    if v_link < 0 or c.input_voltage < 0:
        raise QuadrantViolation(f"link voltage {v_link:g} V has reversed polarity")
    return requested * c.efficiency


def battery_power_for_link(link_power: float, c: ConverterSpec) -> float:
    """Battery-side power when the link draws (or returns) ``link_power``."""
    if link_power > 0:
        return link_power / c.efficiency
    return transfer_power(link_power, c)
