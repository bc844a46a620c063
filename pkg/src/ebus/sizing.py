"""Design-point sizing report with checks against the reference design values.

Each reference value is only checked when the inputs it depends on match the
reference bus; otherwise the recomputed value is reported as
``not-applicable``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from ebus import battery, dynamics
from ebus.battery import BatteryPack
from ebus.charging import ChargeProfile, quoted_full_charge_check
from ebus.converter import ConverterSpec, check_link_in_range, hv_link_voltage
from ebus.powertrain import MotorSpec, capability, reference_motors
from ebus.quantities import VehicleConfig

PASS, FAIL, NOT_APPLICABLE = "pass", "fail", "not-applicable"


@dataclass(frozen=True)
class ReferenceValue:
    name: str
    unit: str
    expected: float
    tolerance: float
    applies: Callable[[VehicleConfig, BatteryPack, ConverterSpec], bool]


def _vehicle_is_reference(cfg, pack, conv) -> bool:
    return cfg == VehicleConfig()


def _pack_is_reference(cfg, pack, conv) -> bool:
    ref = BatteryPack()
    return pack.capacity == ref.capacity and pack.specific_energy == ref.specific_energy


def _cells_are_reference(cfg, pack, conv) -> bool:
    return conv.input_voltage == 80.0 and pack.cell_voltage_nominal == 2.3


def _converter_is_reference(cfg, pack, conv) -> bool:
    ref = ConverterSpec()
    return (conv.input_voltage, conv.turns_ratio, conv.duty_cycle) == (
        ref.input_voltage,
        ref.turns_ratio,
        ref.duty_cycle,
    )


REFERENCE_VALUES = (
    ReferenceValue("rolling_force", "N", 2646.0, 1e-9, _vehicle_is_reference),
    ReferenceValue("aero_force", "N", 1885.90, 0.05, _vehicle_is_reference),
    ReferenceValue("net_force", "N", 12600.0, 1e-9, _vehicle_is_reference),
    ReferenceValue("traction_force", "N", 17131.90, 0.1, _vehicle_is_reference),
    ReferenceValue("tractive_power", "kW", 380.33, 0.1, _vehicle_is_reference),
    ReferenceValue("required_motor_power", "kW", 447.44, 0.05, _vehicle_is_reference),
    ReferenceValue("motor_rating", "kW", 450.0, 0.0, _vehicle_is_reference),
    ReferenceValue("pack_mass_display", "kg", 1818.0, 0.0, _pack_is_reference),
    ReferenceValue("series_cells", "cells", 35.0, 0.0, _cells_are_reference),
    ReferenceValue("hv_link_voltage", "V", 741.38, 0.05, _converter_is_reference),
)


def compute_design_values(
    cfg: VehicleConfig, pack: BatteryPack, converter: ConverterSpec
) -> dict[str, float]:
    fb = dynamics.traction_force(cfg, cfg.top_speed, cfg.max_accel)
    p_wheel = dynamics.tractive_power(fb, cfg.top_speed)
    mass = battery.pack_mass(pack)
    return {
        "rolling_force": fb.f_rolling,
        "aero_force": fb.f_aero,
        "net_force": fb.f_net,
        "traction_force": fb.f_traction,
        "tractive_power": p_wheel / 1e3,
        "required_motor_power": dynamics.required_motor_power(p_wheel, cfg.drivetrain_efficiency) / 1e3,
        "motor_rating": dynamics.size_motor_rating(cfg) / 1e3,
        "pack_mass": mass,
        "pack_mass_display": float(battery.display_mass(mass)),
        "series_cells": float(battery.series_cell_count(converter.input_voltage, pack.cell_voltage_nominal)),
        "hv_link_voltage": hv_link_voltage(converter),
        "pack_charge_limit": battery.power_limit(pack, "charge") / 1e3,
        "pack_discharge_limit": battery.power_limit(pack, "discharge") / 1e3,
    }


def sizing_report(
    cfg: VehicleConfig | None = None,
    motors: tuple[MotorSpec, MotorSpec] | None = None,
    pack: BatteryPack | None = None,
    converter: ConverterSpec | None = None,
    profile: ChargeProfile | None = None,
) -> dict:
    """Compute the design-point chain and check it against reference values.

    Returns a JSON-ready dict with ``values``, per-value ``checks``, an
    ``all_pass`` flag (no check failed) and ``notes`` on known
    inconsistencies of the reference design.
    """
    cfg = cfg or VehicleConfig()
    motors = motors or reference_motors()
    pack = pack or BatteryPack()
    converter = converter or ConverterSpec()

    values = compute_design_values(cfg, pack, converter)
    checks = []
    for ref in REFERENCE_VALUES:
        value = values[ref.name]
        if not ref.applies(cfg, pack, converter):
            status = NOT_APPLICABLE
        elif math.isclose(value, ref.expected, rel_tol=0.0, abs_tol=ref.tolerance):
            status = PASS
        else:
            status = FAIL
        checks.append(
            {
                "name": ref.name,
                "unit": ref.unit,
                "value": value,
                "expected": ref.expected,
                "tolerance": ref.tolerance,
                "status": status,
            }
        )

    link_ok = check_link_in_range(values["hv_link_voltage"], converter)
    motor_cap = capability(motors, "propulsion") / 1e3
    notes = []
    if motor_cap < values["motor_rating"]:
        notes.append(
            f"motor pair capability {motor_cap:g} kW is below the sized rating "
            f"{values['motor_rating']:g} kW; demands above {motor_cap:g} kW are clipped"
        )
    if not link_ok:
        notes.append("hv link voltage outside its target range")
    claim = quoted_full_charge_check(pack, profile)
    if not claim["consistent"]:
        notes.append(
            f"quoted {claim['quoted_time_s'] / 60:g} min full charge at "
            f"{claim['charger_power_w'] / 1e3:g} kW does not hold: "
            f"{claim['computed_time_s']:.0f} s computed for {pack.capacity / 1e3:g} kWh"
        )
    return {
        "values": values,
        "motor_capability_kw": motor_cap,
        "hv_link_in_range": link_ok,
        "checks": checks,
        "all_pass": all(c["status"] != FAIL for c in checks) and link_ok,
        "full_charge_claim": claim,
        "notes": notes,
    }


def format_sizing_report(report: dict) -> str:
    """Fixed-width table of the checks followed by the notes."""
    lines = [f"{'quantity':<22}{'value':>14}  {'unit':<6}{'expected':>12}  status"]
    for c in report["checks"]:
        lines.append(
            f"{c['name']:<22}{c['value']:>14.2f}  {c['unit']:<6}{c['expected']:>12.2f}  {c['status']}"
        )
    lines.append(f"{'hv_link_in_range':<22}{str(report['hv_link_in_range']):>14}")
    lines.append(f"{'motor_capability':<22}{report['motor_capability_kw']:>14.2f}  kW")
    for note in report["notes"]:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"
