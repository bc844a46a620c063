"""Sizing and simulation toolkit for battery-electric city buses."""

from ebus.battery import BatteryPack
from ebus.charging import ChargeProfile
from ebus.converter import ConverterSpec
from ebus.depot import BusState, DepotConfig
from ebus.powertrain import AllocationPolicy, MotorSpec, reference_motors
from ebus.quantities import RoadState, VehicleConfig, validate_config
from ebus.simulator import DriveCycle, city_cycle, run

__version__ = "0.1.0"

__all__ = [
    "AllocationPolicy",
    "BatteryPack",
    "BusState",
    "ChargeProfile",
    "ConverterSpec",
    "DepotConfig",
    "DriveCycle",
    "MotorSpec",
    "RoadState",
    "VehicleConfig",
    "city_cycle",
    "reference_motors",
    "run",
    "validate_config",
]
