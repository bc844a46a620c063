"""File formats: scenario config JSON, drive-cycle CSV, fleet JSON, report writers."""

from __future__ import annotations

import copy
import csv
import json
import math
from dataclasses import asdict, dataclass, field, fields
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping

import jsonschema
import numpy as np

from ebus.battery import BatteryPack
from ebus.charging import ChargeProfile
from ebus.converter import ConverterSpec
from ebus.depot import BusState, DepotConfig
from ebus.errors import EbusError, InvalidConfig
from ebus.powertrain import AllocationPolicy, MotorSpec, reference_motors
from ebus.quantities import VehicleConfig, validate_config
from ebus.simulator import DEFAULT_AUX_LOAD, DEFAULT_RESERVE_SOC, DriveCycle

SECTIONS = ("vehicle", "motors", "pack", "converter", "policy", "charging", "depot", "simulation")


class CycleFormatError(EbusError, ValueError):
    """Malformed drive-cycle CSV; ``line`` is 1-based."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("ebus.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def validate_document(doc: Any, schema_name: str) -> None:
    """Raise :class:`InvalidConfig` if ``doc`` does not match the named schema."""
    try:
        jsonschema.validate(doc, load_schema(schema_name))
    except jsonschema.ValidationError as exc:
        where = ".".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InvalidConfig(where, exc.message) from None


@dataclass(frozen=True)
class SimulationSettings:
    aux_load: float = DEFAULT_AUX_LOAD
    reserve_soc: float = DEFAULT_RESERVE_SOC
    dt: float = 1.0
    city_cycle: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Scenario:
    """Every record a command needs, built from one config document."""

    vehicle: VehicleConfig = field(default_factory=VehicleConfig)
    motors: tuple[MotorSpec, MotorSpec] = field(default_factory=reference_motors)
    pack: BatteryPack = field(default_factory=BatteryPack)
    converter: ConverterSpec = field(default_factory=ConverterSpec)
    policy: AllocationPolicy = field(default_factory=AllocationPolicy)
    charging: ChargeProfile = field(default_factory=ChargeProfile)
    depot: DepotConfig = field(default_factory=DepotConfig)
    simulation: SimulationSettings = field(default_factory=SimulationSettings)


def finite_or_none(x: float | None) -> float | None:
    return None if x is None or math.isinf(x) else x


def scenario_to_dict(s: Scenario) -> dict:
    front, rear = s.motors
    pack = asdict(s.pack)
    pack["cycle_durability"] = list(s.pack.cycle_durability)
    conv = asdict(s.converter)
    conv["hv_link_target_range"] = list(s.converter.hv_link_target_range)
    charging = asdict(s.charging)
    charging["charger_power_cap"] = finite_or_none(s.charging.charger_power_cap)
    return {
        "vehicle": s.vehicle.to_dict(),
        "motors": {"front": asdict(front), "rear": asdict(rear)},
        "pack": pack,
        "converter": conv,
        "policy": asdict(s.policy),
        "charging": charging,
        "depot": asdict(s.depot),
        "simulation": asdict(s.simulation),
    }


def build_record(cls, data: Mapping[str, Any], section: str):
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise InvalidConfig(f"{section}.{unknown[0]}", "unknown field")
    try:
        return cls(**data)
    except InvalidConfig as exc:
        raise InvalidConfig(f"{section}.{exc.field}", exc.reason) from None


def scenario_from_dict(doc: Mapping[str, Any]) -> Scenario:
    """Build a validated :class:`Scenario`; absent sections take defaults."""
    validate_document(doc, "config")
    defaults = scenario_to_dict(Scenario())
    merged = {k: {**defaults[k], **doc.get(k, {})} for k in SECTIONS if k != "motors"}
    motors_doc = doc.get("motors", {})
    motors = tuple(
        build_record(MotorSpec, {**defaults["motors"][axle], **motors_doc.get(axle, {})}, f"motors.{axle}")
        for axle in ("front", "rear")
    )
    try:
        vehicle = validate_config(merged["vehicle"])
    except InvalidConfig as exc:
        raise InvalidConfig(f"vehicle.{exc.field}", exc.reason) from None

    pack = dict(merged["pack"])
    pack["cycle_durability"] = tuple(pack["cycle_durability"])
    conv = dict(merged["converter"])
    conv["hv_link_target_range"] = tuple(conv["hv_link_target_range"])
    charging = dict(merged["charging"])
    if charging["charger_power_cap"] is None:
        charging["charger_power_cap"] = math.inf
    return Scenario(
        vehicle=vehicle,
        motors=motors,
        pack=build_record(BatteryPack, pack, "pack"),
        converter=build_record(ConverterSpec, conv, "converter"),
        policy=build_record(AllocationPolicy, merged["policy"], "policy"),
        charging=build_record(ChargeProfile, charging, "charging"),
        depot=build_record(DepotConfig, merged["depot"], "depot"),
        simulation=build_record(SimulationSettings, merged["simulation"], "simulation"),
    )


def _parse_value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(doc: Mapping[str, Any], overrides: Iterable[str]) -> dict:
    """Return a copy of ``doc`` with ``key=value`` overrides applied.

    Keys are dotted paths (``vehicle.sim_mass``, ``motors.front.rated_power``).
    A bare key is resolved against the section that defines it, provided
    exactly one does. Values are parsed as JSON, falling back to a string.
    """
    out = copy.deepcopy(dict(doc))
    defaults = scenario_to_dict(Scenario())
    for item in overrides:
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise InvalidConfig(item, "override must look like key=value")
        path = key.split(".")
        if len(path) == 1:
            owners = [s for s in SECTIONS if s != "motors" and key in defaults[s]]
            if len(owners) != 1:
                raise InvalidConfig(key, "cannot resolve bare key; use section.key")
            path = [owners[0], key]
        node = out
        for part in path[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise InvalidConfig(key, f"{part} is not a section")
        node[path[-1]] = _parse_value(raw)
    return out


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidConfig(str(path), f"invalid JSON: {exc}") from None


def load_scenario(path: str | Path | None = None, overrides: Iterable[str] = ()) -> Scenario:
    doc = read_json(path) if path is not None else {}
    return scenario_from_dict(apply_overrides(doc, overrides))


def read_cycle_csv(path: str | Path, name: str | None = None) -> DriveCycle:
    """Read a ``t_s,v_ms[,grade_deg]`` cycle. Grades convert to radians.

    Raises:
        CycleFormatError: With the 1-based line number of the first problem.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise CycleFormatError(1, "empty cycle file")
    header = [h.strip() for h in rows[0]]
    if header not in (["t_s", "v_ms"], ["t_s", "v_ms", "grade_deg"]):
        raise CycleFormatError(1, f"expected header t_s,v_ms[,grade_deg], got {','.join(header)}")
    t, v, g = [], [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise CycleFormatError(lineno, f"expected {len(header)} columns, got {len(row)}")
        try:
            vals = [float(c) for c in row]
        except ValueError:
            raise CycleFormatError(lineno, f"non-numeric value in {row!r}") from None
        if not all(math.isfinite(x) for x in vals):
            raise CycleFormatError(lineno, "non-finite value")
        if vals[1] < 0:
            raise CycleFormatError(lineno, "negative speed")
        if t and vals[0] <= t[-1]:
            raise CycleFormatError(lineno, "time not strictly increasing")
        if not t and vals[0] != 0.0:
            raise CycleFormatError(lineno, "first sample must be at t = 0")
        t.append(vals[0])
        v.append(vals[1])
        g.append(math.radians(vals[2]) if len(vals) == 3 else 0.0)
    if not t:
        raise CycleFormatError(2, "cycle has no samples")
    return DriveCycle(t=np.array(t), v=np.array(v), grade=np.array(g), name=name or path.stem)


def write_cycle_csv(path: str | Path, cycle: DriveCycle) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t_s", "v_ms", "grade_deg"])
        for t, v, g in zip(cycle.t, cycle.v, cycle.grade):
            w.writerow([repr(float(t)), repr(float(v)), repr(math.degrees(float(g)))])


def read_fleet(path: str | Path, pack: BatteryPack) -> tuple[list[BusState], dict]:
    """Fleet file: buses plus an optional ``depot`` section of overrides."""
    doc = read_json(path)
    validate_document(doc, "fleet")
    fleet = []
    for b in doc["buses"]:
        try:
            fleet.append(
                BusState(
                    id=str(b["id"]),
                    arrival_time=float(b["arrival_time_s"]),
                    arrival_soc=float(b["arrival_soc"]),
                    departure_deadline=float(b["departure_deadline_s"]),
                    pack=pack,
                )
            )
        except InvalidConfig as exc:
            raise InvalidConfig(f"buses.{exc.field}", exc.reason) from None
    return fleet, doc.get("depot", {})


def to_jsonable(obj: Any) -> Any:
    """Plain-JSON copy: numpy scalars to floats, non-finite floats to null."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj))


def write_columns_csv(path: str | Path, columns: Mapping[str, Iterable]) -> None:
    names = list(columns)
    data = [np.asarray(columns[n]).tolist() for n in names]
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in zip(*data):
            w.writerow([repr(x) if isinstance(x, float) else x for x in row])


def write_rows_csv(path: str | Path, header: list[str], rows: Iterable[Iterable]) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(["" if x is None else (repr(x) if isinstance(x, float) else x) for x in row])


def write_plot_data(path: str | Path, t: Iterable[float], power_w: Iterable[float], soc: Iterable[float]) -> None:
    """Whitespace-separated ``t_s power_kW soc`` columns for gnuplot."""
    lines = ["# t_s power_kW soc"]
    for ti, pi, si in zip(t, power_w, soc):
        lines.append(f"{float(ti):.6g} {float(pi) / 1e3:.6f} {float(si):.9f}")
    Path(path).write_text("\n".join(lines) + "\n")
