"""Overnight depot charging: event-driven, earliest-deadline-first, no preemption."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

from ebus.battery import BatteryPack
from ebus.charging import ChargeProfile, charge_time, soc_after
from ebus.errors import InfeasibleConfig, InvalidConfig

# same-instant ordering: releases free chargers before anything else looks
_RELEASE, _EXPIRE, _ARRIVE = 0, 1, 2


@dataclass(frozen=True)
class BusState:
    """A bus returning to the depot."""

    id: str
    arrival_time: float
    arrival_soc: float
    departure_deadline: float
    pack: BatteryPack = field(default_factory=BatteryPack)

    def __post_init__(self) -> None:
        if not self.departure_deadline > self.arrival_time:
            raise InvalidConfig("departure_deadline", f"bus {self.id}: deadline must follow arrival")
        if not 0.0 <= self.arrival_soc <= 1.0:
            raise InvalidConfig("arrival_soc", f"bus {self.id}: must lie in [0, 1]")


@dataclass(frozen=True)
class DepotConfig:
    """Charging site.

    Every running charger reserves its full ``charger_power`` against
    ``site_power_cap``; when the cap is reached new sessions wait.
    """

    charger_count: int = 1
    charger_power: float = 200e3
    site_power_cap: float | None = None
    priority_rule: str = "earliest-deadline-first"

    def __post_init__(self) -> None:
        if self.charger_count < 1:
            raise InvalidConfig("charger_count", "must be >= 1")
        if not self.charger_power > 0:
            raise InvalidConfig("charger_power", "must be > 0")
        if self.priority_rule != "earliest-deadline-first":
            raise InvalidConfig("priority_rule", f"unsupported rule {self.priority_rule!r}")

    @property
    def max_active(self) -> int:
        if self.site_power_cap is None:
            return self.charger_count
        return min(self.charger_count, int(math.floor(self.site_power_cap / self.charger_power)))


@dataclass(frozen=True)
class BusOutcome:
    id: str
    arrival_time: float
    departure_deadline: float
    arrival_soc: float
    final_soc: float
    start_time: float | None
    end_time: float | None
    charger: int | None
    wait_time: float
    energy_delivered: float
    charged_full: bool


@dataclass(frozen=True)
class DepotEvent:
    time: float
    kind: str
    bus_id: str
    charger: int | None
    soc: float
    waiting: int
    active: int


@dataclass
class DepotReport:
    buses: list[BusOutcome]
    events: list[DepotEvent]
    charger_utilization: float
    horizon: float
    feasible: bool

    def outcome(self, bus_id: str) -> BusOutcome:
        return next(b for b in self.buses if b.id == bus_id)


def _priority(bus: BusState) -> tuple[float, str]:
    return (bus.departure_deadline, bus.id)


def schedule(
    fleet: Sequence[BusState],
    depot: DepotConfig,
    profile: ChargeProfile | None = None,
) -> DepotReport:
    """Simulate one night at the depot.

    Whenever a charger frees up (or a bus arrives to an idle charger) the
    waiting bus with the earliest departure deadline plugs in, ties broken by
    id. A bus unplugs when full or at its deadline; a bus still waiting at
    its deadline leaves with its arrival charge. Session durations come from
    the closed-form charge profile, with the charger rating as power cap.

    Raises:
        ValueError: On an empty fleet or duplicate bus ids.
        InfeasibleConfig: If the site cap cannot power even one charger.
    """
    if not fleet:
        raise ValueError("fleet must not be empty")
    ids = [b.id for b in fleet]
    if len(set(ids)) != len(ids):
        raise ValueError("bus ids must be unique")
    if depot.site_power_cap is not None and depot.site_power_cap < depot.charger_power:
        raise InfeasibleConfig(
            f"site cap {depot.site_power_cap:g} W below one charger ({depot.charger_power:g} W)"
        )
    profile = profile or ChargeProfile()
    profile = replace(profile, charger_power_cap=min(profile.charger_power_cap, depot.charger_power))

    by_id = {b.id: b for b in fleet}
    queue: list[tuple[float, int, str]] = []
    for b in fleet:
        heapq.heappush(queue, (b.arrival_time, _ARRIVE, b.id))

    waiting: list[tuple[float, str]] = []
    free = list(range(depot.charger_count))
    active: dict[str, tuple[int, float, float]] = {}  # id -> (charger, start, end)
    outcomes: dict[str, BusOutcome] = {}
    events: list[DepotEvent] = []
    busy_time = 0.0

    def log(t: float, kind: str, bus_id: str, charger: int | None, soc: float) -> None:
        events.append(DepotEvent(t, kind, bus_id, charger, soc, len(waiting), len(active)))

    while queue:
        now = queue[0][0]
        while queue and queue[0][0] == now:
            _, kind, bus_id = heapq.heappop(queue)
            bus = by_id[bus_id]
            if kind == _ARRIVE:
                heapq.heappush(waiting, _priority(bus))
                heapq.heappush(queue, (bus.departure_deadline, _EXPIRE, bus_id))
                log(now, "arrive", bus_id, None, bus.arrival_soc)
            elif kind == _EXPIRE:
                if bus_id in outcomes or bus_id in active:
                    continue
                waiting.remove(_priority(bus))
                heapq.heapify(waiting)
                outcomes[bus_id] = BusOutcome(
                    id=bus_id,
                    arrival_time=bus.arrival_time,
                    departure_deadline=bus.departure_deadline,
                    arrival_soc=bus.arrival_soc,
                    final_soc=bus.arrival_soc,
                    start_time=None,
                    end_time=None,
                    charger=None,
                    wait_time=bus.departure_deadline - bus.arrival_time,
                    energy_delivered=0.0,
                    charged_full=bus.arrival_soc >= 1.0,
                )
                log(now, "leave_uncharged", bus_id, None, bus.arrival_soc)
            else:
                charger, start, end = active.pop(bus_id)
                final = soc_after(bus.pack, profile, bus.arrival_soc, end - start)
                full = end - start >= charge_time(bus.pack, profile, bus.arrival_soc, 1.0)
                if full:
                    final = 1.0
                busy_time += end - start
                heapq.heappush(free, charger)
                outcomes[bus_id] = BusOutcome(
                    id=bus_id,
                    arrival_time=bus.arrival_time,
                    departure_deadline=bus.departure_deadline,
                    arrival_soc=bus.arrival_soc,
                    final_soc=final,
                    start_time=start,
                    end_time=end,
                    charger=charger,
                    wait_time=start - bus.arrival_time,
                    energy_delivered=(final - bus.arrival_soc) * bus.pack.capacity,
                    charged_full=full,
                )
                log(now, "release", bus_id, charger, final)

        while waiting and free and len(active) < depot.max_active:
            _, bus_id = heapq.heappop(waiting)
            bus = by_id[bus_id]
            charger = heapq.heappop(free)
            needed = charge_time(bus.pack, profile, bus.arrival_soc, 1.0)
            end = min(now + needed, bus.departure_deadline)
            active[bus_id] = (charger, now, end)
            heapq.heappush(queue, (end, _RELEASE, bus_id))
            log(now, "plug_in", bus_id, charger, bus.arrival_soc)

    start = min(b.arrival_time for b in fleet)
    stop = max(
        max((o.end_time for o in outcomes.values() if o.end_time is not None), default=start),
        max((e.time for e in events), default=start),
    )
    horizon = stop - start
    utilization = busy_time / (depot.charger_count * horizon) if horizon > 0 else 0.0
    buses = [outcomes[b.id] for b in fleet]
    return DepotReport(
        buses=buses,
        events=events,
        charger_utilization=utilization,
        horizon=horizon,
        feasible=all(o.charged_full for o in buses),
    )
