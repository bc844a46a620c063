"""Schedule invariants checked from a depot report, plus fleet strategies."""

import pytest
from hypothesis import strategies as st

from ebus.depot import BusState, DepotConfig

fleets = st.lists(
    st.tuples(
        st.integers(0, 240).map(lambda k: 60.0 * k),
        st.floats(0.0, 1.0),
        st.integers(1, 240).map(lambda k: 60.0 * k),
    ),
    min_size=1,
    max_size=20,
)
depots = st.builds(
    DepotConfig,
    charger_count=st.integers(1, 4),
    charger_power=st.sampled_from([150e3, 200e3, 350e3]),
    site_power_cap=st.one_of(st.none(), st.sampled_from([400e3, 700e3, 1e6])),
)


def build_fleet(raw):
    return [
        BusState(id=f"bus{i:02d}", arrival_time=arr, arrival_soc=soc, departure_deadline=arr + dur)
        for i, (arr, soc, dur) in enumerate(raw)
    ]


def _active_at(report, t):
    return sum(1 for o in report.buses if o.start_time is not None and o.start_time <= t < o.end_time)


def check_schedule(fleet, depot, report):
    """Assert capacity, EDF priority and work conservation for one schedule."""
    by_id = {b.id: b for b in fleet}
    times = sorted({e.time for e in report.events})

    for e in report.events:
        assert e.active <= depot.max_active
    for t in times:
        assert _active_at(report, t) <= depot.max_active

    for o in report.buses:
        b = by_id[o.id]
        assert o.arrival_soc <= o.final_soc <= 1.0
        assert o.energy_delivered == pytest.approx((o.final_soc - o.arrival_soc) * b.pack.capacity)
        if o.start_time is not None:
            assert b.arrival_time <= o.start_time < b.departure_deadline
            assert o.end_time <= b.departure_deadline

    for x in report.buses:
        if x.start_time is None:
            continue
        key_x = (x.departure_deadline, x.id)
        for y in report.buses:
            if y is x or y.arrival_time > x.start_time:
                continue
            still_waiting = (y.start_time is None or y.start_time > x.start_time) and (
                y.departure_deadline > x.start_time
            )
            # earliest deadline first among buses present when x plugged in
            if still_waiting:
                assert (y.departure_deadline, y.id) > key_x

    for y in report.buses:
        wait_end = y.start_time if y.start_time is not None else y.departure_deadline
        # a waiting bus implies every usable charger is busy
        for t in [y.arrival_time] + [s for s in times if y.arrival_time <= s < wait_end]:
            if t < wait_end:
                assert _active_at(report, t) == depot.max_active
