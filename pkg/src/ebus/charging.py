"""Fast-charge profile: constant power up to a knee, then a taper to zero at full.

The pack accepts ``P_cc = min(cc_c_rate * capacity, pack charge limit)`` up to
``knee_soc``. Above the knee the accepted power ramps linearly *in time* from
``P_cc`` to zero, which in SoC terms is

    P(soc) = P_cc * sqrt((1 - soc) / (1 - knee_soc))

and delivers the last ``1 - knee_soc`` of capacity in ``2 * E_taper / P_cc``
seconds. A charger cap clips this envelope from above, so the taper only
slows a session once the envelope falls below the charger's rating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ebus import battery
from ebus.battery import SECONDS_PER_HOUR, BatteryPack
from ebus.errors import InvalidConfig, TargetUnreachable

TAPER_SHAPES = ("linear",)

QUOTED_FULL_CHARGE_POWER = 200e3
QUOTED_FULL_CHARGE_TIME = 20 * 60.0

_SOC_TOL = 1e-12


@dataclass(frozen=True)
class ChargeProfile:
    """Charging recipe.

    Attributes:
        cc_c_rate: Constant-current rate before the knee [1/h].
        knee_soc: SoC where the taper begins, in (0, 1].
        taper_shape: Only ``"linear"`` (power linear in time down to zero).
        charger_power_cap: Charger output limit [W]; ``inf`` for none.
    """

    cc_c_rate: float = 6.0
    knee_soc: float = 0.94
    taper_shape: str = "linear"
    charger_power_cap: float = math.inf

    def __post_init__(self) -> None:
        if not self.cc_c_rate > 0:
            raise InvalidConfig("cc_c_rate", "must be > 0")
        if not 0 < self.knee_soc <= 1:
            raise InvalidConfig("knee_soc", "must lie in (0, 1]")
        if self.taper_shape not in TAPER_SHAPES:
            raise InvalidConfig("taper_shape", f"unknown shape {self.taper_shape!r}")
        if not self.charger_power_cap > 0:
            raise InvalidConfig("charger_power_cap", "must be > 0")


@dataclass
class ChargeSession:
    """Outcome of a stepped charging session.

    ``t``, ``soc`` and ``power`` hold the trace; ``power[i]`` is the power
    applied from ``t[i]`` to ``t[i + 1]`` (zero on the final sample).
    """

    start_soc: float
    target_soc: float
    elapsed: float
    energy_delivered: float
    t: np.ndarray = field(repr=False)
    soc: np.ndarray = field(repr=False)
    power: np.ndarray = field(repr=False)
    pack: BatteryPack | None = field(default=None, repr=False)

    def trace(self) -> list[tuple[float, float, float]]:
        return list(zip(self.t.tolist(), self.soc.tolist(), self.power.tolist()))


def cc_power(pack: BatteryPack, profile: ChargeProfile) -> float:
    """Envelope level before the knee, ignoring the charger cap [W]."""
    return min(profile.cc_c_rate * pack.capacity, battery.power_limit(pack, "charge"))


def charge_power(pack: BatteryPack, profile: ChargeProfile, soc: float) -> float:
    """Power the session draws at ``soc`` [W]."""
    if soc >= 1.0:
        return 0.0
    level = cc_power(pack, profile)
    k = profile.knee_soc
    if soc > k:
        level *= math.sqrt((1.0 - soc) / (1.0 - k))
    return min(level, profile.charger_power_cap)


def _regions(pack: BatteryPack, profile: ChargeProfile) -> list[tuple[float, float, float | None]]:
    """Split [0, 1] into (lo, hi, constant power or None for the taper)."""
    p_cc = cc_power(pack, profile)
    cap = profile.charger_power_cap
    k = profile.knee_soc
    regions: list[tuple[float, float, float | None]] = [(0.0, k, min(p_cc, cap))]
    if k < 1.0:
        if cap < p_cc:
            crossover = 1.0 - (1.0 - k) * (cap / p_cc) ** 2
            regions.append((k, crossover, cap))
            regions.append((crossover, 1.0, None))
        else:
            regions.append((k, 1.0, None))
    return regions


def _taper_scale(pack: BatteryPack, profile: ChargeProfile) -> float:
    """Seconds per unit sqrt((1 - soc) / (1 - knee)) inside the taper."""
    energy_j = pack.capacity * SECONDS_PER_HOUR
    return 2.0 * energy_j * (1.0 - profile.knee_soc) / cc_power(pack, profile)


def charge_time(
    pack: BatteryPack, profile: ChargeProfile, start_soc: float, target_soc: float
) -> float:
    """Closed-form session duration from ``start_soc`` to ``target_soc`` [s]."""
    if target_soc > 1.0:
        raise TargetUnreachable(f"target soc {target_soc} > 1")
    if target_soc <= start_soc:
        return 0.0
    energy_j = pack.capacity * SECONDS_PER_HOUR
    k = profile.knee_soc
    total = 0.0
    for lo, hi, power in _regions(pack, profile):
        a, b = max(lo, start_soc), min(hi, target_soc)
        if b <= a:
            continue
        if power is not None:
            total += (b - a) * energy_j / power
        else:
            ra = (1.0 - a) / (1.0 - k)
            rb = (1.0 - b) / (1.0 - k)
            total += _taper_scale(pack, profile) * (math.sqrt(ra) - math.sqrt(rb))
    return total


def time_to_full(pack: BatteryPack, profile: ChargeProfile, start_soc: float) -> float:
    """Closed-form time to reach a full pack from ``start_soc`` [s]."""
    return charge_time(pack, profile, start_soc, 1.0)


def soc_after(pack: BatteryPack, profile: ChargeProfile, start_soc: float, duration: float) -> float:
    """SoC reached after charging for ``duration`` seconds (closed form)."""
    if duration <= 0 or start_soc >= 1.0:
        return start_soc
    energy_j = pack.capacity * SECONDS_PER_HOUR
    k = profile.knee_soc
    soc, remaining = start_soc, duration
    for lo, hi, power in _regions(pack, profile):
        if soc >= hi:
            continue
        needed = charge_time(pack, profile, soc, hi)
        if needed <= remaining:
            soc, remaining = hi, remaining - needed
            continue
        if power is not None:
            return soc + power * remaining / energy_j
        root = math.sqrt((1.0 - soc) / (1.0 - k)) - remaining / _taper_scale(pack, profile)
        return 1.0 - (1.0 - k) * max(root, 0.0) ** 2
    return 1.0


def _midpoint_power(pack: BatteryPack, profile: ChargeProfile, dt: float, energy_j: float) -> float:
    p0 = charge_power(pack, profile, pack.soc)
    half = min(pack.soc + 0.5 * p0 * dt / energy_j, 1.0)
    return min(charge_power(pack, profile, half), p0)


def charge(
    pack: BatteryPack,
    profile: ChargeProfile,
    start_soc: float,
    target_soc: float,
    dt: float = 1.0,
) -> ChargeSession:
    """Step a charging session with a fixed time step.

    Each step applies the power found at the step's midpoint SoC (explicit
    midpoint rule) through :func:`ebus.battery.step`; the final step is
    shortened so the session stops exactly at ``target_soc``.

    Raises:
        TargetUnreachable: If ``target_soc`` exceeds 1.
    """
    if target_soc > 1.0:
        raise TargetUnreachable(f"target soc {target_soc} > 1")
    if not 0.0 <= start_soc <= target_soc:
        raise ValueError(f"need 0 <= start_soc <= target_soc, got {start_soc}, {target_soc}")
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")

    energy_j = pack.capacity * SECONDS_PER_HOUR
    pack = pack.with_soc(start_soc)
    ts, socs, powers = [0.0], [start_soc], []
    t = 0.0
    while pack.soc < target_soc - _SOC_TOL:
        p = _midpoint_power(pack, profile, dt, energy_j)
        if p <= 0:
            break
        need = (target_soc - pack.soc) * energy_j
        h = dt if p * dt < need else need / p
        pack, accepted = battery.step(pack, -p, h)
        t += h
        powers.append(-accepted)
        ts.append(t)
        socs.append(pack.soc)
        if h < dt:
            break
    powers.append(0.0)
    return ChargeSession(
        start_soc=start_soc,
        target_soc=target_soc,
        elapsed=t,
        energy_delivered=(pack.soc - start_soc) * pack.capacity,
        t=np.asarray(ts),
        soc=np.asarray(socs),
        power=np.asarray(powers),
        pack=pack,
    )


def quoted_full_charge_check(
    pack: BatteryPack,
    profile: ChargeProfile | None = None,
    charger_power: float = QUOTED_FULL_CHARGE_POWER,
    quoted_time: float = QUOTED_FULL_CHARGE_TIME,
    rel_tol: float = 0.1,
) -> dict:
    """Compare the quoted "200 kW gives a full charge in about 20 minutes".

    Returns a dict with the computed empty-to-full time at ``charger_power``,
    the quoted time, the energy a charger could deliver in the quoted time,
    and ``consistent`` (False when the two times differ by more than
    ``rel_tol``).
    """
    profile = profile or ChargeProfile()
    capped = ChargeProfile(
        cc_c_rate=profile.cc_c_rate,
        knee_soc=profile.knee_soc,
        taper_shape=profile.taper_shape,
        charger_power_cap=min(profile.charger_power_cap, charger_power),
    )
    computed = time_to_full(pack, capped, 0.0)
    return {
        "charger_power_w": charger_power,
        "quoted_time_s": quoted_time,
        "computed_time_s": computed,
        "energy_in_quoted_time_wh": charger_power * quoted_time / SECONDS_PER_HOUR,
        "pack_capacity_wh": pack.capacity,
        "consistent": abs(computed - quoted_time) <= rel_tol * quoted_time,
    }
