# %% [markdown]
# # Charging sessions and an overnight depot
#
# Constant power up to the knee, then a taper that brings the power
# linearly to zero at full. A charger cap flattens the curve.

# %%
from ebus.battery import BatteryPack
from ebus.charging import ChargeProfile, charge, charge_time, quoted_full_charge_check
from ebus.depot import BusState, DepotConfig, schedule

pack = BatteryPack()
six_c = ChargeProfile()
print(f"0 -> 0.94 at 6C: {charge_time(pack, six_c, 0.0, 0.94):.0f} s")
print(f"0.94 -> 1 taper: {charge_time(pack, six_c, 0.94, 1.0):.0f} s")
capped = ChargeProfile(charger_power_cap=200e3)
print(f"0 -> 1 on a 200 kW charger: {charge_time(pack, capped, 0.0, 1.0):.0f} s")

# %% [markdown]
# A quoted 20 minute full charge at 200 kW would only move a third of the
# pack's energy.

# %%
print(quoted_full_charge_check(pack))

# %% [markdown]
# The stepped session agrees with the closed form.

# %%
session = charge(pack, six_c, 0.5, 1.0, dt=1.0)
print(f"stepped {session.elapsed:.2f} s, closed form {charge_time(pack, six_c, 0.5, 1.0):.2f} s")

# %% [markdown]
# ## Depot night
#
# Six buses, two chargers. Whoever leaves first plugs in first.

# %%
fleet = [
    BusState("r1", arrival_time=0.0, arrival_soc=0.2, departure_deadline=6 * 3600),
    BusState("r2", arrival_time=600.0, arrival_soc=0.1, departure_deadline=4 * 3600),
    BusState("r3", arrival_time=900.0, arrival_soc=0.4, departure_deadline=5 * 3600),
    BusState("r4", arrival_time=1200.0, arrival_soc=0.3, departure_deadline=3 * 3600),
    BusState("r5", arrival_time=1800.0, arrival_soc=0.5, departure_deadline=7 * 3600),
    BusState("r6", arrival_time=2400.0, arrival_soc=0.05, departure_deadline=8 * 3600),
]
report = schedule(fleet, DepotConfig(charger_count=2, charger_power=150e3))
for b in report.buses:
    print(f"{b.id}: charger {b.charger}, start {b.start_time:>6.0f} s, wait {b.wait_time:>6.0f} s, soc {b.final_soc:.2f}")
print(f"utilization {report.charger_utilization:.2f}, all full: {report.feasible}")
