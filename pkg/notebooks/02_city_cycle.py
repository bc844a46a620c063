# %% [markdown]
# # Energy use on a stop-and-go route
#
# Ten 500 m legs with a 20 s dwell at each stop. The run reports where
# every watt-hour went and how far a full pack would carry the bus.

# %%
import numpy as np

from ebus.simulator import city_cycle, constant_speed_cycle, run

cycle = city_cycle()
report = run(cycle)
for key, value in report.summary().items():
    print(f"{key:<28}{value}")

# %% [markdown]
# Braking energy goes back into the pack: the front motor takes the larger
# share of the regen demand.

# %%
trace = report.trace
braking = trace["p_mech"] < 0
print(f"braking intervals: {braking.sum()}")
print(f"front share while braking: {trace['front_mech'][braking].sum() / trace['p_mech'][braking].sum():.2f}")
print(f"peak battery draw {trace['p_battery'].max() / 1e3:.1f} kW, "
      f"peak recharge {-trace['p_battery'].min() / 1e3:.1f} kW")

# %% [markdown]
# Steady cruise at the same average speed costs less per kilometre
# because no energy is spent on repeated acceleration.

# %%
cruise = run(constant_speed_cycle(13.89, 3600.0))
print(f"cruise {cruise.energy_per_km:.1f} Wh/km vs city {report.energy_per_km:.1f} Wh/km")

# %% [markdown]
# Sensitivity to the constant auxiliary load (HVAC, lighting, doors).

# %%
for aux in np.arange(0.0, 20e3 + 1, 4e3):
    r = run(cycle, aux_load=aux)
    print(f"aux {aux / 1e3:>4.0f} kW: {r.energy_per_km:7.1f} Wh/km, range {r.projected_range:6.1f} km")
