# %% [markdown]
# # Sizing the reference bus
#
# Road load at the design point (top speed while still accelerating),
# the motor rating it implies, and the battery and converter numbers that
# follow from the pack choice.

# %%
from ebus import battery, dynamics
from ebus.converter import ConverterSpec, hv_link_voltage
from ebus.powertrain import capability, reference_motors
from ebus.quantities import VehicleConfig, ms_to_kmh

cfg = VehicleConfig()
print(f"gross mass {cfg.gross_mass:.0f} kg, simulated mass {cfg.sim_mass:.0f} kg")
print(f"top speed {cfg.top_speed} m/s = {ms_to_kmh(cfg.top_speed):.1f} km/h")

# %% [markdown]
# Forces at 22.2 m/s and 0.7 m/s². Acceleration dominates; aero drag is
# smaller than rolling resistance even at top speed.

# %%
fb = dynamics.traction_force(cfg, cfg.top_speed, cfg.max_accel)
for name in ("f_rolling", "f_aero", "f_net", "f_traction"):
    print(f"{name:<11}{getattr(fb, name):>10.2f} N")

p_wheel = dynamics.tractive_power(fb, cfg.top_speed)
p_shaft = dynamics.required_motor_power(p_wheel, cfg.drivetrain_efficiency)
print(f"wheel power {p_wheel / 1e3:.2f} kW, shaft power {p_shaft / 1e3:.2f} kW")
print(f"rating {dynamics.size_motor_rating(cfg) / 1e3:.0f} kW")

# %% [markdown]
# The installed motor pair falls short of that rating, so the simulator
# clips the very hardest accelerations at high speed.

# %%
print(f"front + rear capability {capability(reference_motors()) / 1e3:.0f} kW")

# %% [markdown]
# How the rating grows with the load carried.

# %%
for mass in (10000, 14000, 18000, 22000, 28000):
    rating = dynamics.size_motor_rating(VehicleConfig(sim_mass=mass))
    print(f"{mass:>6} kg -> {rating / 1e3:.0f} kW")

# %% [markdown]
# ## Pack and converter

# %%
pack = battery.BatteryPack()
print(f"pack mass {battery.display_mass(battery.pack_mass(pack))} kg")
print(f"charge limit {battery.power_limit(pack, 'charge') / 1e3:.0f} kW, "
      f"discharge limit {battery.power_limit(pack, 'discharge') / 1e3:.0f} kW")
print(f"series cells for an 80 V string: {battery.series_cell_count(80.0, pack.cell_voltage_nominal)}")

conv = ConverterSpec()
print(f"duty cycle {conv.duty_cycle:.5f} -> link {hv_link_voltage(conv):.2f} V")
