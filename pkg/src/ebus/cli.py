"""Batch command line: ``ebus {size,simulate,charge,depot}``.

Exit codes: 0 success, 1 domain failure (reference mismatch or infeasible
depot schedule), 2 input error, 3 pack depleted mid-cycle.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, replace
from pathlib import Path

from ebus import __version__
from ebus import charging, depot, io, simulator
from ebus.errors import EbusError, InfeasibleConfig, PackDepleted
from ebus.sizing import format_sizing_report, sizing_report

EXIT_OK, EXIT_DOMAIN, EXIT_INPUT, EXIT_DEPLETED = 0, 1, 2, 3
OUTPUT_ENV = "EBUS_OUTPUT_DIR"


class InputError(Exception):
    pass


def _output_dir(args) -> Path:
    out = Path(args.output_dir or os.environ.get(OUTPUT_ENV) or "ebus-out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _scenario(args) -> io.Scenario:
    if args.config is not None and not Path(args.config).is_file():
        raise InputError(f"config file not found: {args.config}")
    return io.load_scenario(args.config, args.set)


def _write_meta(out: Path, command: str, args) -> None:
    # timestamps live here so the report files stay byte-identical across runs
    io.write_json(
        out / f"{command}.meta.json",
        {
            "command": command,
            "argv": sys.argv[1:],
            "config": args.config,
            "overrides": args.set,
            "version": __version__,
            "created": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        },
    )


def cmd_size(args) -> int:
    scen = _scenario(args)
    report = sizing_report(scen.vehicle, scen.motors, scen.pack, scen.converter, scen.charging)
    out = _output_dir(args)
    io.write_json(out / "sizing_report.json", report)
    text = format_sizing_report(report)
    (out / "sizing_report.txt").write_text(text)
    _write_meta(out, "size", args)
    sys.stdout.write(text)
    return EXIT_OK if report["all_pass"] else EXIT_DOMAIN


def _load_cycles(args, scen: io.Scenario) -> list[simulator.DriveCycle]:
    if args.cycle:
        cycles = []
        for path in args.cycle:
            if not Path(path).is_file():
                raise InputError(f"cycle file not found: {path}")
            cycles.append(io.read_cycle_csv(path))
        return cycles
    params = dict(scen.simulation.city_cycle)
    params.setdefault("dt", scen.simulation.dt)
    if args.scenario == "city":
        return [simulator.city_cycle(**params)]
    return [
        simulator.constant_speed_cycle(
            scen.vehicle.avg_speed, args.duration, params["dt"], name="cruise"
        )
    ]


def _run_one(cycle: simulator.DriveCycle, scen: io.Scenario):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            report = simulator.run(
                cycle,
                scen.vehicle,
                scen.motors,
                scen.pack,
                scen.converter,
                scen.policy,
                aux_load=scen.simulation.aux_load,
                reserve_soc=scen.simulation.reserve_soc,
            )
            depleted = False
        except PackDepleted as exc:
            report, depleted = exc.report, True
    return report, depleted, [str(w.message) for w in caught]


def cmd_simulate(args) -> int:
    scen = _scenario(args)
    cycles = _load_cycles(args, scen)
    names = [c.name for c in cycles]
    if len(set(names)) != len(names):
        raise InputError("cycle names must be unique")
    if args.jobs > 1 and len(cycles) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, cycles, [scen] * len(cycles)))
    else:
        results = [_run_one(c, scen) for c in cycles]

    out = _output_dir(args)
    code = EXIT_OK
    for cycle, (report, depleted, messages) in zip(cycles, results):
        for msg in messages:
            print(f"warning: {msg}", file=sys.stderr)
        summary = report.summary()
        io.write_json(out / f"{cycle.name}_report.json", summary)
        io.write_columns_csv(out / f"{cycle.name}_trace.csv", report.trace)
        io.write_plot_data(
            out / f"{cycle.name}_power_soc.dat",
            report.trace["t"],
            report.trace["p_battery"],
            report.trace["soc"],
        )
        print(
            f"{cycle.name}: {report.distance:.3f} km, {report.energy_per_km:.1f} Wh/km, "
            f"range {report.projected_range:.1f} km, target met: {report.range_target_met}"
        )
        if depleted:
            print(f"error: pack depleted at t={report.depleted_at:g} s", file=sys.stderr)
            code = EXIT_DEPLETED
    _write_meta(out, "simulate", args)
    return code


def cmd_charge(args) -> int:
    scen = _scenario(args)
    profile = scen.charging
    if args.crate is not None:
        profile = replace(profile, cc_c_rate=args.crate)
    if args.knee is not None:
        profile = replace(profile, knee_soc=args.knee)
    if args.cap_kw is not None:
        profile = replace(profile, charger_power_cap=args.cap_kw * 1e3)
    if not 0.0 <= args.start <= args.to:
        raise InputError("need 0 <= --from <= --to")
    session = charging.charge(scen.pack, profile, args.start, args.to, args.dt)
    analytic = charging.charge_time(scen.pack, profile, args.start, args.to)
    prof = asdict(profile)
    prof["charger_power_cap"] = io.finite_or_none(profile.charger_power_cap)
    doc = {
        "start_soc": args.start,
        "target_soc": args.to,
        "elapsed_s": session.elapsed,
        "analytic_elapsed_s": analytic,
        "energy_delivered_wh": session.energy_delivered,
        "dt_s": args.dt,
        "profile": prof,
        "pack_capacity_wh": scen.pack.capacity,
        "full_charge_claim": charging.quoted_full_charge_check(scen.pack, profile),
    }
    out = _output_dir(args)
    io.write_json(out / "charge_session.json", doc)
    io.write_columns_csv(
        out / "charge_trace.csv", {"t_s": session.t, "soc": session.soc, "power_w": session.power}
    )
    _write_meta(out, "charge", args)
    print(f"{args.start:g} -> {args.to:g}: {session.elapsed:.1f} s (closed form {analytic:.1f} s)")
    claim = doc["full_charge_claim"]
    if not claim["consistent"]:
        print(
            f"note: quoted full charge in {claim['quoted_time_s']:g} s at "
            f"{claim['charger_power_w'] / 1e3:g} kW is not reproducible; "
            f"computed {claim['computed_time_s']:.0f} s"
        )
    return EXIT_OK


def depot_report_dict(report: depot.DepotReport, cfg: depot.DepotConfig) -> dict:
    return {
        "buses": [
            {
                "id": b.id,
                "arrival_time_s": b.arrival_time,
                "departure_deadline_s": b.departure_deadline,
                "arrival_soc": b.arrival_soc,
                "final_soc": b.final_soc,
                "start_time_s": b.start_time,
                "end_time_s": b.end_time,
                "charger": b.charger,
                "wait_time_s": b.wait_time,
                "energy_delivered_wh": b.energy_delivered,
                "charged_full": b.charged_full,
            }
            for b in report.buses
        ],
        "charger_utilization": report.charger_utilization,
        "horizon_s": report.horizon,
        "feasible": report.feasible,
        "depot": asdict(cfg),
    }


def cmd_depot(args) -> int:
    scen = _scenario(args)
    if not Path(args.fleet).is_file():
        raise InputError(f"fleet file not found: {args.fleet}")
    fleet, depot_overrides = io.read_fleet(args.fleet, scen.pack)
    cfg = io.build_record(depot.DepotConfig, {**asdict(scen.depot), **depot_overrides}, "depot")
    try:
        report = depot.schedule(fleet, cfg, scen.charging)
    except InfeasibleConfig as exc:
        raise InputError(str(exc)) from None
    out = _output_dir(args)
    io.write_json(out / "depot_report.json", depot_report_dict(report, cfg))
    io.write_rows_csv(
        out / "depot_events.csv",
        ["time_s", "event", "bus_id", "charger", "soc", "waiting", "active"],
        ([e.time, e.kind, e.bus_id, e.charger, e.soc, e.waiting, e.active] for e in report.events),
    )
    _write_meta(out, "depot", args)
    for b in report.buses:
        end = "-" if b.end_time is None else f"{b.end_time:g} s"
        print(f"{b.id}: wait {b.wait_time:g} s, done {end}, soc {b.final_soc:.3f}")
    print(f"utilization {report.charger_utilization:.3f}, feasible: {report.feasible}")
    return EXIT_OK if report.feasible else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario JSON (reference bus when omitted)")
    common.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config value, e.g. vehicle.sim_mass=28000",
    )
    common.add_argument("--output-dir", help=f"defaults to ${OUTPUT_ENV} or ./ebus-out")

    parser = argparse.ArgumentParser(prog="ebus", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("size", parents=[common], help="design-point sizing report")
    p.set_defaults(func=cmd_size)

    p = sub.add_parser("simulate", parents=[common], help="run drive cycles")
    p.add_argument("--cycle", action="append", help="cycle CSV (t_s,v_ms[,grade_deg]); repeatable")
    p.add_argument("--scenario", choices=("city", "cruise"), default="city")
    p.add_argument("--duration", type=float, default=3600.0, help="cruise scenario length [s]")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for several cycles")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("charge", parents=[common], help="single charging session")
    p.add_argument("--from", dest="start", type=float, default=0.0)
    p.add_argument("--to", type=float, default=1.0)
    p.add_argument("--crate", type=float, help="constant-current C-rate before the knee")
    p.add_argument("--knee", type=float, help="SoC where the taper starts")
    p.add_argument("--cap-kw", type=float, help="charger power cap [kW]")
    p.add_argument("--dt", type=float, default=1.0)
    p.set_defaults(func=cmd_charge)

    p = sub.add_parser("depot", parents=[common], help="overnight depot schedule")
    p.add_argument("--fleet", required=True, help="fleet JSON")
    p.set_defaults(func=cmd_depot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, EbusError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
