"""Command line entry points: run, sweep, serve, replay, validate.

Exit codes: 0 when the episode reached the goal (or the command simply
succeeded), 2 when a headless episode timed out, 1 on any error.
"""

from __future__ import annotations

import argparse
import asyncio
import logging
import os
import signal
import sys
import time
from pathlib import Path

from .scenario import Scenario, ScenarioError, default_scenario_path, load_scenario
from .scripts import InputScript, ScriptParseError, load_script
from .serve import LiveSession, replay_episode
from .session import SessionLogError, iter_replay, load_session
from .sim import EpisodeReport, run_episode, trace_csv

log = logging.getLogger("gaze_drive")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_TIMEOUT = 2


def _setup_logging() -> None:
    level = os.environ.get("GAZE_DRIVE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def _load_scenario_arg(path: str | None) -> Scenario:
    return load_scenario(Path(path) if path else default_scenario_path())


def _load_script_arg(scenario: Scenario, path: str | None) -> InputScript | None:
    if path is not None:
        return load_script(path)
    if scenario.input_mode == "script" and scenario.script_path is not None:
        return load_script(scenario.script_path)
    return None


def _write_report(out_dir: Path, name: str, scenario: Scenario, report: EpisodeReport) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    trace_path = out_dir / f"{name}.trace.csv"
    trace_path.write_text(trace_csv(report), encoding="utf-8")
    report_path = out_dir / f"{name}.report.yaml"
    lines = [
        "schema_version: 1",
        f"scenario: {scenario.name}",
        f"reached: {str(report.reached).lower()}",
        f"time_to_goal_s: {report.time_to_goal if report.reached else 'null'}",
        f"collision_count: {report.collision_count}",
        f"path_length_m: {report.path_length!r}",
        f"damping_ns_per_m: {scenario.params.damping!r}",
        f"samples: {len(report.trace)}",
        f"trace_file: {trace_path.name}",
    ]
    report_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return report_path


def _summary_line(scenario: Scenario, report: EpisodeReport) -> str:
    outcome = f"goal in {report.time_to_goal} s" if report.reached else "timeout"
    return (
        f"{scenario.name}: {outcome}, damping {scenario.params.damping} N*s/m, "
        f"path {report.path_length:.2f} m, collisions {report.collision_count}"
    )


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _load_scenario_arg(args.scenario)
    if args.damping is not None:
        scenario = scenario.with_damping(args.damping)
    script = _load_script_arg(scenario, args.script)
    t_limit = args.t_limit if args.t_limit is not None else scenario.t_limit
    report = run_episode(
        scenario.world,
        scenario.make_feed(script),
        scenario.geometry,
        scenario.params,
        scenario.layout,
        dt=scenario.dt,
        t_limit=t_limit,
        force_mode=scenario.force_mode,
        hold_timeout=scenario.hold_timeout,
    )
    if args.out_dir:
        _write_report(Path(args.out_dir), "episode", scenario, report)
    print(_summary_line(scenario, report))
    return EXIT_OK if report.reached else EXIT_TIMEOUT


def cmd_sweep(args: argparse.Namespace) -> int:
    damping_values = [float(v) for v in args.damping.split(",") if v.strip()]
    if not damping_values:
        raise ValueError("damping list must not be empty")
    if any(d <= 0 for d in damping_values):
        raise ValueError(f"damping values must be > 0, got {damping_values}")
    scenario = _load_scenario_arg(args.scenario)
    script = _load_script_arg(scenario, args.script)

    rows = []
    print("damping,time_to_goal,path_length,collisions")
    failure: Exception | None = None
    for damping in damping_values:
        variant = scenario.with_damping(damping)
        try:
            report = run_episode(
                variant.world,
                variant.make_feed(script),
                variant.geometry,
                variant.params,
                variant.layout,
                dt=variant.dt,
                t_limit=variant.t_limit,
                force_mode=variant.force_mode,
                hold_timeout=variant.hold_timeout,
            )
        except Exception as err:  # noqa: BLE001 - abort sweep, flag partial results
            failure = err
            break
        rows.append((damping, report.time_to_goal, report.path_length, report.collision_count))
        t = report.time_to_goal if report.reached else ""
        print(f"{damping!r},{t!r},{report.path_length!r},{report.collision_count}")
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        lines = ["damping,time_to_goal,path_length,collisions"]
        lines += [f"{d!r},{t!r},{p!r},{c}" for d, t, p, c in rows]
        (out_dir / "sweep.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    if failure is not None:
        print(f"sweep aborted after {len(rows)} of {len(damping_values)} episodes: {failure}", file=sys.stderr)
        return EXIT_ERROR
    times = [t for _, t, _, _ in rows]
    if all(t is not None for t in times):
        ordered = all(a < b for a, b in zip(times, times[1:]))
        print(f"# time_to_goal strictly increasing with damping: {'yes' if ordered else 'NO'}")
    else:
        print("# ordering not evaluated: some episodes timed out")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    scenario = _load_scenario_arg(args.scenario)
    assets = Path(args.assets) if args.assets else None
    session = LiveSession(
        scenario,
        host=args.host,
        port=args.port,
        record_path=args.record,
        assets_dir=assets,
        strict=args.strict_schema,
    )

    async def main() -> EpisodeReport:
        loop = asyncio.get_running_loop()
        for sig in (signal.SIGINT, signal.SIGTERM):
            try:
                # Explicit handlers: stop cleanly even when launched with
                # SIGINT inherited as ignored (non-interactive shells).
                loop.add_signal_handler(sig, session.stop_event.set)
            except NotImplementedError:
                pass
        return await session.run()

    try:
        report = asyncio.run(main())
    except KeyboardInterrupt:
        report = session.engine.report()
    except OSError as err:
        print(f"error: cannot serve on {args.host}:{args.port}: {err}", file=sys.stderr)
        return EXIT_ERROR
    if args.out_dir:
        _write_report(Path(args.out_dir), "live", scenario, report)
    print(_summary_line(scenario, report))
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    scenario = _load_scenario_arg(args.scenario)
    events = load_session(args.session)
    if args.speed > 0:
        # Paced replay: honor recorded gaps scaled by the speed factor.
        for delay, _env in iter_replay(events, speed=args.speed):
            if delay > 0:
                time.sleep(delay)
    report = replay_episode(scenario, events)
    if args.out_dir:
        _write_report(Path(args.out_dir), "replay", scenario, report)
    print(_summary_line(scenario, report))
    return EXIT_OK if report.reached else EXIT_TIMEOUT


def cmd_validate(args: argparse.Namespace) -> int:
    scenario = _load_scenario_arg(args.scenario)
    print(f"scenario ok: {scenario.name} ({len(scenario.world.obstacles)} obstacles, input mode {scenario.input_mode})")
    if args.script:
        script = load_script(args.script)
        kinds = ",".join(sorted(script.kinds)) or "empty"
        print(f"script ok: {len(script.records)} records ({kinds}), duration {script.duration} s")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaze-drive",
        description="Gaze-driven admittance teleoperation of a simulated mecanum robot.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one headless episode")
    run_p.add_argument("--scenario", help="scenario YAML (default: bundled course)")
    run_p.add_argument("--script", help="input script file overriding the scenario's input")
    run_p.add_argument("--damping", type=float, help="override damping, N*s/m")
    run_p.add_argument("--out-dir", help="write report YAML and trace CSV here")
    run_p.add_argument("--t-limit", type=float, help="override episode time limit, s")
    run_p.set_defaults(func=cmd_run)

    sweep_p = sub.add_parser("sweep", help="run one episode per damping value")
    sweep_p.add_argument("--scenario", help="scenario YAML (default: bundled course)")
    sweep_p.add_argument("--script", help="input script file overriding the scenario's input")
    sweep_p.add_argument("--damping", default="10,20,30", help="comma-separated damping list")
    sweep_p.add_argument("--out-dir", help="write sweep.csv here")
    sweep_p.set_defaults(func=cmd_sweep)

    serve_p = sub.add_parser("serve", help="serve the broker and a live paced simulation")
    serve_p.add_argument("--scenario", help="scenario YAML (default: bundled course)")
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", type=int, default=9090)
    serve_p.add_argument("--record", help="write a session log (JSONL) to this path")
    serve_p.add_argument("--assets", help="static directory served over HTTP (operator console)")
    serve_p.add_argument("--out-dir", help="write the episode report here on shutdown")
    serve_p.add_argument("--strict-schema", action=argparse.BooleanOptionalAction, default=True)
    serve_p.set_defaults(func=cmd_serve)

    replay_p = sub.add_parser("replay", help="re-execute a recorded session deterministically")
    replay_p.add_argument("session", help="session log (*.session.jsonl)")
    replay_p.add_argument("--scenario", help="scenario YAML the session was served with")
    replay_p.add_argument("--speed", type=float, default=0.0, help="pacing multiplier; 0 = as fast as possible")
    replay_p.add_argument("--out-dir", help="write report YAML and trace CSV here")
    replay_p.set_defaults(func=cmd_replay)

    val_p = sub.add_parser("validate", help="schema-check a scenario and/or script without running")
    val_p.add_argument("--scenario", help="scenario YAML (default: bundled course)")
    val_p.add_argument("--script", help="input script file")
    val_p.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, ScriptParseError, SessionLogError, FileNotFoundError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
