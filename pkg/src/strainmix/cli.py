"""Command-line interface.

Thin client over the library: each subcommand parses files, calls one
engine function and serializes the result.  Exit codes: 0 success, 1 domain
errors (invalid scenario, positivity, empty estimator cells), 2 usage and
parse errors.  Output is deterministic for identical inputs and flags; no
environment variables are consulted except NO_COLOR for diagnostics.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .charts import render_chart
from .errors import EngineError, ScenarioSchemaError, ScenarioSyntaxError
from .exact import (
    TransportTarget,
    contrast_timeseries,
    decompose_contrast,
    standardized_contrast,
    target_from_scenario,
    transport_contrast,
    trial_view,
    version_irrelevance_check,
)
from .reports import format_float, json_bytes, write_report
from .scenario import validate_scenario
from .scenario_io import load_scenario, parse_scenario_file, scenario_from_mapping
from .simulate import estimate_aware, estimate_blind, monte_carlo_study, sample_cohort


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strainmix",
        description="Exact and simulated infection-outcome contrasts under "
                    "multiple latent exposure versions.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def cmd(name: str, help_text: str, scenario: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        if scenario:
            p.add_argument("--scenario", required=True, metavar="PATH",
                           help="scenario JSON file")
        return p

    def output_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="json",
                       help="report format (default: json)")
        p.add_argument("--out", metavar="PATH",
                       help="write output to this file instead of stdout")

    def outcome_flag(p: argparse.ArgumentParser) -> None:
        p.add_argument("--outcome", metavar="NAME",
                       help="outcome to analyze (default: first declared)")

    p = cmd("validate", "check a scenario file, listing every violation")
    output_flags(p)

    p = cmd("exact", "standardized contrast and trial-view arm means")
    outcome_flag(p)
    output_flags(p)

    p = cmd("decompose", "per-stratum, per-strain contrast decomposition")
    outcome_flag(p)
    output_flags(p)

    p = cmd("simulate", "sample a cohort and run the strain-blind estimator")
    outcome_flag(p)
    p.add_argument("--n", type=int, default=10000, help="cohort size (default: 10000)")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default: 0)")
    output_flags(p)

    p = cmd("aware", "sample a cohort and run the strain-aware estimator")
    outcome_flag(p)
    p.add_argument("--n", type=int, default=10000, help="cohort size (default: 10000)")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default: 0)")
    output_flags(p)

    p = cmd("mc", "Monte Carlo study of the strain-blind estimator")
    outcome_flag(p)
    p.add_argument("--n", type=int, default=10000, help="cohort size per replicate")
    p.add_argument("--reps", type=int, default=100, help="number of replicates")
    p.add_argument("--seed", type=int, default=0, help="master seed (default: 0)")
    p.add_argument("--workers", type=int, default=1,
                   help="concurrent replicate workers; result is identical "
                        "for any value (default: 1)")
    output_flags(p)

    p = cmd("transport", "re-weight source strain effects to a target population")
    outcome_flag(p)
    p.add_argument("--target", required=True, metavar="PATH",
                   help="target file: {weights, strata:[{label, versions}]} "
                        "or a full scenario (risks ignored)")
    output_flags(p)

    p = cmd("drift", "contrast under a schedule of drifting strain mixtures")
    outcome_flag(p)
    p.add_argument("--schedule", required=True, metavar="PATH",
                   help="JSON list of {time, strata:[{label, versions}]}")
    output_flags(p)

    p = cmd("irrelevance", "per-stratum strain-risk spread check")
    outcome_flag(p)
    p.add_argument("--tolerance", type=float, default=0.0,
                   help="max allowed risk spread across strains (default: 0)")
    output_flags(p)

    p = cmd("chart", "stacked-bar SVG of strain composition with the contrast")
    outcome_flag(p)
    p.add_argument("--schedule", metavar="PATH",
                   help="render the drift chart for this schedule instead")
    p.add_argument("--out", metavar="PATH",
                   help="write SVG to this file instead of stdout")

    p = cmd("serve", "run the HTTP service for this engine", scenario=False)
    p.add_argument("--host", default="127.0.0.1", help="bind address")
    p.add_argument("--port", type=int, default=8000, help="bind port")

    return parser


def _emit(data: bytes, out: str | None) -> None:
    if out is not None:
        Path(out).write_bytes(data)
        return
    stream = getattr(sys.stdout, "buffer", None)
    if stream is not None:
        stream.write(data)
        stream.flush()
    else:
        sys.stdout.write(data.decode("utf-8"))


def _error(message: str) -> None:
    prefix = "error:"
    if sys.stderr.isatty() and not os.environ.get("NO_COLOR"):
        prefix = "\x1b[31merror:\x1b[0m"
    print(f"{prefix} {message}", file=sys.stderr)


def _outcome(scenario, args) -> str:
    return args.outcome if args.outcome is not None else scenario.outcomes[0]


def _load_json(path: str, what: str):
    try:
        return json.loads(Path(path).read_bytes().decode("utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(
            f"{what} {path}: invalid JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}") from exc


def _load_target(path: str) -> TransportTarget:
    data = _load_json(path, "target file")
    if isinstance(data, dict) and "outcomes" in data:
        # a full scenario doubles as a target; its risks play no role
        return target_from_scenario(scenario_from_mapping(data))
    if not isinstance(data, dict) or set(data) != {"weights", "strata"}:
        raise ScenarioSchemaError(
            f"target file {path}: expected keys 'weights' and 'strata', or a "
            f"full scenario document")
    weights = data["weights"]
    if not isinstance(weights, dict):
        raise ScenarioSchemaError(f"target file {path}: 'weights' must be a map")
    return TransportTarget(
        {str(k): float(w) for k, w in weights.items()},
        _strata_mixtures(data["strata"], f"target file {path}"),
    )


def _strata_mixtures(data, where: str) -> dict[str, dict[str, float]]:
    if not isinstance(data, list):
        raise ScenarioSchemaError(f"{where}: 'strata' must be a list")
    mixtures: dict[str, dict[str, float]] = {}
    for entry in data:
        if not isinstance(entry, dict) or set(entry) != {"label", "versions"}:
            raise ScenarioSchemaError(
                f"{where}: each stratum entry needs exactly 'label' and 'versions'")
        label = entry["label"]
        versions = entry["versions"]
        if not isinstance(label, str) or not isinstance(versions, dict):
            raise ScenarioSchemaError(
                f"{where}: 'label' must be text and 'versions' a map")
        if label in mixtures:
            raise ScenarioSchemaError(f"{where}: duplicate stratum {label!r}")
        try:
            mixtures[label] = {str(k): float(p) for k, p in versions.items()}
        except (TypeError, ValueError) as exc:
            raise ScenarioSchemaError(
                f"{where}: stratum {label!r} has a non-numeric probability") from exc
    return mixtures


def _load_schedule(path: str) -> list[tuple[str, dict[str, dict[str, float]]]]:
    data = _load_json(path, "schedule file")
    if not isinstance(data, list):
        raise ScenarioSchemaError(f"schedule file {path}: expected a JSON list")
    schedule = []
    for i, entry in enumerate(data):
        where = f"schedule file {path} entry {i}"
        if not isinstance(entry, dict) or set(entry) != {"time", "strata"}:
            raise ScenarioSchemaError(f"{where}: needs exactly 'time' and 'strata'")
        time = entry["time"]
        if isinstance(time, bool) or not isinstance(time, (int, float, str)):
            raise ScenarioSchemaError(f"{where}: 'time' must be a number or text")
        schedule.append((str(time), _strata_mixtures(entry["strata"], where)))
    return schedule


def _run_validate(args) -> int:
    scenario = load_scenario(args.scenario, validate=False)
    report = validate_scenario(scenario)
    _emit(write_report(report, args.format), args.out)
    return 0 if report.ok else 1


def _run_exact(args) -> int:
    scenario = load_scenario(args.scenario)
    outcome = _outcome(scenario, args)
    contrast = standardized_contrast(scenario, outcome)
    arm1, arm0 = trial_view(scenario, outcome)
    if args.format == "csv":
        data = (b"contrast,arm1_mean,arm0_mean\n"
                + f"{format_float(contrast)},{format_float(arm1)},"
                  f"{format_float(arm0)}\n".encode())
    else:
        data = json_bytes({"scenario": scenario.name, "outcome": outcome,
                           "contrast": contrast, "arm1_mean": arm1,
                           "arm0_mean": arm0})
    _emit(data, args.out)
    return 0


def _run_report(args, report) -> int:
    _emit(write_report(report, args.format), args.out)
    return 0


def _dispatch(args) -> int:
    if args.command == "validate":
        return _run_validate(args)
    if args.command == "exact":
        return _run_exact(args)
    if args.command == "decompose":
        scenario = load_scenario(args.scenario)
        return _run_report(args, decompose_contrast(scenario, _outcome(scenario, args)))
    if args.command == "simulate":
        scenario = load_scenario(args.scenario)
        cohort = sample_cohort(scenario, args.n, args.seed)
        return _run_report(args, estimate_blind(cohort, _outcome(scenario, args)))
    if args.command == "aware":
        scenario = load_scenario(args.scenario)
        cohort = sample_cohort(scenario, args.n, args.seed)
        return _run_report(args, estimate_aware(cohort, _outcome(scenario, args)))
    if args.command == "mc":
        scenario = load_scenario(args.scenario)
        return _run_report(args, monte_carlo_study(
            scenario, _outcome(scenario, args), args.n, args.reps, args.seed,
            workers=args.workers))
    if args.command == "transport":
        scenario = load_scenario(args.scenario)
        target = _load_target(args.target)
        return _run_report(args, transport_contrast(
            scenario, _outcome(scenario, args), target))
    if args.command == "drift":
        scenario = load_scenario(args.scenario)
        schedule = _load_schedule(args.schedule)
        return _run_report(args, contrast_timeseries(
            scenario, _outcome(scenario, args), schedule))
    if args.command == "irrelevance":
        scenario = load_scenario(args.scenario)
        return _run_report(args, version_irrelevance_check(
            scenario, _outcome(scenario, args), args.tolerance))
    if args.command == "chart":
        scenario = load_scenario(args.scenario)
        outcome = _outcome(scenario, args)
        if args.schedule is not None:
            report = contrast_timeseries(scenario, outcome, _load_schedule(args.schedule))
        else:
            report = decompose_contrast(scenario, outcome)
        _emit(render_chart(report), args.out)
        return 0
    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0
    raise AssertionError(f"unhandled command {args.command!r}")


def run_command(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except EngineError as exc:
        _error(str(exc))
        return 1
    except (ScenarioSyntaxError, ScenarioSchemaError) as exc:
        _error(str(exc))
        return 2
    except OSError as exc:
        _error(str(exc))
        return 2


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
