#!/usr/bin/env python3
"""
trace-rearrange - command line entry point

Runs verification suites, evaluates single instances from matrix files,
runs counterexample hunts, re-verifies stored hunt records and prints the
inequality registry.

Usage:
    trace-rearrange verify all --dims 2..6 --samples 500 --seed 1
    trace-rearrange eval conjecture1 --A a.json --B b.json --p 1.5
    trace-rearrange hunt --config hunts/rev_probe_s2.yaml
    trace-rearrange hunt --replay results/hunt_rev_probe.json
    trace-rearrange registry --id conjecture1

Exit codes:
    0  holds (no violation)
    1  violation of a conjecture (evidence), or a violated eval
    2  violation of a proved statement (numerics defect)
    3  usage, configuration or validation error
"""

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, List, Optional

from . import __version__
from .config_manager import ConfigManager, get_config_manager
from .errors import ConfigError, ReplayMismatch, TraceRearrangeError
from .hunter import HuntConfig, RestartResult, hunt, load_record, verify_replay
from .matrix_io import load_matrix
from .records import HuntRecord, Status
from .registry import get_registry
from .reporter import ResultsWriter, RunManifest, append_record, json_safe, write_json
from .suites import SuiteRunner, VerifySettings, get_suite_catalog, summary_record

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_EVIDENCE = 1
EXIT_DEFECT = 2
EXIT_USAGE = 3

MATRIX_FLAGS = ("A", "B", "X", "Y", "A1", "A2", "f", "g")
PARAM_FLAGS = ("p", "r", "s", "t", "lambda")


class _Parser(argparse.ArgumentParser):
    """Usage errors become ConfigError so they map to exit 3, not argparse's 2."""

    def error(self, message):
        raise ConfigError(f"usage: {message}")


def setup_logging(log_file: Optional[str] = None, log_level: str = "INFO"):
    """Setup logging configuration. Console output goes to stderr."""
    handlers = [logging.StreamHandler(sys.stderr)]

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True
    )


def parse_dims(text: str) -> List[int]:
    """``2..6`` -> [2, 3, 4, 5, 6]; ``3`` -> [3]; ``2,4`` -> [2, 4]."""
    try:
        if ".." in text:
            lo, hi = (int(part) for part in text.split("..", 1))
            dims = list(range(lo, hi + 1))
        else:
            dims = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"dims: cannot parse {text!r} (expected a..b or a comma list)") from None
    if not dims or any(d < 1 for d in dims):
        raise ConfigError(f"dims: need positive dimensions, got {text!r}")
    return dims


def parse_float_list(name: str, text: str) -> List[float]:
    """Comma-separated numbers; ``inf`` is accepted."""
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"{name}: cannot parse {text!r} as a list of numbers") from None
    if not values:
        raise ConfigError(f"{name}: empty list")
    return values


def parse_float(name: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{name}: cannot parse {text!r} as a number") from None


def _flag_overrides(args, names) -> Dict[str, Any]:
    """CLI flags the user actually passed, for the manifest."""
    return {name: getattr(args, name) for name in names if getattr(args, name, None) is not None}


def cmd_verify(args, manager: ConfigManager) -> int:
    """Run verification suites and write NDJSON results plus a manifest."""
    config = manager.get()
    catalog = get_suite_catalog()
    suites = catalog.resolve(args.suite)

    overrides = {name: parse_float_list(name, getattr(args, name))
                 for name in ("p", "r", "s", "t") if getattr(args, name) is not None}
    settings = VerifySettings(
        samples=args.samples if args.samples is not None else config.verify.samples,
        dims=parse_dims(args.dims) if args.dims else list(config.verify.dims),
        seed=args.seed if args.seed is not None else config.verify.seed,
        workers=args.workers if args.workers is not None else config.verify.workers,
        tolerance=args.tol if args.tol is not None else config.tolerances.verdict,
        hermitian_tol=config.tolerances.hermitian,
        scale=config.ensembles.scale,
        quadrature=config.quadrature,
        overrides=overrides,
    )
    runner = SuiteRunner(settings)
    runner.preflight(suites)

    results_path = args.out or str(Path(config.reporting.output_dir) / f"verify_{args.suite}.ndjson")
    manifest = RunManifest(
        command="verify",
        results_path=results_path,
        config_path=manager.config_path_str,
        overrides={"suite": args.suite, **_flag_overrides(args, ("dims", "samples", "seed", "p", "r", "s", "t",
                                                                 "tol", "workers"))},
        effective_config={**manager.to_dict(), "verify_settings": settings.to_dict()},
    )
    manifest.write()

    logger.info(f"Running {len(suites)} suite(s): {', '.join(s.name for s in suites)}")
    results = []
    with ResultsWriter(results_path) as writer:
        for suite in suites:
            suite_results = runner.run([suite], on_check=lambda summary: writer.write(summary.to_dict()))
            writer.write(suite_results[0].to_dict())
            results.extend(suite_results)
        summary = summary_record(results, settings)
        writer.write(summary)

    for result in results:
        state = "FAIL" if result.proved_violations else "ok"
        print(f"{result.name}: {state} min_slack={result.min_slack:.3e} violations={result.violations}")
    print(f"results: {results_path}")
    return summary["exit_code"]


def cmd_eval(args, manager: ConfigManager) -> int:
    """Evaluate one registered inequality on matrices read from files."""
    config = manager.get()
    entry = get_registry().get(args.inequality_id)
    inputs = {name: load_matrix(getattr(args, name), name) for name in MATRIX_FLAGS
              if getattr(args, name) is not None}
    params = {name: parse_float(name, getattr(args, name)) for name in PARAM_FLAGS
              if getattr(args, name) is not None}
    tol = args.tol if args.tol is not None else config.tolerances.verdict

    report = entry.evaluate(inputs, params, tol)
    print(json.dumps(json_safe(report.to_dict()), indent=2, allow_nan=False))

    if args.out:
        write_json(args.out, report.to_dict())
        RunManifest(
            command="eval",
            results_path=args.out,
            config_path=manager.config_path_str,
            overrides={"inequality_id": args.inequality_id,
                       **_flag_overrides(args, MATRIX_FLAGS + PARAM_FLAGS + ("tol",))},
            effective_config=manager.to_dict(),
        ).write()
    return EXIT_EVIDENCE if report.violated else EXIT_OK


def _print_progress(done: int, total: int, result: RestartResult) -> None:
    best = result.best_report
    print(f"restart {done}/{total}: restart={result.restart} step={result.best_step} "
          f"min_slack={best.relative_slack:.6e} trials={result.trials} violations={result.violations}",
          flush=True)


def _replay_exit(report) -> int:
    if report.violated:
        return EXIT_DEFECT if report.status is Status.PROVED else EXIT_EVIDENCE
    return EXIT_OK


def cmd_replay(args, manager: ConfigManager) -> int:
    """Re-verify a stored HuntRecord against tolerances.replay."""
    config = manager.get()
    record = load_record(args.replay)
    try:
        report = verify_replay(record, config.tolerances.replay)
    except ReplayMismatch as e:
        logger.error(f"Stored witness does not reproduce: {e}")
        return EXIT_DEFECT
    print(json.dumps(json_safe(report.to_dict()), indent=2, allow_nan=False))
    return _replay_exit(report)


def cmd_hunt(args, manager: ConfigManager) -> int:
    """Run a counterexample hunt from a HuntConfig file."""
    if args.replay:
        return cmd_replay(args, manager)
    config = manager.get()
    defaults = asdict(config.hunt)
    defaults.update(tolerance=config.tolerances.verdict, confirm_tolerance=config.tolerances.confirm,
                    scale=config.ensembles.scale)
    hunt_config = HuntConfig.load(args.hunt_config, defaults)
    if args.restarts is not None:
        hunt_config.restarts = args.restarts
    if args.seed is not None:
        hunt_config.seed = args.seed
    if args.workers is not None:
        hunt_config.workers = args.workers
    hunt_config.validate()

    results_path = args.out or str(Path(config.reporting.output_dir) / f"hunt_{hunt_config.inequality_id}.json")
    RunManifest(
        command="hunt",
        results_path=results_path,
        config_path=manager.config_path_str,
        overrides={"hunt_config": args.hunt_config, **_flag_overrides(args, ("restarts", "seed", "workers"))},
        effective_config={**manager.to_dict(), "hunt_config": hunt_config.to_dict()},
    ).write()

    record = hunt(hunt_config, progress=_print_progress)
    stored = record.to_dict(include_wall_time=False)
    try:
        verify_replay(HuntRecord.from_dict(json.loads(json.dumps(json_safe(stored)))), config.tolerances.replay)
    except ReplayMismatch as e:
        logger.error(f"Best witness does not survive serialization: {e}")
        return EXIT_DEFECT
    write_json(results_path, stored)
    append_record(str(Path(config.reporting.output_dir) / config.reporting.results_log), record.to_dict())

    best = record.best_report
    print(f"best: {best.inequality_id} params={best.params} relative_slack={best.relative_slack:.6e} "
          f"verdict={best.verdict.value} status={best.status.value}")
    print(f"trials={record.trials} violations={record.violations} proved_violations={record.proved_violations}")
    print(f"results: {results_path}")

    if record.proved_violations:
        logger.error("Violation of a proved statement: numerics defect")
        return EXIT_DEFECT
    if record.violations:
        logger.warning("Violation of a conjecture found")
        return EXIT_EVIDENCE
    return EXIT_OK


def cmd_registry(args, manager: ConfigManager) -> int:
    """Print the registry (or one entry) as JSON."""
    print(get_registry().to_json(args.id))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="trace-rearrange",
        description="trace-rearrange - verification and counterexample search for trace inequalities",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s verify all --dims 2..6 --samples 500 --seed 1
  %(prog)s verify hanner-matrix --p 2 --samples 100
  %(prog)s eval conjecture1 --A a.json --B b.json --p 1.5
  %(prog)s hunt --config hunts/rev_probe_s2.yaml
  %(prog)s hunt --replay results/hunt_rev_probe.json
  %(prog)s registry --id conjecture1
        """
    )

    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--config', help='Config file path (JSON or YAML)')
    parser.add_argument('--log-level', default=None, choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    parser.add_argument('--log-file', help='Log file path')
    parser.add_argument('--create-config', metavar='PATH', nargs='?', const='config/config.json',
                        help='Write the default configuration file and exit')

    subparsers = parser.add_subparsers(dest='command')

    # Verify command
    verify_parser = subparsers.add_parser('verify', help='Run verification suites')
    verify_parser.add_argument('suite', help=f"Suite name or 'all' ({', '.join(get_suite_catalog().names())})")
    verify_parser.add_argument('--dims', help='Dimensions, a..b or comma list')
    verify_parser.add_argument('--samples', type=int, help='Samples per check')
    verify_parser.add_argument('--seed', type=int, help='Run seed')
    verify_parser.add_argument('--p', help='Comma-separated p values')
    verify_parser.add_argument('--r', help='Comma-separated r values')
    verify_parser.add_argument('--s', help='Comma-separated s values')
    verify_parser.add_argument('--t', help='Comma-separated t values')
    verify_parser.add_argument('--tol', type=float, help='Relative verdict tolerance')
    verify_parser.add_argument('--out', help='Results file (NDJSON)')
    verify_parser.add_argument('--workers', type=int, help='Worker threads')

    # Eval command
    eval_parser = subparsers.add_parser('eval', help='Evaluate one inequality on matrix files')
    eval_parser.add_argument('inequality_id', help='Registry id')
    for name in MATRIX_FLAGS:
        eval_parser.add_argument(f'--{name}', help=f'Matrix/vector JSON file for input {name}')
    for name in PARAM_FLAGS:
        eval_parser.add_argument(f'--{name}', dest=name, help=f'Parameter {name}')
    eval_parser.add_argument('--tol', type=float, help='Relative verdict tolerance')
    eval_parser.add_argument('--out', help='Also write the report to this file')

    # Hunt command
    hunt_parser = subparsers.add_parser('hunt', help='Run a counterexample hunt')
    source = hunt_parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--config', dest='hunt_config', help='HuntConfig file (JSON or YAML)')
    source.add_argument('--replay', metavar='RECORD', help='Re-verify a stored HuntRecord JSON file')
    hunt_parser.add_argument('--restarts', type=int, help='Override restarts')
    hunt_parser.add_argument('--seed', type=int, help='Override seed')
    hunt_parser.add_argument('--workers', type=int, help='Worker threads')
    hunt_parser.add_argument('--out', help='HuntRecord output file')

    # Registry command
    registry_parser = subparsers.add_parser('registry', help='Print the inequality registry')
    registry_parser.add_argument('--id', help='Print a single entry')

    return parser


COMMANDS = {
    'verify': cmd_verify,
    'eval': cmd_eval,
    'hunt': cmd_hunt,
    'registry': cmd_registry,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    try:
        parser = build_parser()
        args = parser.parse_args(argv)

        if args.create_config:
            path = ConfigManager().save(args.create_config)
            print(f"Configuration file created: {path}")
            return EXIT_OK

        manager = get_config_manager(args.config)
        config = manager.load()
        setup_logging(args.log_file or config.log_file or None, args.log_level or config.log_level)

        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return COMMANDS[args.command](args, manager)
    except TraceRearrangeError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
