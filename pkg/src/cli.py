"""
Command-line front door

    python app.py feasibility data/ud_pair.json
    python app.py construct data/ud_pair.json --gamma 0.5,0.5
    python app.py bounds data/cloning_pair.json --compare cloning chefles_barnett --format csv
    python app.py verify data/ud_pair.json --shots 100000
    python app.py gen --n 3 --dim 4 --seed 7 --write random.json

Several instance files may be given; they are processed independently and
reported in input order. The exit status is that of the first file that
did not finish with 0.
"""

from __future__ import annotations

import argparse
import functools
import logging
import os
import sqlite3
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

from .bounds import COMPARISON_NAMES
from .config import LEDGER_PATH_ENV, ToleranceConfig, get_tolerance_config
from .ledger import RunLedger
from .errors import ExitStatus, SeparationError
from .feasibility import StateKind
from .instance_io import (
    ParsedInstance,
    default_channel_path,
    input_digest,
    instance_to_dict,
    load_channel,
    load_instance_file,
    save_channel,
    write_instance,
)
from .oracle import EnsembleSpec, PriorMode, random_instance
from .pipeline import AnalysisResult, run_bounds, run_construction, run_feasibility, run_verification
from .reporting import RunReport, render_csv, render_json, render_text, to_report_value

logger = logging.getLogger(__name__)

FILE_COMMANDS = ("feasibility", "construct", "bounds", "verify")
RENDERERS = {"json": render_json, "csv": render_csv, "text": render_text}
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def _gamma_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers (got {text!r})") from None


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("tolerances and output")
    group.add_argument("--tol", type=float, default=None, help="relative PSD tolerance")
    group.add_argument("--rank-tol", type=float, default=None, help="relative singular-value cutoff")
    group.add_argument("--precision", type=float, default=None, help="bisection precision")
    group.add_argument("--multistarts", type=int, default=None, help="certificate search starts")
    group.add_argument("--sweeps", type=int, default=None, help="coordinate-ascent sweeps per start")
    group.add_argument("--seed", type=int, default=None, help="seed for searches, sampling and gen")
    group.add_argument("--depth", type=int, default=None, help="series depth r of the bounds")
    group.add_argument("--format", choices=sorted(RENDERERS), default="text")
    group.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    group.add_argument("--ledger", default=None, help=f"SQLite run ledger (default: ${LEDGER_PATH_ENV})")
    group.add_argument("--jobs", type=int, default=1, help="instance files processed concurrently")
    group.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="qsep",
        description="Probabilistic state separation: feasibility, channel construction and failure bounds.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    feasibility = commands.add_parser("feasibility", parents=[common],
                                      help="certificate search and support-space conditions")
    feasibility.add_argument("files", nargs="+", type=Path)

    construct = commands.add_parser("construct", parents=[common],
                                    help="build, export and audit the separating channel")
    construct.add_argument("files", nargs="+", type=Path)
    construct.add_argument("--gamma", type=_gamma_list, default=None, help="success probabilities, e.g. 0.5,0.5")
    construct.add_argument("--channel", type=Path, default=None,
                           help="channel file to write (default: <stem>.channel.json)")

    bounds = commands.add_parser("bounds", parents=[common], help="failure-probability lower bounds")
    bounds.add_argument("files", nargs="+", type=Path)
    bounds.add_argument("--compare", nargs="*", choices=COMPARISON_NAMES, default=None,
                        help="comparison bounds to include (default: all)")

    verify = commands.add_parser("verify", parents=[common], help="audit an exported channel")
    verify.add_argument("files", nargs="+", type=Path)
    verify.add_argument("--gamma", type=_gamma_list, default=None, help="promised success probabilities")
    verify.add_argument("--channel", type=Path, default=None,
                        help="channel file to read (default: <stem>.channel.json)")
    verify.add_argument("--shots", type=int, default=None, help="Monte Carlo shots per input state")

    gen = commands.add_parser("gen", parents=[common], help="seeded random instance")
    gen.add_argument("--n", type=int, default=2, help="number of states")
    gen.add_argument("--dim", type=int, default=2, help="input dimension")
    gen.add_argument("--target-dim", type=int, default=None, help="target dimension (default: --dim)")
    gen.add_argument("--kind", choices=[k.value for k in StateKind], default=StateKind.PURE.value)
    gen.add_argument("--prior-mode", choices=[m.value for m in PriorMode], default=PriorMode.UNIFORM.value)
    gen.add_argument("--write", type=Path, default=None, help="instance file to write")
    return parser


def config_from_args(args: argparse.Namespace) -> ToleranceConfig:
    return get_tolerance_config(
        psd_tol=args.tol,
        rank_tol=args.rank_tol,
        precision=args.precision,
        multistarts=args.multistarts,
        sweeps=args.sweeps,
        seed=args.seed,
        depth=args.depth,
    )


# ------------------------------------------------------------------ reports
def result_report(result: AnalysisResult, parsed: ParsedInstance) -> RunReport:
    return RunReport(
        command=result.command,
        input_digest=parsed.digest,
        results=to_report_value(result.results),
        warnings=list(parsed.warnings) + list(result.diagnostics["warnings"]),
        errors=list(result.diagnostics["errors"]),
        exit_status=int(result.exit_status),
        source=str(parsed.source) if parsed.source else None,
    )


def error_report(command: str, path: Optional[Path], exc: BaseException,
                 digest: Optional[str] = None) -> RunReport:
    """A failed run keeps its diagnostic and nothing else."""
    status = ExitStatus.determine(exc)
    logger.debug("%s %s failed with %s", command, path, type(exc).__name__)
    return RunReport(
        command=command,
        input_digest=digest,
        errors=[f"{type(exc).__name__}: {exc}"],
        exit_status=int(status),
        source=str(path) if path else None,
    )


# ------------------------------------------------------------------ commands
def _run_command(args: argparse.Namespace, config: ToleranceConfig, parsed: ParsedInstance) -> AnalysisResult:
    instance = parsed.instance
    if args.command == "feasibility":
        return run_feasibility(instance, config)
    if args.command == "construct":
        result = run_construction(instance, config, args.gamma)
        if result.exit_status is not ExitStatus.OK:
            result.results["channel_file"] = None
            result.diagnostics["warnings"].append("channel file not written: the audit did not pass")
            return result
        target = args.channel or default_channel_path(parsed.source)
        save_channel(target, result.channel)
        result.results["channel_file"] = str(target)
        return result
    if args.command == "bounds":
        return run_bounds(instance, config, args.compare, parsed.cloning)
    channel = load_channel(args.channel or default_channel_path(parsed.source))
    return run_verification(instance, channel, config, args.gamma, args.shots)


def process_file(args: argparse.Namespace, config: ToleranceConfig, path: Path) -> RunReport:
    parsed = None
    try:
        parsed = load_instance_file(path)
        return result_report(_run_command(args, config, parsed), parsed)
    except (SeparationError, OSError) as exc:
        return error_report(args.command, path, exc, parsed.digest if parsed else None)


def run_gen(args: argparse.Namespace, config: ToleranceConfig) -> RunReport:
    try:
        spec = EnsembleSpec(args.n, args.dim, StateKind(args.kind), config.seed, PriorMode(args.prior_mode))
        instance = random_instance(spec, args.target_dim)
        document = instance_to_dict(instance)
        results = {"n": spec.n, "dim": spec.dim, "target_dim": instance.target_dim,
                   "kind": spec.kind.value, "seed": spec.seed, "prior_mode": spec.prior_mode.value}
        if args.write:
            path = write_instance(args.write, instance)
            results["instance_file"] = str(path)
            digest = input_digest(path.read_bytes())
        else:
            results["instance"] = document
            digest = None
    except (SeparationError, OSError) as exc:
        return error_report("gen", args.write, exc)
    return RunReport(command="gen", input_digest=digest, results=to_report_value(results),
                     source=str(args.write) if args.write else None)


def run_batch(args: argparse.Namespace, config: ToleranceConfig) -> List[RunReport]:
    work = functools.partial(process_file, args, config)
    if args.jobs > 1 and len(args.files) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            return list(pool.map(work, args.files))
    return [work(path) for path in args.files]


def batch_exit_status(reports: Sequence[RunReport]) -> int:
    for report in reports:
        if report.exit_status != 0:
            return report.exit_status
    return 0


def _record(reports: Sequence[RunReport], ledger_path: Optional[str]) -> None:
    if not (ledger_path or os.environ.get(LEDGER_PATH_ENV)):
        return
    with RunLedger(ledger_path) as ledger:
        for report in reports:
            run_id = ledger.record_run(report)
            logger.debug("recorded %s run %s", report.command, run_id)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format=LOG_FORMAT, stream=sys.stderr)

    if args.command in ("construct", "verify") and args.channel and len(args.files) > 1:
        parser.error("--channel names one file; omit it to use <stem>.channel.json per instance")
    if args.jobs < 1:
        parser.error(f"--jobs must be at least 1 (got {args.jobs})")

    config = config_from_args(args)
    reports = run_batch(args, config) if args.command in FILE_COMMANDS else [run_gen(args, config)]

    output = RENDERERS[args.format](reports)
    if args.out:
        args.out.write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    status = batch_exit_status(reports)
    try:
        _record(reports, args.ledger)
    except sqlite3.Error as exc:
        logger.error("run ledger not updated: %s", exc)
        return status or int(ExitStatus.INVARIANT)
    return status
