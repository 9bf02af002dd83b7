""" Command line: clean logs, inspect scores, and run the evaluation harness

Exit status:
* 0: success
* 1: internal error
* 2: input problems: unreadable or malformed files, no logs, invalid state machine
* 3: invalid arguments or configuration
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import abc
from pathlib import Path
from typing import Optional, Union

import pydantic as pd

from logcleaner.dependency import compute_mscore, format_score_table, pairwise_scores
from logcleaner.error import BaseApplicationError, exc
from logcleaner.error.converting import converting_unexpected_errors
from logcleaner.harness import (
    NoiseSpec, SweepConfig, diversity_report, generate_traces, inject_noise, load_fsm, nr_sweep, write_sweep,
)
from logcleaner.harness.sweep import format_summary_csv
from logcleaner.log import LogFormat, load_log_set
from logcleaner.pipeline import PipelineConfig, clean_directory, write_log_set_atomic
from logcleaner.report import write_text_atomic
from logcleaner.settings import Settings, get_settings
from logcleaner.settings.logging import basicConfig
from logcleaner.structure.titled_enum import get_description, get_title


def main(argv: Optional[abc.Sequence[str]] = None) -> int:
    """ Run a command. Returns the exit status """
    verbose = 0
    try:
        with converting_unexpected_errors():
            settings = get_settings()
            args = build_parser(settings).parse_args(argv)
            verbose = args.verbose
            basicConfig(_log_level(args.verbose, settings.LOG_LEVEL))
            return args.command(args, settings)
    except BaseApplicationError as e:
        print_error(e, verbose=verbose >= 2)
        return e.exitcode


def print_error(e: BaseApplicationError, *, verbose: bool = False):
    """ Report an error to stderr: what went wrong, and how to fix it """
    print(f'{e.title}: {e.error}', file=sys.stderr)
    if e.fixit:
        print(f'Hint: {e.fixit}', file=sys.stderr)
    if verbose and e.debug:
        print(json.dumps(e.debug, indent=2, default=str), file=sys.stderr)


def format_exit_statuses() -> str:
    """ List exit statuses with the errors that cause them """
    lines = ['exit status:', '  0  Success']
    for E in sorted(exc.export_error_catalog(), key=lambda E: (E.exitcode, E.__name__)):
        lines.append(f'  {E.exitcode}  {E.title} ({E.__name__})')
    return '\n'.join(lines)


class ArgumentParser(argparse.ArgumentParser):
    """ Argument parser that reports errors as E_ARGUMENT: exit status 3 """

    def error(self, message: str):
        raise exc.E_ARGUMENT(message, f'See: {self.prog} --help', name='argv')


def build_parser(settings: Settings) -> ArgumentParser:
    parser = ArgumentParser(prog='logcleaner', description='Remove operational messages from execution logs',
                            epilog=format_exit_statuses(), formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument('-v', '--verbose', action='count', default=0, help='More logging: -v for INFO, -vv for DEBUG')
    commands = parser.add_subparsers(title='commands', required=True, dest='command_name')

    # clean
    p = commands.add_parser('clean', help='Remove operational messages and write a report')
    _add_input_arguments(p)
    p.add_argument('--out', dest='output_dir', type=Path, required=True, help='Directory for the cleaned logs')
    p.add_argument('--delta', type=float, default=None,
                   help=f'Periodicity deviation threshold (default: {settings.DELTA})')
    p.add_argument('--bandwidth', type=_bandwidth, default=None,
                   help=f'Mean-shift bandwidth: a number, "auto", or "range" (default: {settings.BANDWIDTH})')
    p.add_argument('--skip-periodicity', action='store_true', help='Do not run periodicity analysis')
    p.add_argument('--skip-dependency', action='store_true', help='Do not run dependency analysis')
    p.add_argument('--report', type=Path, required=True, help='Where to write the JSON report')
    p.add_argument('--seed', type=int, default=None, help='Recorded in the report')
    p.set_defaults(command=cmd_clean)

    # score
    p = commands.add_parser('score', help='Print the maximum dependency score of every template')
    _add_input_arguments(p)
    p.add_argument('--pairs', action='store_true', help='Also print forward and backward scores of every pair')
    p.set_defaults(command=cmd_score)

    # gen
    p = commands.add_parser('gen', help='Generate transactional logs from a state machine')
    p.add_argument('--model', type=Path, required=True, help='State machine file (JSON)')
    p.add_argument('--visits', type=int, default=settings.VISITS_PER_STATE, help='Visits per state')
    p.add_argument('--min-logs', type=int, default=settings.MIN_LOGS, help='The minimum number of logs')
    p.add_argument('--max-len', type=int, default=settings.MAX_LEN, help='The maximum log length')
    p.add_argument('--stop-probability', type=float, default=settings.STOP_PROBABILITY,
                   help='The probability to stop at an accepting state')
    p.add_argument('--out', type=Path, required=True, help='Directory for the logs')
    p.add_argument('--seed', type=int, default=None, help='Random seed')
    p.set_defaults(command=cmd_gen)

    # inject
    p = commands.add_parser('inject', help='Inject operational noise into logs')
    _add_input_arguments(p)
    p.add_argument('--out', type=Path, required=True, help='Directory for the noisy logs')
    p.add_argument('--nr', type=float, required=True, help='Noise rate, in (0, 1)')
    p.add_argument('--n-templates', type=int, default=settings.N_TEMPLATES, help='The number of operational templates')
    p.add_argument('--seed', type=int, default=None, help='Random seed')
    p.add_argument('--truth', type=Path, required=True, help='Where to write the ground truth (JSON)')
    p.set_defaults(command=cmd_inject)

    # eval
    p = commands.add_parser('eval', help='Measure recall and specificity over a range of noise rates')
    p.add_argument('--model', type=Path, required=True, help='State machine file (JSON)')
    p.add_argument('--nr', type=_float_list, required=True, help='Comma-separated noise rates: 0.1,0.2,...')
    p.add_argument('--reps', type=int, default=30, help='Repetitions per noise rate')
    p.add_argument('--out', type=Path, required=True, help='Per-run results (CSV)')
    p.add_argument('--summary', type=Path, default=None, help='Aggregated results (CSV). Default: <out>-summary.csv')
    p.add_argument('--seed', type=int, default=0, help='Sweep seed')
    p.add_argument('--visits', type=int, default=settings.VISITS_PER_STATE, help='Visits per state')
    p.add_argument('--min-logs', type=int, default=settings.MIN_LOGS, help='The minimum number of logs')
    p.add_argument('--max-len', type=int, default=settings.MAX_LEN, help='The maximum log length')
    p.add_argument('--n-templates', type=int, default=settings.N_TEMPLATES, help='The number of operational templates')
    p.add_argument('--delta', type=float, default=settings.DELTA, help='Periodicity deviation threshold')
    p.add_argument('--bandwidth', type=_bandwidth, default='range', help='Mean-shift bandwidth (default: range)')
    p.set_defaults(command=cmd_eval)

    # divscore
    p = commands.add_parser('divscore', help='Print the diversity scores of a state machine')
    p.add_argument('--model', type=Path, required=True, help='State machine file (JSON)')
    p.set_defaults(command=cmd_divscore)

    return parser


def cmd_clean(args: argparse.Namespace, settings: Settings) -> int:
    config = PipelineConfig.from_settings(
        settings,
        input_dir=args.input_dir,
        output_dir=args.output_dir,
        report=args.report,
        format=args.format,
        delta=args.delta,
        bandwidth=args.bandwidth,
        skip_periodicity=args.skip_periodicity,
        skip_dependency=args.skip_dependency,
        seed=args.seed,
    )
    report = clean_directory(config)

    print(f'Removed {report.counts.entries_removed} of {report.counts.entries_before} entries; '
          f'templates: {", ".join(report.removed) or "none"}')
    if report.segmentation and report.segmentation.degenerate:
        print('Segmentation found a single cluster: no operational templates removed')
    return 0


def cmd_score(args: argparse.Namespace, settings: Settings) -> int:
    logs = load_log_set(args.input_dir, args.format)
    scores = compute_mscore(logs)

    print(json.dumps(dict(sorted(scores.items())), indent=2))
    print()
    for line in format_score_table(scores):
        print(line)

    if args.pairs:
        print()
        print('x\ty\tforward\tbackward\tscore')
        for (x, y), pair in pairwise_scores(logs).items():
            print(f'{x}\t{y}\t{pair.forward:.6f}\t{pair.backward:.6f}\t{pair.score:.6f}')
    return 0


def cmd_gen(args: argparse.Namespace, settings: Settings) -> int:
    model = load_fsm(args.model)
    logs = generate_traces(
        model,
        args.visits,
        args.min_logs,
        args.max_len,
        args.seed,
        stop_probability=args.stop_probability,
    )
    write_log_set_atomic(logs, args.out)
    print(f'Generated {len(logs)} logs, {logs.entry_count} entries')
    return 0


def cmd_inject(args: argparse.Namespace, settings: Settings) -> int:
    spec = _validated(NoiseSpec, n_templates=args.n_templates, nr=args.nr, seed=args.seed)
    logs = load_log_set(args.input_dir, args.format)
    noisy, truth = inject_noise(logs, spec)

    write_log_set_atomic(noisy, args.out)
    write_text_atomic(args.truth, truth.to_json())
    print(f'Injected {noisy.entry_count - logs.entry_count} entries of {len(truth.operational)} operational templates')
    return 0


def cmd_eval(args: argparse.Namespace, settings: Settings) -> int:
    config = _validated(
        SweepConfig,
        visits_per_state=args.visits,
        min_logs=args.min_logs,
        max_len=args.max_len,
        stop_probability=settings.STOP_PROBABILITY,
        n_templates=args.n_templates,
        delta=args.delta,
        bandwidth=args.bandwidth,
    )
    model = load_fsm(args.model)
    result = nr_sweep(model, args.nr, args.reps, args.seed, config)

    summary_path = args.summary or default_summary_path(args.out)
    write_sweep(result, args.out, summary_path)
    sys.stdout.write(format_summary_csv(result.summary))
    return 0


def cmd_divscore(args: argparse.Namespace, settings: Settings) -> int:
    model = load_fsm(args.model)
    print(diversity_report(model).json(indent=2))
    return 0


def default_summary_path(out: Path) -> Path:
    """ sweep.csv -> sweep-summary.csv """
    return out.with_name(f'{out.stem}-summary{out.suffix or ".csv"}')


def _add_input_arguments(p: argparse.ArgumentParser):
    p.add_argument('--in', dest='input_dir', type=Path, required=True, help='Directory with log files')
    p.add_argument('--format', type=LogFormat, choices=list(LogFormat), default=LogFormat.AUTO,
                   help=f'{get_title(LogFormat)}. {get_description(LogFormat)}. '
                        + ', '.join(f'{f.value}: {f.title}' for f in LogFormat))


def _validated(Model: type[pd.BaseModel], **values) -> pd.BaseModel:
    try:
        return Model(**values)
    except pd.ValidationError as e:
        raise exc.E_CONFIG.from_pydantic_validation_error(e) from e


def _bandwidth(value: str) -> Union[float, str]:
    """ A number, or a rule name. Validated by the config models """
    try:
        return float(value)
    except ValueError:
        return value


def _float_list(value: str) -> list[float]:
    try:
        return [float(v) for v in value.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected comma-separated numbers, got {value!r}')


def _log_level(verbose: int, default: str) -> Union[int, str]:
    if verbose >= 2:
        return logging.DEBUG
    elif verbose == 1:
        return logging.INFO
    else:
        return default.upper()
