import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import yaml

from summability.lab import matrices
from summability.lab.artifacts import (
    SummaryRow,
    write_experiment_csv,
    write_plot_data,
    write_summary_csv,
)
from summability.lab.config import load_config, load_demo_config
from summability.lab.constants import MATRIX_FAMILY_ATTR_NAME
from summability.lab.decorators import resolve
from summability.lab.enums import Condition, ExitCode
from summability.lab.exceptions import ConfigurationError, LabError
from summability.lab.harness import (
    Experiment,
    MODEL_THEOREMS,
    ratio_growth,
    run_experiment,
)


logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(name)s %(levelname)s %(message)s'


def assertion_failures(report, assertions, growth=None):
    """Messages for every declared assertion `report` does not satisfy."""
    if assertions is None:
        return []
    failures = []
    slope = report.fitted_slope
    if assertions.slope_min is not None and (slope is None or slope < assertions.slope_min):
        failures.append(f'fitted slope {slope!r} below {assertions.slope_min!r}')
    if assertions.slope_max is not None and (slope is None or slope > assertions.slope_max):
        failures.append(f'fitted slope {slope!r} above {assertions.slope_max!r}')
    if assertions.ratio_max is not None and report.constant_ratio_max > assertions.ratio_max:
        failures.append(
            f'constant ratio max {report.constant_ratio_max!r} above {assertions.ratio_max!r}',
        )
    if assertions.ratio_growth_max is not None and growth > assertions.ratio_growth_max:
        failures.append(f'ratio growth {growth!r} above {assertions.ratio_growth_max!r}')
    return failures


def prepare_experiments(config):
    """
    Resolves every function, matrix and model id up front; an unresolved id
    fails the whole run before any experiment starts.
    """
    experiments, errors = [], []
    for entry in config.experiments:
        if entry.model is None and entry.theorem in MODEL_THEOREMS:
            errors.append(f'{entry.id}: Theorem {entry.theorem} needs a modulus model.')
            continue
        try:
            experiments.append(Experiment(entry))
        except ConfigurationError as err:
            errors.append(f'{entry.id}: {err}')
    if errors:
        raise ConfigurationError(
            'The configuration references unknown or missing families.',
            errors=errors,
        )
    return experiments


def _error_row(entry, message):
    return SummaryRow(
        experiment_id=entry.id,
        fitted_slope=None,
        bound_slope=None,
        constant_ratio_max=None,
        assertions='error',
        message=message,
    )


def run_one(experiment, settings):
    entry = experiment.spec
    try:
        report = run_experiment(experiment, settings=settings)
        growth = None
        if entry.assertions is not None and entry.assertions.ratio_growth_max is not None:
            growth = ratio_growth(
                experiment,
                settings=settings,
                factor=entry.assertions.extend_factor,
            )
    except LabError as err:
        logger.error(f'Experiment {entry.id} failed: {err}')
        return None, _error_row(entry, str(err))
    except Exception as err:
        logger.exception(f'Experiment {entry.id} failed unexpectedly: {err}')
        return None, _error_row(entry, f'{type(err).__name__}: {err}')
    failures = assertion_failures(report, entry.assertions, growth=growth)
    return report, SummaryRow.from_report(
        report,
        'fail' if failures else 'pass',
        message='; '.join(failures),
    )


def run(config):
    """
    Runs every experiment of `config` on a pool of `settings.workers` threads
    and writes the artifacts into `settings.output_dir`. Results are collected
    in configuration order, so the summary does not depend on scheduling.
    """
    settings = config.settings
    experiments = prepare_experiments(config)
    os.makedirs(settings.output_dir, exist_ok=True)

    with ThreadPoolExecutor(max_workers=settings.workers) as executor:
        results = list(executor.map(lambda item: run_one(item, settings), experiments))

    rows = []
    for report, row in results:
        if report is not None:
            write_experiment_csv(report, settings.output_dir)
            write_plot_data(report, settings.output_dir)
        rows.append(row)
    write_summary_csv(rows, settings.output_dir)
    return rows


def _print_rows(rows):
    for row in rows:
        status = row.assertions.upper()
        print(
            f'{status:5} {row.experiment_id}: slope={row.fitted_slope!r} '
            f'bound_slope={row.bound_slope!r} ratio_max={row.constant_ratio_max!r} '
            f'hypotheses={row.hypotheses}',
        )
        if row.message:
            print(f'      {row.message}')


def command_run(options):
    config = load_demo_config() if options.demo else load_config(options.config)
    if options.output_dir:
        config.settings.output_dir = options.output_dir
    if options.workers:
        config.settings.workers = options.workers
    logging.getLogger('summability').setLevel(config.settings.logging.level)
    rows = run(config)
    _print_rows(rows)
    if all(row.assertions == 'pass' for row in rows):
        return ExitCode.PASS
    return ExitCode.ASSERTION_FAILURE


def _parse_param(value):
    name, sep, raw = value.partition('=')
    if not sep or not name:
        raise argparse.ArgumentTypeError(f'expected key=value, got {value!r}')
    return name, yaml.safe_load(raw)


def geometric_n_values(n_min, n_max):
    if n_min < 1 or n_max < n_min:
        raise ConfigurationError(f'Invalid n range {n_min}..{n_max}.')
    values = [n_min]
    while values[-1] * 2 <= n_max:
        values.append(values[-1] * 2)
    return values


def check_reports(matrix, n_values, r, c, lower_triangular=False):
    """The (113), (114) and (200) fit reports of `matrix` on `n_values`."""
    if lower_triangular:
        reports = [
            matrices.remark_report(Condition.C113, matrix),
            matrices.remark_report(Condition.C114, matrix),
        ]
    else:
        reports = [
            matrices.check_113(matrix, n_values, r),
            matrices.check_114(matrix, n_values),
        ]
    reports.append(matrices.check_200(matrix, n_values, r, c))
    return reports


def _print_report(report):
    status = 'ok' if report.ok else 'FAILED'
    print(f'({report.condition}) {status} K={report.constant!r} coarse={report.coarse_constant!r}')
    for item in report.items:
        at = f' at n={item.at}' if item.at is not None else ''
        print(f'    {item.level}{at}: {item.message}')


def command_check(options):
    matrix = resolve(matrices, MATRIX_FAMILY_ATTR_NAME, options.matrix, dict(options.param))
    reports = check_reports(
        matrix,
        geometric_n_values(options.n_min, options.n_max),
        options.r,
        options.c,
        lower_triangular=options.lower_triangular,
    )
    print(f'Matrix {matrix.label}, r={options.r}, c={options.c!r}')
    for report in reports:
        _print_report(report)
    return ExitCode.PASS if all(report.ok for report in reports) else ExitCode.ASSERTION_FAILURE


def get_parser():
    parser = argparse.ArgumentParser(
        prog='summability-lab',
        description='Deviation of matrix means of (conjugate) Fourier series from their bounds.',
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    run_parser = subparsers.add_parser('run', help='Run the experiments of a configuration.')
    run_parser.add_argument('config', nargs='?', help='YAML or TOML configuration file.')
    run_parser.add_argument('--demo', action='store_true', help='Run the bundled demo config.')
    run_parser.add_argument('--output-dir', help='Overrides settings.output_dir.')
    run_parser.add_argument('--workers', type=int, help='Overrides settings.workers.')
    run_parser.set_defaults(handler=command_run)

    check_parser = subparsers.add_parser('check', help='Check (113), (114), (200) for a matrix.')
    check_parser.add_argument('matrix', help='Matrix family id, e.g. cesaro.')
    check_parser.add_argument('--r', type=int, default=1)
    check_parser.add_argument('--n-min', type=int, default=8)
    check_parser.add_argument('--n-max', type=int, default=1024)
    check_parser.add_argument('--c', type=float, default=2.0)
    check_parser.add_argument(
        '--lower-triangular',
        action='store_true',
        help='Report (113) and (114) as holding for lower triangular rows.',
    )
    check_parser.add_argument(
        '--param',
        type=_parse_param,
        action='append',
        default=[],
        metavar='KEY=VALUE',
        help='Family parameter, may be repeated.',
    )
    check_parser.set_defaults(handler=command_check)
    return parser


def main(argv=None):
    parser = get_parser()
    options = parser.parse_args(argv)
    if getattr(options, 'command', None) == 'run' and not options.demo and not options.config:
        parser.error('run needs a configuration file or --demo')
    logging.basicConfig(level=logging.INFO, format=LOG_FORMAT)
    try:
        return options.handler(options)
    except ConfigurationError as err:
        print(f'Configuration error: {err}', file=sys.stderr)
        return ExitCode.CONFIGURATION_ERROR
    except LabError as err:
        print(f'Error: {err}', file=sys.stderr)
        return ExitCode.ASSERTION_FAILURE


if __name__ == '__main__':  # pragma: no cover
    sys.exit(main())
