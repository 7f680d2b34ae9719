import math
import os
from typing import Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel


FLOAT_FORMAT = '%.17g'
EXPERIMENT_COLUMNS = ['n', 'deviation', 'bound_value', 'ratio', 'epsilon_used']
SUMMARY_COLUMNS = [
    'experiment_id',
    'fitted_slope',
    'bound_slope',
    'constant_ratio_max',
    'hypotheses',
    'assertions',
    'message',
]


class SummaryRow(BaseModel):
    experiment_id: str
    fitted_slope: Optional[float]
    bound_slope: Optional[float]
    constant_ratio_max: Optional[float]
    hypotheses: str = 'fail'
    assertions: str = 'fail'
    message: str = ''

    @classmethod
    def from_report(cls, report, assertions, message=''):
        return cls(
            experiment_id=report.experiment_id,
            fitted_slope=report.fitted_slope,
            bound_slope=report.bound_slope,
            constant_ratio_max=report.constant_ratio_max,
            hypotheses='pass' if report.hypotheses_ok else 'fail',
            assertions=assertions,
            message=message,
        )


def experiment_table(report):
    return pd.DataFrame(
        [
            {
                'n': row.n,
                'deviation': row.deviation,
                'bound_value': row.bound_value,
                'ratio': row.ratio,
                'epsilon_used': row.epsilon_used,
            }
            for row in report.rows
        ],
        columns=EXPERIMENT_COLUMNS,
    )


def _write_csv(table, path):
    table.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep='', lineterminator='\n')
    return path


def write_experiment_csv(report, output_dir):
    """`<experiment id>.csv` with one row per `n`."""
    return _write_csv(
        experiment_table(report),
        os.path.join(output_dir, f'{report.experiment_id}.csv'),
    )


def _log_series(ns, values):
    return np.array(
        [
            (math.log10(n), math.log10(value))
            for n, value in zip(ns, values)
            if n > 0 and value > 0 and math.isfinite(value)
        ],
    ).reshape(-1, 2)


def write_plot_data(report, output_dir):
    """
    Two-column `log10(n) log10(value)` series for the deviation and the bound,
    written as `<experiment id>.deviation.dat` and `<experiment id>.bound.dat`.
    """
    ns = [row.n for row in report.rows]
    paths = []
    for name, values in (
        ('deviation', [row.deviation for row in report.rows]),
        ('bound', [row.bound_value for row in report.rows]),
    ):
        path = os.path.join(output_dir, f'{report.experiment_id}.{name}.dat')
        np.savetxt(
            path,
            _log_series(ns, values),
            fmt=FLOAT_FORMAT,
            header=f'{report.experiment_id} {name}: log10(n) log10({name})',
        )
        paths.append(path)
    return paths


def write_summary_csv(rows, output_dir):
    """`summary.csv` with one row per experiment, in configuration order."""
    return _write_csv(
        pd.DataFrame([row.dict() for row in rows], columns=SUMMARY_COLUMNS),
        os.path.join(output_dir, 'summary.csv'),
    )
