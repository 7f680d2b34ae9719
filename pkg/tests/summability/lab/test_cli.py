import logging
import os

import pandas as pd
import pytest
import yaml

from summability.lab.cli import assertion_failures, geometric_n_values, main
from summability.lab.config import Assertions
from summability.lab.enums import ExitCode
from summability.lab.exceptions import ConfigurationError, EvaluationError
from summability.lab.harness import DeviationReport, run_experiment


@pytest.fixture
def config_file(tmp_path, config_data):
    def _config_file(*args, **kwargs):
        path = tmp_path / 'lab.yaml'
        path.write_text(yaml.safe_dump(config_data(*args, **kwargs)))
        return str(path)
    return _config_file


def _summary(output_dir):
    return pd.read_csv(os.path.join(output_dir, 'summary.csv'), keep_default_na=False)


def test_run_writes_artifacts(config_file, experiment_data, tmp_path, capsys):
    path = config_file(
        experiments=[experiment_data(assertions={'slope_min': -1.1, 'slope_max': -0.8})],
    )
    output_dir = tmp_path / 'output'

    assert main(['run', path]) == ExitCode.PASS

    assert sorted(os.listdir(output_dir)) == [
        'cesaro-cos-t1.bound.dat',
        'cesaro-cos-t1.csv',
        'cesaro-cos-t1.deviation.dat',
        'summary.csv',
    ]
    summary = _summary(output_dir)
    assert summary['assertions'].tolist() == ['pass']
    assert summary['hypotheses'].tolist() == ['pass']
    assert 'PASS  cesaro-cos-t1' in capsys.readouterr().out


def test_run_overrides(config_file, tmp_path):
    other = tmp_path / 'other'

    exit_code = main(['run', config_file(), '--output-dir', str(other), '--workers', '3'])

    assert exit_code == ExitCode.PASS
    assert os.path.isfile(other / 'summary.csv')
    assert not os.path.exists(tmp_path / 'output')


def test_run_without_experiments(config_file, tmp_path):
    assert main(['run', config_file(experiments=[])]) == ExitCode.PASS

    with open(tmp_path / 'output' / 'summary.csv') as stream:
        assert stream.readline().startswith('experiment_id,fitted_slope')


def test_run_keeps_configuration_order(config_file, experiment_data, tmp_path):
    ids = ['c', 'a', 'b']
    path = config_file(
        experiments=[experiment_data(id=id_) for id_ in ids],
        workers=3,
    )

    assert main(['run', path]) == ExitCode.PASS
    assert _summary(tmp_path / 'output')['experiment_id'].tolist() == ids


def test_run_unknown_id(config_file, experiment_data, tmp_path, capsys):
    path = config_file(experiments=[experiment_data(matrix={'id': 'nope'})])

    assert main(['run', path]) == ExitCode.CONFIGURATION_ERROR

    err = capsys.readouterr().err
    assert 'Configuration error' in err
    assert 'cesaro-cos-t1: LAB-005: Unknown id *nope*.' in err
    assert not os.path.exists(tmp_path / 'output')


def test_run_missing_model(config_file, experiment_data, capsys):
    path = config_file(experiments=[experiment_data(model=None)])

    assert main(['run', path]) == ExitCode.CONFIGURATION_ERROR
    assert 'Theorem T1 needs a modulus model' in capsys.readouterr().err


def test_run_invalid_configuration(config_file, experiment_data, capsys):
    path = config_file(experiments=[experiment_data(r=0)])

    assert main(['run', path]) == ExitCode.CONFIGURATION_ERROR
    assert 'experiments.0.r' in capsys.readouterr().err


def test_run_assertion_failure(config_file, experiment_data, tmp_path):
    path = config_file(
        experiments=[experiment_data(assertions={'slope_max': -1.5, 'ratio_max': 1e-6})],
    )

    assert main(['run', path]) == ExitCode.ASSERTION_FAILURE

    summary = _summary(tmp_path / 'output')
    assert summary['assertions'].tolist() == ['fail']
    message = summary['message'][0]
    assert 'above -1.5' in message
    assert 'constant ratio max' in message
    assert os.path.isfile(tmp_path / 'output' / 'cesaro-cos-t1.csv')


def test_run_experiment_error(config_file, experiment_data, tmp_path, mocker):
    mocker.patch(
        'summability.lab.cli.run_experiment',
        side_effect=EvaluationError('boom'),
    )
    path = config_file(experiments=[experiment_data(), experiment_data(id='second')])

    assert main(['run', path]) == ExitCode.ASSERTION_FAILURE

    summary = _summary(tmp_path / 'output')
    assert summary['assertions'].tolist() == ['error', 'error']
    assert summary['message'].tolist() == ['LAB-002: boom', 'LAB-002: boom']
    assert sorted(os.listdir(tmp_path / 'output')) == ['summary.csv']


def test_run_keeps_going_after_unexpected_errors(
    config_file,
    experiment_data,
    tmp_path,
    mocker,
    caplog,
):
    def run_or_fail(experiment, settings=None):
        if experiment.spec.id == 'second':
            raise ValueError('deviation is nan')
        return run_experiment(experiment, settings=settings)

    mocker.patch('summability.lab.cli.run_experiment', side_effect=run_or_fail)
    path = config_file(experiments=[experiment_data(), experiment_data(id='second')])

    with caplog.at_level(logging.ERROR, logger='summability.lab.cli'):
        assert main(['run', path]) == ExitCode.ASSERTION_FAILURE

    summary = _summary(tmp_path / 'output')
    assert summary['assertions'].tolist() == ['pass', 'error']
    assert summary['message'].tolist() == ['', 'ValueError: deviation is nan']
    assert 'cesaro-cos-t1.csv' in os.listdir(tmp_path / 'output')
    errors = [record for record in caplog.records if record.levelno == logging.ERROR]
    assert 'second failed unexpectedly' in errors[0].message
    assert errors[0].exc_info is not None


def test_run_needs_config_or_demo():
    with pytest.raises(SystemExit) as cv:
        main(['run'])

    assert cv.value.code == 2


@pytest.mark.slow
def test_demo_is_deterministic(tmp_path):
    first, second = tmp_path / 'first', tmp_path / 'second'

    first_code = main(['run', '--demo', '--output-dir', str(first)])
    second_code = main(['run', '--demo', '--output-dir', str(second), '--workers', '1'])

    assert first_code == second_code
    assert sorted(os.listdir(first)) == sorted(os.listdir(second))
    for name in os.listdir(first):
        with open(first / name, 'rb') as left, open(second / name, 'rb') as right:
            assert left.read() == right.read(), name
    summary = _summary(first)
    assert summary['experiment_id'].tolist() == [
        'cesaro-cos-t1',
        'euler-weierstrass-t1-truncated',
        'riesz-abs-sine-tb',
    ]
    assert summary['assertions'][0] == 'pass'


def test_check_cesaro(capsys):
    assert main(['check', 'cesaro', '--r', '2', '--n-max', '256']) == ExitCode.PASS

    out = capsys.readouterr().out
    assert out.startswith('Matrix cesaro, r=2, c=2.0')
    assert '(113) ok' in out
    assert '(114) ok' in out
    assert '(200) ok' in out


def test_check_identity_fails_200(capsys):
    assert main(['check', 'identity']) == ExitCode.ASSERTION_FAILURE

    out = capsys.readouterr().out
    assert '(200) FAILED' in out
    assert 'not refinement-stable' in out


def test_check_lower_triangular(capsys):
    assert main(['check', 'cesaro', '--lower-triangular', '--n-max', '128']) == ExitCode.PASS

    assert 'holds for lower triangular matrices' in capsys.readouterr().out


def test_check_with_params(capsys):
    main(['check', 'riesz', '--param', 'exponent=1', '--n-max', '64'])

    assert 'Matrix riesz exponent=1,' in capsys.readouterr().out


def test_check_unknown_matrix(capsys):
    assert main(['check', 'nope']) == ExitCode.CONFIGURATION_ERROR

    assert 'Unknown id *nope*' in capsys.readouterr().err


def test_check_invalid_range(capsys):
    assert main(['check', 'cesaro', '--n-min', '64', '--n-max', '8']) == (
        ExitCode.CONFIGURATION_ERROR
    )


def test_check_invalid_c():
    assert main(['check', 'cesaro', '--c', '1']) == ExitCode.ASSERTION_FAILURE


@pytest.mark.parametrize('param', ('exponent', '=1'))
def test_check_malformed_param(param):
    with pytest.raises(SystemExit) as cv:
        main(['check', 'riesz', '--param', param])

    assert cv.value.code == 2


@pytest.mark.parametrize(
    ('n_min', 'n_max', 'expected'),
    (
        (8, 100, [8, 16, 32, 64]),
        (8, 8, [8]),
        (3, 24, [3, 6, 12, 24]),
    ),
)
def test_geometric_n_values(n_min, n_max, expected):
    assert geometric_n_values(n_min, n_max) == expected


@pytest.mark.parametrize(('n_min', 'n_max'), ((0, 8), (16, 8)))
def test_geometric_n_values_invalid(n_min, n_max):
    with pytest.raises(ConfigurationError):
        geometric_n_values(n_min, n_max)


def _report(slope=-1.0, ratio=0.5):
    return DeviationReport(
        experiment_id='x',
        theorem='T1',
        variant='full_conjugate',
        fitted_slope=slope,
        bound_slope=None,
        constant_ratio_max=ratio,
    )


def test_assertion_failures_without_assertions():
    assert assertion_failures(_report(), None) == []


def test_assertion_failures_pass():
    assertions = Assertions(slope_min=-1.1, slope_max=-0.9, ratio_max=1.0, ratio_growth_max=1.25)

    assert assertion_failures(_report(), assertions, growth=1.0) == []


def test_assertion_failures_missing_slope():
    assertions = Assertions(slope_min=-1.1, slope_max=-0.9)

    failures = assertion_failures(_report(slope=None), assertions)

    assert failures == ['fitted slope None below -1.1', 'fitted slope None above -0.9']


def test_assertion_failures_ratio_and_growth():
    assertions = Assertions(ratio_max=0.25, ratio_growth_max=1.25)

    failures = assertion_failures(_report(), assertions, growth=2.0)

    assert failures == [
        'constant ratio max 0.5 above 0.25',
        'ratio growth 2.0 above 1.25',
    ]
