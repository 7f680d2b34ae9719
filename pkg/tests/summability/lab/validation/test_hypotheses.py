import logging

import pytest

from summability.lab.function_space import make_cosine, make_weierstrass, ModulusCurve, NormSpace
from summability.lab.matrices import make_cesaro, make_point_mass
from summability.lab.modulus_models import make_power_modulus
from summability.lab.validation.hypotheses import (
    get_hypotheses,
    run_hypotheses,
    validate_113,
    validate_114,
    validate_200,
    validate_matrix,
    validate_measured_202,
    validate_membership,
    validate_model_202,
    validate_modulus_model,
)

MODEL = [validate_modulus_model, validate_membership]


@pytest.fixture
def context():
    return {
        'theorem': 'T1',
        'variant': 'full_conjugate',
        'refinement': 'none',
        'matrix': make_cesaro(),
        'model': make_power_modulus(1.0),
        'curve': ModulusCurve(NormSpace(grid_size=128), make_cosine()),
        'n_values': [8, 16, 32, 64],
        'r': 1,
        'c': 2.0,
        'tail_tolerance': 1e-12,
        'quadrature_tolerance': 1e-8,
    }


@pytest.mark.parametrize(
    ('theorem', 'variant', 'refinement', 'expected'),
    (
        ('T1', 'full_conjugate', 'none', MODEL),
        ('T1', 'truncated_pi_over_rn', '113', [*MODEL, validate_113]),
        ('T2', 'full_conjugate', 'none', [*MODEL, validate_113]),
        ('T3', 'full_conjugate', 'none', [*MODEL, validate_model_202]),
        ('T3', 'truncated_pi_over_rn', 'none', [*MODEL, validate_114]),
        ('T4', 'full_conjugate', 'none', [validate_measured_202]),
        ('T4', 'truncated_pi_over_rn', 'none', [validate_114]),
        ('C1', 'full_conjugate', 'none', [*MODEL, validate_200, validate_measured_202]),
        ('C1', 'truncated_pi_over_rn', 'none', [*MODEL, validate_200, validate_114]),
        ('TA', 'full_conjugate', 'none', MODEL),
        ('TA', 'full_conjugate', '113', [*MODEL, validate_113]),
        ('TA', 'full_conjugate', '114', [*MODEL, validate_114]),
        ('TB', 'full_conjugate', 'none', [validate_114]),
    ),
)
def test_get_hypotheses(theorem, variant, refinement, expected):
    assert get_hypotheses(theorem, variant, refinement) == [validate_matrix, *expected]


def test_run_hypotheses(context):
    reports = run_hypotheses(context)

    assert [report.condition for report in reports] == [
        'matrix',
        'modulus-type',
        '111',
        '112',
        'membership',
    ]
    assert all(report.ok for report in reports)


def test_lower_triangular_conditions_are_remarks(context):
    context.update(theorem='TA', refinement='114')

    reports = run_hypotheses(context)

    assert reports[-1].condition == '114'
    assert reports[-1].values == []
    assert reports[-1].items[0].level == 'INFO'


def test_conditions_are_evaluated_for_general_matrices(context):
    context.update(theorem='TA', refinement='114', matrix=make_point_mass(exponent=2))

    report = validate_114(context)[0]

    assert len(report.values) == 4
    assert not report.ok


def test_validate_200(context):
    context['r'] = 2

    report = validate_200(context)[0]

    assert report.condition == '200'
    assert report.ok


def test_validate_model_202(context):
    assert validate_model_202(context)[0].ok


def test_validate_measured_202_logs_warning(context, mocker, caplog):
    curve = mocker.MagicMock()
    curve.as_model.return_value = make_power_modulus(0.5)
    context['curve'] = curve

    with caplog.at_level(logging.WARNING, logger='summability.lab.validation.hypotheses'):
        report = validate_measured_202(context)[0]

    assert report.ok
    assert 'sampled conjugate modulus curve' in caplog.records[0].message
    curve.as_model.assert_called_once_with()


def test_validate_membership(context):
    report = validate_membership(context)[0]

    assert report.condition == 'membership'
    assert report.ok
    assert len(report.values) == len(context['n_values'])


def test_validate_membership_rejects_rougher_functions(context):
    context.update(
        curve=ModulusCurve(NormSpace(kind='C', grid_size=512), make_weierstrass(alpha=0.25)),
        n_values=[8, 16, 32, 64, 128, 256],
    )

    report = validate_membership(context)[0]

    assert not report.ok
    assert 'not refinement-stable' in report.items[-1].message
