import logging
import math

from summability.lab.enums import Condition, Refinement, Theorem, Variant
from summability.lab.matrices import (
    check_113,
    check_114,
    check_200,
    check_matrix,
    remark_report,
)
from summability.lab.modulus_models import (
    check_111,
    check_112,
    check_202,
    check_membership,
    check_modulus_type,
)


logger = logging.getLogger(__name__)


def validate_matrix(context):
    return [
        check_matrix(context['matrix'], context['n_values'], tolerance=context['tail_tolerance']),
    ]


def validate_modulus_model(context):
    model = context['model']
    tolerance = context['quadrature_tolerance']
    return [
        check_modulus_type(model),
        check_111(model, tolerance=tolerance),
        check_112(model, tolerance=tolerance),
    ]


def validate_membership(context):
    grid = [math.pi / (n + 1) for n in context['n_values']]
    return [check_membership(context['curve'], context['model'], grid=grid)]


def validate_model_202(context):
    return [check_202(context['model'], tolerance=context['quadrature_tolerance'])]


def validate_measured_202(context):
    logger.warning(
        'Condition (202) is checked on the sampled conjugate modulus curve, '
        'an approximation of the hypothesis on the modulus itself.',
    )
    return [
        check_202(context['curve'].as_model(), tolerance=context['quadrature_tolerance']),
    ]


def validate_113(context):
    matrix = context['matrix']
    if matrix.lower_triangular:
        return [remark_report(Condition.C113, matrix)]
    return [check_113(matrix, context['n_values'], context['r'])]


def validate_114(context):
    matrix = context['matrix']
    if matrix.lower_triangular:
        return [remark_report(Condition.C114, matrix)]
    return [check_114(matrix, context['n_values'])]


def validate_200(context):
    return [check_200(context['matrix'], context['n_values'], context['r'], context['c'])]


def _estimate_hypotheses(theorem, variant, refinement):
    full = variant == Variant.FULL_CONJUGATE
    model = [validate_modulus_model, validate_membership]
    if theorem == Theorem.T1:
        extra = [validate_113] if refinement == Refinement.CONDITION_113 else []
        return [*model, *extra]
    if theorem == Theorem.T2:
        return [*model, validate_113]
    if theorem == Theorem.T3:
        return [*model, validate_model_202 if full else validate_114]
    if theorem == Theorem.T4:
        return [validate_measured_202 if full else validate_114]
    if theorem == Theorem.C1:
        return [*model, validate_200, validate_measured_202 if full else validate_114]
    if theorem == Theorem.TA:
        extra = {
            Refinement.CONDITION_113: [validate_113],
            Refinement.CONDITION_114: [validate_114],
        }.get(refinement, [])
        return [*model, *extra]
    return [validate_114]


def get_hypotheses(theorem, variant, refinement):
    """
    The checks run for the selected estimate, in order: the matrix axioms
    first, then the conditions of the estimate. Estimates stated with a
    modulus model also check `f ∈ X_ω` on the scales `π/(n+1)`. The first
    estimate of Theorems 3, 4 and Corollary 1 (`full_conjugate`) requires
    (202), the second one requires (114).
    """
    return [validate_matrix, *_estimate_hypotheses(theorem, variant, refinement)]


def run_hypotheses(context):
    reports = []
    for validator in get_hypotheses(
        context['theorem'],
        context['variant'],
        context['refinement'],
    ):
        reports.extend(validator(context))
    return reports
