import math
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, validator

from summability.lab import function_space, matrices, modulus_models
from summability.lab.constants import (
    DEFAULT_N_VALUES,
    FUNCTION_FAMILY_ATTR_NAME,
    MATRIX_FAMILY_ATTR_NAME,
    MIN_FIT_POINTS,
    MODULUS_FAMILY_ATTR_NAME,
    QUADRATURE_TOLERANCE,
    TAIL_TOLERANCE,
)
from summability.lab.decorators import resolve
from summability.lab.enums import Refinement, Theorem, Variant
from summability.lab.exceptions import (
    ConfigurationError,
    DomainError,
    InsufficientDataError,
)
from summability.lab.fourier import (
    conj_partial_sum,
    conjugate_truncated_series,
    fourier_coeffs,
    FourierData,
    partial_sum,
)
from summability.lab.function_space import ModulusCurve, NormSpace, psi
from summability.lab.kernels import conj_dirichlet_gen
from summability.lab.logging import ExperimentLogger, get_logger
from summability.lab.validation.helpers import quad
from summability.lab.validation.hypotheses import run_hypotheses
from summability.lab.validation.models import FitItem, FitReport


THEOREMS = (
    Theorem.T1, Theorem.T2, Theorem.T3, Theorem.T4, Theorem.C1, Theorem.TA, Theorem.TB,
)
VARIANTS = (Variant.FULL_CONJUGATE, Variant.TRUNCATED_PI_OVER_RN, Variant.TRUNCATED_ANR_OVER_R)
REFINEMENTS = (Refinement.NONE, Refinement.CONDITION_113, Refinement.CONDITION_114)
MODEL_THEOREMS = (Theorem.T1, Theorem.T2, Theorem.T3, Theorem.C1, Theorem.TA)
CLASSICAL_THEOREMS = (Theorem.TA, Theorem.TB)
PI_OVER_RN_THEOREMS = (Theorem.T1, Theorem.T3, Theorem.T4, Theorem.C1)


class FamilyRef(BaseModel):
    id: str
    params: Dict = {}


class ExperimentSpec(BaseModel):
    """
    One experiment: a test function, a summability matrix, an optional
    modulus model and the estimate whose bound is compared with the
    measured deviation.
    """
    id: str = 'experiment'
    function: FamilyRef
    matrix: FamilyRef
    model: Optional[FamilyRef]
    space: NormSpace = Field(default_factory=NormSpace)
    r: int = 1
    n_values: List[int] = list(DEFAULT_N_VALUES)
    theorem: str = Theorem.T1
    variant: str = Variant.FULL_CONJUGATE
    refinement: str = Refinement.NONE
    c: float = 2.0

    @validator('r')
    def _check_r(cls, value):
        if value < 1:
            raise ValueError('r must be a positive integer')
        return value

    @validator('n_values')
    def _check_n_values(cls, value):
        if not value or value[0] < 0 or any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError('n_values must be nonnegative and strictly increasing')
        return value

    @validator('theorem')
    def _check_theorem(cls, value):
        if value not in THEOREMS:
            raise ValueError(f'theorem must be one of {", ".join(THEOREMS)}')
        return value

    @validator('variant')
    def _check_variant(cls, value, values):
        if value not in VARIANTS:
            raise ValueError(f'variant must be one of {", ".join(VARIANTS)}')
        theorem = values.get('theorem')
        if theorem == Theorem.T2 and value == Variant.TRUNCATED_PI_OVER_RN:
            raise ValueError('T2 truncates at A_{n,r}/r, use truncated_Anr_over_r')
        if theorem in PI_OVER_RN_THEOREMS and value == Variant.TRUNCATED_ANR_OVER_R:
            raise ValueError(f'{theorem} truncates at π/(r(n+1)), use truncated_pi_over_rn')
        return value

    @validator('refinement')
    def _check_refinement(cls, value, values):
        if value not in REFINEMENTS:
            raise ValueError(f'refinement must be one of {", ".join(REFINEMENTS)}')
        theorem = values.get('theorem')
        if value == Refinement.CONDITION_113 and theorem not in (Theorem.T1, Theorem.TA):
            raise ValueError('refinement 113 applies to T1 and TA only')
        if value == Refinement.CONDITION_114 and theorem != Theorem.TA:
            raise ValueError('refinement 114 applies to TA only')
        return value

    @validator('c')
    def _check_c(cls, value):
        if value <= 1:
            raise ValueError('c must exceed 1')
        return value

    @property
    def conjugate(self):
        return self.theorem not in CLASSICAL_THEOREMS

    def build_function(self):
        return resolve(
            function_space, FUNCTION_FAMILY_ATTR_NAME, self.function.id, self.function.params,
        )

    def build_matrix(self):
        return resolve(matrices, MATRIX_FAMILY_ATTR_NAME, self.matrix.id, self.matrix.params)

    def build_model(self):
        if self.model is None:
            return None
        return resolve(
            modulus_models, MODULUS_FAMILY_ATTR_NAME, self.model.id, self.model.params,
        )


class Deviation(BaseModel):
    deviation: float
    epsilon_used: Optional[float]
    truncation_error: float = 0.0


class DeviationRow(BaseModel):
    n: int
    deviation: float = Field(ge=0)
    bound_value: float = Field(ge=0)
    ratio: float
    epsilon_used: Optional[float]
    truncation_error: float = 0.0


class RateFit(BaseModel):
    fitted_slope: float
    bound_slope: Optional[float]
    constant_ratio_max: float


class DeviationReport(BaseModel):
    experiment_id: str
    theorem: str
    variant: str
    rows: List[DeviationRow] = []
    fitted_slope: Optional[float]
    bound_slope: Optional[float]
    constant_ratio_max: float = 0.0
    hypotheses: List[FitReport] = []
    items: List[FitItem] = []

    @property
    def hypotheses_ok(self):
        return all(report.ok for report in self.hypotheses)


def band_limited(f, grid_size):
    """
    Fourier data of `f` cut at the highest frequency a `grid_size`-point
    grid resolves alias-free; exact coefficients are used when attached.
    """
    limit = grid_size // 4
    if f.coeff_source is not None:
        degree = len(f.coeff_source[0]) - 1
        if degree > limit:
            raise DomainError(
                f'{f.label} has degree {degree}, above the alias-free limit {limit} '
                f'of a {grid_size}-point grid.',
            )
        return fourier_coeffs(f, degree)
    return fourier_coeffs(f, limit, grid_size=grid_size)


def _weighted(fd, weights):
    a, b = fd.arrays()
    return FourierData(
        a0=float(weights[0] * fd.a0),
        a=tuple(weights * a),
        b=tuple(weights * b),
        max_freq=fd.max_freq,
    )


def matrix_mean(A, fd, n, x, conjugate=False):
    """
    `T_{n,A}f(x) = Σ_k a_{n,k} S_k f(x)` or, with `conjugate`, the mean of the
    conjugate partial sums, evaluated through the tail weights
    `w_ν = Σ_{k>=ν} a_{n,k}` so that `T̃_{n,A}f = Σ_ν w_ν (a_ν sin νx - b_ν cos νx)`.
    """
    scaled = _weighted(fd, A.tail_weights(n, fd.max_freq + 1))
    if conjugate:
        return conj_partial_sum(scaled, fd.max_freq, x)
    return partial_sum(scaled, fd.max_freq, x)


def _tail_truncation(A, fd, n):
    a, b = fd.arrays()
    missing = abs(1.0 - math.fsum(A.row(n)))
    return missing * (abs(fd.a0) / 2 + math.fsum(np.abs(a[1:])) + math.fsum(np.abs(b[1:])))


def _positive_sum(values):
    return math.fsum(values) if len(values) else 0.0


class Experiment:
    """
    An `ExperimentSpec` with its function, matrix, model and Fourier data
    resolved once; the matrix row cache and the modulus curve live here.
    """

    def __init__(self, spec):
        self.spec = spec
        self.function = spec.build_function()
        self.matrix = spec.build_matrix()
        self.model = spec.build_model()
        self.space = spec.space
        self.grid = self.space.grid()
        self.fd = band_limited(self.function, self.space.grid_size)
        self._curve = None

    @property
    def curve(self):
        if self._curve is None:
            kind = 'conjugate' if self.spec.conjugate else 'classical'
            self._curve = ModulusCurve(self.space, self.function, kind=kind)
        return self._curve

    def epsilon(self, n):
        spec = self.spec
        if not spec.conjugate or spec.variant == Variant.FULL_CONJUGATE:
            return None
        if spec.variant == Variant.TRUNCATED_PI_OVER_RN:
            return math.pi / (spec.r * (n + 1))
        return min(math.pi, matrices.a_nr(self.matrix, n, spec.r) / spec.r)

    def reference(self, n):
        epsilon = self.epsilon(n)
        if not self.spec.conjugate:
            return partial_sum(self.fd, self.fd.max_freq, self.grid), None
        if epsilon is None:
            return conj_partial_sum(self.fd, self.fd.max_freq, self.grid), None
        return conjugate_truncated_series(self.fd, self.grid, epsilon), epsilon

    def deviation(self, n):
        values, epsilon = self.reference(n)
        mean = matrix_mean(self.matrix, self.fd, n, self.grid, conjugate=self.spec.conjugate)
        return Deviation(
            deviation=self.space.measure(mean - values),
            epsilon_used=epsilon,
            truncation_error=_tail_truncation(self.matrix, self.fd, n),
        )

    def _require_model(self, model):
        model = model if model is not None else self.model
        if model is None:
            raise ConfigurationError(
                f'Theorem {self.spec.theorem} needs a modulus model.',
                errors=[f'experiment: {self.spec.id}'],
            )
        return model

    def _modulus_sums(self, n, modulus):
        row = self.matrix.row(n)
        mu = np.arange(1, n + 1)
        readings = modulus.many(math.pi / mu)
        prefix = np.cumsum(row)
        heads = prefix[np.minimum(mu + 1, row.size - 1)]
        differences = matrices.shift_differences(row, self.spec.r)
        tails = np.append(np.cumsum(differences[::-1])[::-1], 0.0)
        tails = tails[np.minimum(mu, tails.size - 1)]
        return (
            modulus(math.pi / (n + 1))
            + _positive_sum(readings / mu * heads)
            + _positive_sum(readings * tails)
        )

    def bound_value(self, n, model=None):
        """The raw envelope of the selected estimate at `n`, without its O-constant."""
        theorem, refinement = self.spec.theorem, self.spec.refinement
        if theorem in (Theorem.T4, Theorem.TB):
            return self._modulus_sums(n, self.curve)
        model = self._require_model(model)
        step = math.pi / (n + 1)
        h_step = float(model.H(step))
        if theorem == Theorem.C1:
            row = self.matrix.row(n)
            k = np.arange(1, min(n, row.size - 1) + 1)
            return h_step / (n + 1) + _positive_sum(row[k] * model.H(math.pi / (k + 1)) / (k + 1))
        a = matrices.a_nr(self.matrix, n, self.spec.r)
        if theorem == Theorem.T2:
            return float(model.H(a)) * a if a > 0 else 0.0
        if theorem == Theorem.T3 or refinement == Refinement.CONDITION_114:
            return float(model.omega(step)) + h_step * a
        if refinement == Refinement.CONDITION_113:
            return h_step * a
        return h_step * (step + a)


def _prepared(spec):
    return spec if isinstance(spec, Experiment) else Experiment(spec)


def deviation(spec, n):
    """
    Deviation of the matrix mean from its reference at `n`; `spec` is an
    `ExperimentSpec` or an already prepared `Experiment`.
    """
    return _prepared(spec).deviation(n)


def bound_value(spec, n, model=None):
    return _prepared(spec).bound_value(n, model=model)


def _ratio(deviation_value, bound):
    if bound > 0:
        return deviation_value / bound
    return 0.0 if deviation_value == 0 else math.inf


def _slope(ns, values):
    slope, _ = np.polyfit(np.log(ns), np.log(values), 1)
    return float(slope)


def fit_rate(rows):
    """
    Least-squares slope of `log(deviation)` against `log(n)` over the rows with
    positive deviation, the same slope for the bound, and the largest
    deviation to bound ratio.
    """
    usable = [row for row in rows if row.deviation > 0]
    if len(usable) < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f'{len(usable)} rows with positive deviation, at least {MIN_FIT_POINTS} needed.',
        )
    bounded = [row for row in rows if row.bound_value > 0]
    return RateFit(
        fitted_slope=_slope([row.n for row in usable], [row.deviation for row in usable]),
        bound_slope=(
            _slope([row.n for row in bounded], [row.bound_value for row in bounded])
            if len(bounded) >= MIN_FIT_POINTS else None
        ),
        constant_ratio_max=max(row.ratio for row in rows),
    )


def conjugate_mean_kernel_form(A, f, n, x):
    """
    `T̃_{n,A}f(x) - f̃(x) = (1/π)∫_0^π ψ_x(t) Σ_k a_{n,k} D̃°_{k,1}(t) dt`,
    integrated by adaptive quadrature; the integrand is bounded at `t = 0`.
    """
    row = A.row(n)
    k = np.arange(row.size)

    def integrand(t):
        return float(psi(f, x, t)) * float(row @ conj_dirichlet_gen(k, 1, t, guard=0.0))

    value, _ = quad(integrand, 0.0, math.pi)
    return value / math.pi


def hypothesis_checks(spec, model=None, curve=None, settings=None):
    """
    Runs the matrix axioms and the condition checks the selected estimate
    depends on, `f ∈ X_ω` included; `settings` supplies the tail and
    quadrature tolerances.
    """
    experiment = _prepared(spec)
    spec = experiment.spec
    context = {
        'theorem': spec.theorem,
        'variant': spec.variant,
        'refinement': spec.refinement,
        'matrix': experiment.matrix,
        'model': model if model is not None else experiment.model,
        'n_values': spec.n_values,
        'r': spec.r,
        'c': spec.c,
        'tail_tolerance': settings.tolerances.tail if settings else TAIL_TOLERANCE,
        'quadrature_tolerance': (
            settings.tolerances.quadrature if settings else QUADRATURE_TOLERANCE
        ),
    }
    if context['model'] is None and spec.theorem in MODEL_THEOREMS:
        raise ConfigurationError(f'Theorem {spec.theorem} needs a modulus model.')
    if curve is not None:
        context['curve'] = curve
    elif spec.theorem != Theorem.TB:
        context['curve'] = experiment.curve
    return run_hypotheses(context)


def run_experiment(spec, settings=None, hypotheses=True):
    """
    Measures the deviation and the bound at every `n`, fits the rates and
    collects the hypothesis checks into a `DeviationReport`.
    """
    experiment = _prepared(spec)
    spec = experiment.spec
    logger = get_logger(
        settings,
        {'experiment': spec.id, 'theorem': spec.theorem, 'matrix': spec.matrix.id},
    )
    ExperimentLogger(logger).log_experiment(spec)

    rows = []
    for n in spec.n_values:
        measured = experiment.deviation(n)
        bound = experiment.bound_value(n)
        rows.append(
            DeviationRow(
                n=n,
                deviation=measured.deviation,
                bound_value=bound,
                ratio=_ratio(measured.deviation, bound),
                epsilon_used=measured.epsilon_used,
                truncation_error=measured.truncation_error,
            ),
        )

    items = []
    try:
        fit = fit_rate(rows)
        fitted_slope, bound_slope = fit.fitted_slope, fit.bound_slope
    except InsufficientDataError as err:
        items.append(FitItem(level='WARNING', message=str(err)))
        fitted_slope, bound_slope = None, None

    report = DeviationReport(
        experiment_id=spec.id,
        theorem=spec.theorem,
        variant=spec.variant,
        rows=rows,
        fitted_slope=fitted_slope,
        bound_slope=bound_slope,
        constant_ratio_max=max((row.ratio for row in rows), default=0.0),
        hypotheses=hypothesis_checks(experiment, settings=settings) if hypotheses else [],
        items=items,
    )
    ExperimentLogger(logger).log_report(report)
    return report


def extended_n_values(n_values, factor):
    """`n_values` continued geometrically up to `factor * max(n_values)`."""
    n_values = list(n_values)
    step = round(n_values[-1] / n_values[-2]) if len(n_values) > 1 else 2
    step = max(2, step)
    limit = n_values[-1] * factor
    while n_values[-1] * step <= limit:
        n_values.append(n_values[-1] * step)
    return n_values


def ratio_growth(spec, settings=None, factor=4):
    """
    Growth of `constant_ratio_max` when `n_values` is extended `factor`-fold;
    values at most `1.25` mean the bound dominates the deviation stably.
    """
    experiment = _prepared(spec)
    original = experiment.spec
    experiment.spec = original.copy(
        update={'n_values': extended_n_values(original.n_values, factor)},
    )
    try:
        report = run_experiment(experiment, settings=settings, hypotheses=False)
    finally:
        experiment.spec = original
    base = max(row.ratio for row in report.rows if row.n in original.n_values)
    if base == 0:
        return 0.0 if report.constant_ratio_max == 0 else math.inf
    return report.constant_ratio_max / base
