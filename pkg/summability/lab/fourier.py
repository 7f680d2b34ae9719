import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, root_validator, validator

from summability.lab.constants import (
    CONVERGENCE_TOLERANCE,
    DEFAULT_GRID_SIZE,
    EPSILON_STEPS,
    QUADRATURE_TOLERANCE,
)
from summability.lab.exceptions import ConvergenceError, DomainError, EvaluationError
from summability.lab.function_space import psi
from summability.lab.kernels import conj_dirichlet
from summability.lab.validation.helpers import quad


class FourierData(BaseModel):
    """
    Fourier coefficients of a 2π-periodic function up to `max_freq`.

    `a` and `b` are indexed from `ν = 0` (`a[0] == a0`, `b[0] == 0`); every
    coefficient above `max_freq` is taken to be zero.
    """
    a0: float
    a: Tuple[float, ...]
    b: Tuple[float, ...]
    max_freq: int

    class Config:
        allow_mutation = False

    @validator('max_freq')
    def _check_max_freq(cls, value):
        if value < 0:
            raise ValueError('max_freq must be nonnegative')
        return value

    @root_validator(skip_on_failure=True)
    def _check_lengths(cls, values):
        size = values['max_freq'] + 1
        if len(values['a']) != size or len(values['b']) != size:
            raise ValueError(f'coefficient sequences must have max_freq + 1 = {size} entries')
        return values

    def arrays(self):
        return np.asarray(self.a, dtype=float), np.asarray(self.b, dtype=float)


class ConjugateEvaluation(BaseModel):
    x: float
    epsilon: float
    value: float
    quadrature_error_estimate: float

    @validator('epsilon')
    def _check_epsilon(cls, value):
        if not 0 < value <= math.pi:
            raise ValueError('epsilon must lie in (0, π]')
        return value

    @validator('quadrature_error_estimate')
    def _check_error(cls, value):
        if not math.isfinite(value) or value < 0:
            raise ValueError('the error estimate must be finite and nonnegative')
        return value


def _from_arrays(a, b):
    b = np.array(b, dtype=float)
    b[0] = 0.0
    return FourierData(
        a0=float(a[0]),
        a=tuple(float(value) for value in a),
        b=tuple(float(value) for value in b),
        max_freq=len(a) - 1,
    )


def _fit(values, size):
    values = np.asarray(values, dtype=float)[:size]
    return np.append(values, np.zeros(size - values.size))


def fourier_coeffs(f, max_freq, grid_size=DEFAULT_GRID_SIZE):
    """
    Fourier coefficients `a_ν, b_ν`, `ν <= max_freq`, of `f`.

    Exact coefficients attached to `f` are passed through; otherwise the
    integrals `(1/π)∫_Q f(t) cos νt dt` and `(1/π)∫_Q f(t) sin νt dt` are
    computed with the periodic trapezoidal rule on `grid_size` points through
    a real FFT of the samples, which is exact for trigonometric polynomials
    of degree below `grid_size - ν`.
    """
    if max_freq < 0:
        raise DomainError(f'max_freq must be nonnegative, got {max_freq}.')
    size = max_freq + 1
    if f.coeff_source is not None:
        a, b = f.coeff_source
        return _from_arrays(_fit(a, size), _fit(b, size))
    if max_freq > grid_size // 4:
        raise DomainError(
            f'max_freq {max_freq} exceeds the alias-free limit {grid_size // 4} '
            f'of a {grid_size}-point grid.',
        )
    x = -math.pi + 2 * math.pi * np.arange(grid_size) / grid_size
    values = f(x)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise EvaluationError(
            f'Non-finite value at grid point x={float(x[bad[0]])!r}.',
            point=float(x[bad[0]]),
        )
    spectrum = np.fft.rfft(values)[:size]
    # the grid starts at -π, which turns every harmonic ν into (-1)^ν
    spectrum = spectrum * (2.0 / grid_size) * (-1.0) ** np.arange(size)
    return _from_arrays(spectrum.real, -spectrum.imag)


def _harmonics(fd, k, x):
    k = min(int(k), fd.max_freq)
    if k < 0:
        raise DomainError(f'k must be nonnegative, got {k}.')
    a, b = fd.arrays()
    phase = np.multiply.outer(np.asarray(x, dtype=float), np.arange(1, k + 1))
    return a[1:k + 1], b[1:k + 1], np.cos(phase), np.sin(phase)


def _scalar_or_array(value):
    return float(value) if np.ndim(value) == 0 else value


def partial_sum(fd, k, x):
    """`S_k f(x) = a0/2 + Σ_{ν=1}^k (a_ν cos νx + b_ν sin νx)`."""
    a, b, cos, sin = _harmonics(fd, k, x)
    return _scalar_or_array(fd.a0 / 2 + cos @ a + sin @ b)


def conj_partial_sum(fd, k, x):
    """`S̃_k f(x) = Σ_{ν=1}^k (a_ν sin νx - b_ν cos νx)`."""
    a, b, cos, sin = _harmonics(fd, k, x)
    return _scalar_or_array(sin @ a - cos @ b)


def conj_partial_sum_kernel(f, k, x, grid_size=DEFAULT_GRID_SIZE):
    """
    Kernel form `S̃_k f(x) = -(1/π)∫_Q f(x + t) D̃_{k,1}(t) dt`, by the midpoint
    rule on `grid_size` points; the midpoints never meet the removable
    singularity at `t = 0`.
    """
    t = -math.pi + 2 * math.pi * (np.arange(grid_size) + 0.5) / grid_size
    kernel = conj_dirichlet(k, 1, t)
    x = np.asarray(x, dtype=float)
    values = f(np.add.outer(x, t)) @ kernel
    return _scalar_or_array(-2.0 / grid_size * values)


def conjugate_coeffs(fd):
    """
    Coefficients of the conjugate series: `(a_ν, b_ν) -> (-b_ν, a_ν)`, `a0 -> 0`.
    Applying the map twice negates every harmonic.
    """
    a, b = fd.arrays()
    return _from_arrays(np.append(0.0, -b[1:]), np.append(0.0, a[1:]))


def truncation_factors(epsilon, max_freq):
    """
    The multipliers `I_ν(ε) = (1/π)∫_ε^π sin νt cot(t/2) dt`, `ν = 0..max_freq`,
    so that `f̃(x, ε) = Σ_ν I_ν(ε) (a_ν sin νx - b_ν cos νx)` for band-limited `f`.

    Evaluated in closed form through
    `sin νt cot(t/2) = 1 + cos νt + 2 Σ_{0<j<ν} cos jt`.
    """
    if not 0 < epsilon <= math.pi:
        raise DomainError(f'epsilon must lie in (0, π], got {epsilon!r}.')
    nu = np.arange(1, max_freq + 1)
    tails = np.sin(nu * epsilon) / nu
    before = np.cumsum(tails) - tails
    factors = ((math.pi - epsilon) - tails - 2 * before) / math.pi
    return np.append(0.0, factors)


def conjugate_truncated_series(fd, x, epsilon):
    """`f̃(x, ε)` of the band-limited function described by `fd`."""
    factors = truncation_factors(epsilon, fd.max_freq)
    a, b = fd.arrays()
    scaled = FourierData(
        a0=0.0,
        a=tuple(factors * a),
        b=tuple(factors * b),
        max_freq=fd.max_freq,
    )
    return conj_partial_sum(scaled, fd.max_freq, x)


def conjugate_truncated(f, x, epsilon, tolerance=QUADRATURE_TOLERANCE):
    """
    `f̃(x, ε) = -(1/π)∫_ε^π ψ_x(t) (1/2) cot(t/2) dt` by adaptive quadrature;
    the integrand is smooth on `[ε, π]`.
    """
    if not 0 < epsilon <= math.pi:
        raise DomainError(f'epsilon must lie in (0, π], got {epsilon!r}.')
    x = float(x)
    if epsilon == math.pi:
        return ConjugateEvaluation(x=x, epsilon=epsilon, value=0.0, quadrature_error_estimate=0.0)

    def integrand(t):
        return float(psi(f, x, t)) / (2 * math.tan(t / 2))

    value, error = quad(integrand, epsilon, math.pi, tolerance=tolerance)
    return ConjugateEvaluation(
        x=x,
        epsilon=epsilon,
        value=-value / math.pi,
        quadrature_error_estimate=error / math.pi,
    )


def _epsilon_limit(f, x, steps, tolerance):
    values, first, second = [], [], []
    settled = 0
    for j in range(1, steps + 1):
        values.append(conjugate_truncated(f, x, math.pi * 2.0 ** -j).value)
        if len(values) >= 2:
            first.append(2 * values[-1] - values[-2])
        if len(first) >= 2:
            second.append((8 * first[-1] - first[-2]) / 7)
        if len(second) >= 2:
            settled = settled + 1 if abs(second[-1] - second[-2]) < tolerance else 0
            if settled >= 2:
                return second[-1]
    raise ConvergenceError(
        f'f̃({x!r}) did not settle within {steps} halvings of epsilon.',
        errors=[f'last extrapolated values: {second[-3:]!r}'],
    )


def conjugate_function(
    f,
    x,
    steps=EPSILON_STEPS,
    tolerance=CONVERGENCE_TOLERANCE,
):
    """
    The conjugate function `f̃(x)`.

    Uses the conjugate series when exact coefficients are attached to `f`;
    otherwise extrapolates `f̃(x, ε_j)`, `ε_j = π 2^-j`, `j = 1..steps`,
    towards `ε = 0` (two Richardson levels removing the `ε` and `ε³` terms)
    and returns once two consecutive extrapolated differences fall below
    `tolerance`.
    """
    if f.coeff_source is not None:
        fd = fourier_coeffs(f, len(f.coeff_source[0]) - 1)
        return conj_partial_sum(fd, fd.max_freq, x)
    if np.ndim(x) == 0:
        return _epsilon_limit(f, float(x), steps, tolerance)
    x = np.asarray(x, dtype=float)
    return np.array(
        [_epsilon_limit(f, point, steps, tolerance) for point in x.ravel()],
    ).reshape(x.shape)
