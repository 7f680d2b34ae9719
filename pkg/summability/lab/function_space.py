import math
from typing import Callable, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, root_validator, validator

from summability.lab.constants import (
    CROSSING_NEWTON_STEPS,
    DEFAULT_GRID_SIZE,
    MIN_GRID_SIZE,
    MODULUS_SAMPLES,
    MODULUS_T_MIN,
)
from summability.lab.decorators import function_family
from summability.lab.enums import SpaceKind
from summability.lab.exceptions import DomainError, EvaluationError


TWO_PI = 2 * math.pi


class PeriodicFunction(BaseModel):
    """
    A 2π-periodic real function.

    **Attributes:**

    * **evaluator** - vectorized callable mapping an array of points to an array of values.
    * **degree_hint** - exact degree when the function is a trigonometric polynomial.
    * **coeff_source** - exact coefficients `(a, b)` indexed from `ν = 0`
        (`a[0]` is `a_0(f)`, `b[0]` is ignored).
    * **label** - short description used in reports.
    """
    evaluator: Callable
    degree_hint: Optional[int]
    coeff_source: Optional[Tuple[Tuple[float, ...], Tuple[float, ...]]]
    label: str = 'f'

    class Config:
        allow_mutation = False

    @root_validator(skip_on_failure=True)
    def _check_coefficients(cls, values):
        source, degree = values.get('coeff_source'), values.get('degree_hint')
        if source is None:
            return values
        a, b = source
        if len(a) != len(b):
            raise ValueError('cosine and sine coefficient sequences must have the same length')
        if degree is not None and any(
            value != 0.0 for value in list(a[degree + 1:]) + list(b[degree + 1:])
        ):
            raise ValueError(f'coefficients above degree {degree} must vanish')
        return values

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(
            np.asarray(self.evaluator(x), dtype=float),
            x.shape,
        ).copy()

    def is_periodic(self, samples=64, tolerance=1e-12):
        x = np.linspace(-math.pi, math.pi, samples, endpoint=False)
        values = self(x)
        shifted = self(x + TWO_PI)
        scale = max(1.0, float(np.max(np.abs(values))))
        return bool(np.all(np.abs(shifted - values) <= tolerance * scale))

    def scaled(self, factor):
        source = self.coeff_source
        if source is not None:
            source = (
                tuple(factor * value for value in source[0]),
                tuple(factor * value for value in source[1]),
            )
        return PeriodicFunction(
            evaluator=lambda x: factor * self(x),
            degree_hint=self.degree_hint,
            coeff_source=source,
            label=f'{factor!r}*{self.label}',
        )


class NormSpace(BaseModel):
    """
    The space `X`: `C` with the sup norm or `L^p`, `1 <= p < oo`.
    Norms are evaluated on `grid_size` uniform points of `[-π, π)`.
    """
    kind: Literal['C', 'Lp'] = SpaceKind.C
    p: Optional[float]
    grid_size: int = DEFAULT_GRID_SIZE

    class Config:
        allow_mutation = False

    @validator('grid_size')
    def _check_grid_size(cls, value):
        if value < MIN_GRID_SIZE or value % 2:
            raise ValueError(f'grid_size must be even and at least {MIN_GRID_SIZE}')
        return value

    @root_validator(skip_on_failure=True)
    def _check_exponent(cls, values):
        kind, p = values.get('kind'), values.get('p')
        if kind == SpaceKind.LP and (p is None or p < 1):
            raise ValueError('Lp spaces need an exponent p >= 1')
        if kind == SpaceKind.C and p is not None:
            raise ValueError('the exponent p is only meaningful for Lp spaces')
        return values

    @property
    def label(self):
        return 'C' if self.kind == SpaceKind.C else f'L^{self.p:g}'

    def grid(self):
        return -math.pi + TWO_PI * np.arange(self.grid_size) / self.grid_size

    def measure(self, values):
        """Norm of a function given by its samples on `grid()`."""
        values = np.asarray(values, dtype=float)
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            point = float(self.grid()[bad[0]])
            raise EvaluationError(
                f'Non-finite value at grid point x={point!r}.',
                point=point,
            )
        if self.kind == SpaceKind.C:
            return float(np.max(np.abs(values)))
        step = TWO_PI / self.grid_size
        integral = step * math.fsum(np.abs(values) ** self.p)
        if self.p == 1:
            integral += _sign_change_correction(values, step)
        return float(max(integral, 0.0) ** (1.0 / self.p))


def _sign_change_correction(values, step):
    """
    Error terms of the periodic trapezoidal rule for `∫_Q |g|` up to order
    `step⁴`. A zero of `g` at `x_i + θ step` contributes the jumps of `|g|'`,
    `|g|''` and `|g|'''` weighted by `B_2(θ)`, `B_3(θ)` and `B_4(θ)`; the zero
    and the derivatives come from the cubic through the samples at
    `x_{i-1}, ..., x_{i+2}`.
    """
    before = np.roll(values, 1)
    after = np.roll(values, -1)
    cells = np.flatnonzero((values * after < 0) | ((values == 0) & (before * after < 0)))
    if not cells.size:
        return 0.0
    v_1, v0, v1, v2 = before[cells], values[cells], after[cells], np.roll(values, -2)[cells]
    c1 = -v_1 / 3 - v0 / 2 + v1 - v2 / 6
    c2 = (v_1 + v1) / 2 - v0
    c3 = (v2 - v_1) / 6 + (v0 - v1) / 2
    theta = np.where(v0 == 0, 0.0, v0 / (v0 - v1))
    for _ in range(CROSSING_NEWTON_STEPS):
        residual = v0 + theta * (c1 + theta * (c2 + theta * c3))
        theta = np.clip(theta - residual / (c1 + theta * (2 * c2 + 3 * c3 * theta)), 0.0, 1.0)
    slope = c1 + theta * (2 * c2 + 3 * c3 * theta)
    sign = np.sign(slope)
    b2 = theta ** 2 - theta + 1.0 / 6.0
    b3 = theta ** 3 - 1.5 * theta ** 2 + 0.5 * theta
    b4 = theta ** 4 - 2 * theta ** 3 + theta ** 2 - 1.0 / 30.0
    terms = (
        np.abs(slope) * b2
        - sign * (2 * c2 + 6 * c3 * theta) * b3 / 3
        + sign * c3 * b4 / 2
    )
    return step * math.fsum(terms)


def psi(f, x, t):
    """`ψ_x(t) = f(x + t) - f(x - t)`."""
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    return f(x + t) - f(x - t)


def phi(f, x, t):
    """`φ_x(t) = f(x + t) + f(x - t) - 2 f(x)`."""
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    return f(x + t) + f(x - t) - 2 * f(x)


def norm(space, g):
    """
    Norm of `g` in `space`: the grid maximum of `|g|` for `C`, the periodic
    trapezoidal approximation of `(∫_Q |g|^p)^(1/p)` for `L^p`, corrected at
    the zero crossings of `g` when `p = 1`.

    **Parameters:**

    * **space** - a `NormSpace`.
    * **g** - a `PeriodicFunction` or any vectorized callable.
    """
    return space.measure(g(space.grid()))


def modulus_t_grid():
    # one geometric grid on [2π 2^-30, 2π] serves every delta, not 512 points per delta
    return np.geomspace(MODULUS_T_MIN, TWO_PI, MODULUS_SAMPLES)


def _check_delta(delta):
    if not 0 <= delta <= TWO_PI:
        raise DomainError(f'delta must lie in [0, 2π], got {delta!r}.')


def _difference_norms(space, f, ts, difference):
    x = space.grid()
    return np.array([space.measure(difference(f, x, t)) for t in ts])


def _modulus(space, f, delta, difference):
    _check_delta(delta)
    if delta == 0:
        return 0.0
    t_grid = modulus_t_grid()
    count = int(np.searchsorted(t_grid, delta, side='right')) + 1
    values = _difference_norms(space, f, t_grid[:count], difference)
    at_delta = float(_difference_norms(space, f, [delta], difference)[0])
    return _sampled_sup(t_grid, values, delta, at_delta)


def _sampled_sup(t_grid, values, delta, at_delta):
    """
    Sup of the readings on the grid points up to `delta` and at `delta`
    itself; the reading at `delta` is capped by the reading at the right end
    of its grid cell, which keeps the result nondecreasing in `delta`
    unless the difference norm turns twice inside one cell.
    `values` holds the readings on `t_grid` at least one point past `delta`.
    """
    index = int(np.searchsorted(t_grid, delta, side='right')) - 1
    base = float(np.max(values[:index + 1])) if index >= 0 else 0.0
    cap = float(values[index + 1]) if index + 1 < len(values) else at_delta
    return max(base, min(at_delta, cap))


def conj_modulus2(space, f, delta):
    """
    Second conjugate modulus of continuity: the sup over the sampled
    `t in (0, delta]` of `norm(space, x -> ψ_x(t))`; `0` at `delta = 0`.
    """
    return _modulus(space, f, delta, psi)


def classical_modulus2(space, f, delta):
    """
    Second classical modulus of continuity: as `conj_modulus2` with `φ`
    in place of `ψ`; `φ_x` is even in `t` so `t > 0` covers `|t| <= delta`.
    """
    return _modulus(space, f, delta, phi)


class ModulusCurve:
    """
    A modulus of continuity measured once on the fixed log-spaced `t` grid,
    read at many `delta` afterwards.

    **Parameters:**

    * **space** - the `NormSpace` the differences are measured in.
    * **f** - the `PeriodicFunction`.
    * **kind** - `conjugate` (uses `ψ`) or `classical` (uses `φ`).
    """

    def __init__(self, space, f, kind='conjugate'):
        self.space = space
        self.f = f
        self.kind = kind
        self.difference = psi if kind == 'conjugate' else phi
        self.t_grid = modulus_t_grid()
        self.values = _difference_norms(space, f, self.t_grid, self.difference)
        self.running_max = np.maximum.accumulate(self.values)
        self._readings = {}

    def __call__(self, delta):
        _check_delta(delta)
        if delta == 0:
            return 0.0
        if delta not in self._readings:
            at_delta = float(_difference_norms(self.space, self.f, [delta], self.difference)[0])
            self._readings[delta] = _sampled_sup(self.t_grid, self.values, delta, at_delta)
        return self._readings[delta]

    def many(self, deltas):
        return np.array([self(delta) for delta in deltas])

    def as_model(self):
        """
        A `ModulusModel` whose `omega` is the piecewise-linear interpolation of
        the running maximum of the measured curve (`H` is not available).
        """
        from summability.lab.modulus_models import ModulusModel

        knots = np.append(0.0, self.t_grid)
        heights = np.append(0.0, self.running_max)
        return ModulusModel(
            omega=lambda delta: np.interp(delta, knots, heights),
            H=lambda u: np.full_like(np.asarray(u, dtype=float), np.nan),
            label=f'measured {self.kind} modulus of {self.f.label} in {self.space.label}',
        )


def trig_poly(a, b=None, label=None):
    """
    Trigonometric polynomial `a[0]/2 + Σ_ν (a[ν] cos νx + b[ν] sin νx)`
    with exact coefficients attached.
    """
    a = [float(value) for value in a] or [0.0]
    b = [float(value) for value in (b or [])]
    size = max(len(a), len(b))
    a = a + [0.0] * (size - len(a))
    b = [0.0] + (b + [0.0] * (size - len(b)))[1:]
    degree = max(
        [nu for nu in range(size) if a[nu] != 0.0 or (nu > 0 and b[nu] != 0.0)] or [0],
    )
    a_vec = np.array(a)
    b_vec = np.array(b)
    nu = np.arange(size)

    def evaluator(x):
        phase = np.multiply.outer(x, nu[1:])
        return a_vec[0] / 2 + np.cos(phase) @ a_vec[1:] + np.sin(phase) @ b_vec[1:]

    return PeriodicFunction(
        evaluator=evaluator,
        degree_hint=degree,
        coeff_source=(tuple(a), tuple(b)),
        label=label or f'trig-poly(degree={degree})',
    )


@function_family('trig-poly')
def make_trig_poly(a, b=None):
    """Trigonometric polynomial from explicit coefficient lists."""
    return trig_poly(a, b)


@function_family('cosine')
def make_cosine(nu=1):
    """The harmonic cos(νx)."""
    return trig_poly([0.0] * nu + [1.0], label=f'cos({nu}x)')


@function_family('sine')
def make_sine(nu=1):
    """The harmonic sin(νx)."""
    return trig_poly([0.0], [0.0] * nu + [1.0], label=f'sin({nu}x)')


@function_family('constant')
def make_constant(c=1.0):
    """The constant function c."""
    return trig_poly([2.0 * c], label=f'const({c!r})')


@function_family('weierstrass')
def make_weierstrass(alpha=0.5, terms=8):
    """Lacunary Lip-α series Σ_{j<terms} 2^(-jα) cos(2^j x)."""
    if not 0 < alpha <= 1:
        raise DomainError(f'alpha must lie in (0, 1], got {alpha!r}.')
    a = [0.0] * (2 ** (terms - 1) + 1)
    for j in range(terms):
        a[2 ** j] = 2.0 ** (-j * alpha)
    return trig_poly(a, label=f'weierstrass(alpha={alpha!r}, terms={terms})')


@function_family('abs-sine-power')
def make_abs_sine_power(alpha=0.5):
    """|sin x|^α, Lip-α without attached coefficients."""
    if not 0 < alpha <= 1:
        raise DomainError(f'alpha must lie in (0, 1], got {alpha!r}.')
    return PeriodicFunction(
        evaluator=lambda x: np.abs(np.sin(x)) ** alpha,
        label=f'abs-sine-power(alpha={alpha!r})',
    )
