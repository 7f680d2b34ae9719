import math
from typing import Callable

import numpy as np
from pydantic import BaseModel

from summability.lab.constants import (
    DEFAULT_SEED,
    MODULUS_CHECK_POINTS,
    MODULUS_RANDOM_PAIRS,
    QUADRATURE_TOLERANCE,
)
from summability.lab.decorators import modulus_family
from summability.lab.enums import Condition
from summability.lab.exceptions import DomainError
from summability.lab.validation.helpers import build_fit_report, improper_integral, log_quad
from summability.lab.validation.models import FitItem, FitReport


TWO_PI = 2 * math.pi
E_TWO_PI = math.e * TWO_PI


class ModulusModel(BaseModel):
    """
    A function `omega` of modulus of continuity type on `[0, 2π]` together
    with the majorant `H` of `∫_u^π t^-2 omega(t) dt`.

    Both callables must accept scalars and numpy arrays.
    """
    omega: Callable
    H: Callable
    label: str

    class Config:
        allow_mutation = False


def default_grid(levels=16):
    """`u_j = π 2^-j`, `j = 1..levels`, ordered towards the origin."""
    return [math.pi * 2.0 ** -j for j in range(1, levels + 1)]


def _check_grid(grid, upper=math.pi):
    grid = list(grid if grid is not None else default_grid())
    if any(not 0 < u <= upper for u in grid):
        raise DomainError(f'grid points must lie in (0, {upper!r}].')
    return grid


def _value(func, x):
    return float(np.asarray(func(x), dtype=float))


def _ratio(condition, numerator, denominator, at, items):
    if numerator == 0:
        return 0.0
    if denominator == 0 or not math.isfinite(numerator):
        items.append(
            FitItem(
                level='ERROR',
                message=(
                    f'Condition ({condition}) violated: numerator {numerator!r} '
                    f'against denominator {denominator!r}.'
                ),
                at=at,
            ),
        )
        return math.inf
    return numerator / denominator


@modulus_family('power')
def make_power_modulus(alpha=0.5):
    """
    `omega(δ) = δ^α` with `H(u) = ∫_u^π t^(α-2) dt` in closed form
    (`log(π/u)` when `α = 1`).
    """
    if not 0 < alpha <= 1:
        raise DomainError(f'alpha must lie in (0, 1], got {alpha!r}.')

    def omega(delta):
        return np.power(delta, alpha)

    if alpha == 1:
        def H(u):
            return np.log(math.pi / np.asarray(u, dtype=float))
    else:
        def H(u):
            u = np.asarray(u, dtype=float)
            return (u ** (alpha - 1) - math.pi ** (alpha - 1)) / (1 - alpha)

    return ModulusModel(omega=omega, H=H, label=f'power alpha={alpha!r}')


def _log_factor(delta):
    delta = np.asarray(delta, dtype=float)
    with np.errstate(divide='ignore'):
        return np.log(E_TWO_PI / delta)


@modulus_family('lipschitz-log')
def make_lipschitz_log():
    """`omega(δ) = δ log(e 2π/δ)` with `H(u) = (log²(e 2π/u) - log²(2e)) / 2`."""
    def omega(delta):
        delta = np.asarray(delta, dtype=float)
        with np.errstate(invalid='ignore'):
            return np.where(delta > 0, delta * _log_factor(delta), 0.0)

    def H(u):
        return (_log_factor(u) ** 2 - math.log(2 * math.e) ** 2) / 2

    return ModulusModel(omega=omega, H=H, label='lipschitz-log')


@modulus_family('log-inverse')
def make_log_inverse():
    """`omega(δ) = 1/log(e 2π/δ)` with `H(u) = 1/(u log(e 2π/u))`."""
    def omega(delta):
        delta = np.asarray(delta, dtype=float)
        return np.where(delta > 0, 1.0 / _log_factor(delta), 0.0)

    def H(u):
        u = np.asarray(u, dtype=float)
        return 1.0 / (u * _log_factor(u))

    return ModulusModel(omega=omega, H=H, label='log-inverse')


def _tail_integral(m, u, tolerance):
    if u >= math.pi:
        return 0.0
    return log_quad(lambda t: _value(m.omega, t) / t ** 2, u, math.pi, tolerance=tolerance)


def check_111(m, grid=None, tolerance=QUADRATURE_TOLERANCE):
    """`∫_u^π t^-2 omega(t) dt = O(H(u))` on `grid`."""
    grid = _check_grid(grid)
    items, values = [], []
    for u in grid:
        integral = _tail_integral(m, u, tolerance)
        values.append(_ratio(Condition.C111, integral, _value(m.H, u), u, items))
    return build_fit_report(Condition.C111, values, items=items, label=m.label)


def check_112(m, grid=None, tolerance=QUADRATURE_TOLERANCE):
    """`∫_0^u H(t) dt = O(u H(u))` on `grid`."""
    grid = _check_grid(grid)
    items, values = [], []
    for u in grid:
        integral, convergent = improper_integral(lambda t: _value(m.H, t), u, tolerance=tolerance)
        if not convergent:
            items.append(
                FitItem(level='ERROR', message='∫_0^u H(t) dt diverges.', at=u),
            )
            values.append(math.inf)
            continue
        values.append(_ratio(Condition.C112, integral, u * _value(m.H, u), u, items))
    return build_fit_report(Condition.C112, values, items=items, label=m.label)


def check_202(m, grid=None, tolerance=QUADRATURE_TOLERANCE):
    """`∫_0^u t^-1 omega(t) dt = O(omega(u))` on `grid`."""
    grid = _check_grid(grid, upper=TWO_PI)
    items, values = [], []
    for u in grid:
        integral, convergent = improper_integral(
            lambda t: _value(m.omega, t) / t,
            u,
            tolerance=tolerance,
        )
        if not convergent:
            items.append(
                FitItem(level='ERROR', message='∫_0^u omega(t)/t dt diverges.', at=u),
            )
            values.append(math.inf)
            continue
        values.append(_ratio(Condition.C202, integral, _value(m.omega, u), u, items))
    return build_fit_report(Condition.C202, values, items=items, label=m.label)


def default_pairs(c=1.0, levels=16):
    start = math.pi / 8
    return [(start, start + math.pi * 2.0 ** -j / c) for j in range(1, levels + 1)]


def check_lemma3(m, c=1.0, pairs=None, tolerance=QUADRATURE_TOLERANCE):
    """
    `∫_α^β t^-1 omega(t) dt = O((β - α) H(c (β - α)))` over `pairs`;
    pairs with `c (β - α) >= π` fall outside the domain of `H` and are skipped.
    """
    if c < 1:
        raise DomainError(f'c must be at least 1, got {c!r}.')
    pairs = list(pairs if pairs is not None else default_pairs(c))
    items, values = [], []
    for alpha, beta in pairs:
        if not beta > alpha > 0:
            raise DomainError(f'pairs must satisfy β > α > 0, got {(alpha, beta)!r}.')
        width = beta - alpha
        if c * width >= math.pi:
            items.append(
                FitItem(level='WARNING', message='c(β - α) outside (0, π): skipped.', at=width),
            )
            continue
        integral = log_quad(lambda t: _value(m.omega, t) / t, alpha, beta, tolerance=tolerance)
        denominator = width * _value(m.H, c * width)
        values.append(_ratio(Condition.LEMMA3, integral, denominator, width, items))
    return build_fit_report(Condition.LEMMA3, values, items=items, label=m.label)


def check_lemma4(m, b=1.0, grid=None, tolerance=QUADRATURE_TOLERANCE):
    """
    `∫_u^π t^-2 omega(t) dt = O(H(b u))` on `grid`; points with `b u >= π`
    and a nonzero integral are skipped.
    """
    if b < 1:
        raise DomainError(f'b must be at least 1, got {b!r}.')
    grid = _check_grid(grid)
    items, values = [], []
    for u in grid:
        integral = _tail_integral(m, u, tolerance)
        if integral != 0 and b * u >= math.pi:
            items.append(
                FitItem(level='WARNING', message='b u outside (0, π): skipped.', at=u),
            )
            continue
        denominator = _value(m.H, b * u) if integral else 0.0
        values.append(_ratio(Condition.LEMMA4, integral, denominator, u, items))
    return build_fit_report(Condition.LEMMA4, values, items=items, label=m.label)


def check_modulus_type(m, seed=DEFAULT_SEED):
    """
    Checks that `m.omega` is of modulus of continuity type: `omega(0) = 0`,
    nondecreasing on a 256-point grid, subadditive on 100 random pairs, and
    `δ2^-1 omega(δ2) <= 2 δ1^-1 omega(δ1)` on 100 random pairs `δ2 >= δ1 > 0`.
    """
    rng = np.random.default_rng(seed)
    items = []
    grid = np.linspace(0.0, TWO_PI, MODULUS_CHECK_POINTS)
    curve = np.asarray(m.omega(grid), dtype=float)

    if abs(curve[0]) > 0:
        items.append(FitItem(level='ERROR', message='omega(0) is not 0.', at=0.0))
    drops = np.flatnonzero(np.diff(curve) < 0)
    if drops.size:
        items.append(
            FitItem(level='ERROR', message='omega decreases.', at=float(grid[drops[0] + 1])),
        )

    first = rng.uniform(0, math.pi, MODULUS_RANDOM_PAIRS)
    second = rng.uniform(0, math.pi, MODULUS_RANDOM_PAIRS)
    excess = m.omega(first + second) - m.omega(first) - m.omega(second)
    if np.any(excess > 1e-12):
        items.append(
            FitItem(
                level='ERROR',
                message='omega is not subadditive.',
                at=float(first[np.argmax(excess)] + second[np.argmax(excess)]),
            ),
        )

    lower = rng.uniform(1e-6, TWO_PI, MODULUS_RANDOM_PAIRS)
    upper = lower + rng.uniform(0, 1, MODULUS_RANDOM_PAIRS) * (TWO_PI - lower)
    lhs = m.omega(upper) * lower
    rhs = 2 * m.omega(lower) * upper
    if np.any(lhs > rhs + 1e-12):
        items.append(
            FitItem(
                level='ERROR',
                message='δ^-1 omega(δ) grows by more than a factor 2.',
                at=float(upper[np.argmax(lhs - rhs)]),
            ),
        )

    with np.errstate(divide='ignore', invalid='ignore'):
        ratios = np.where(rhs > 0, 2 * lhs / rhs, 0.0)
    return FitReport(
        condition=Condition.MODULUS_TYPE,
        label=m.label,
        constant=float(np.max(ratios)),
        coarse_constant=float(np.max(ratios)),
        ok=not items,
        items=items,
    )


def check_membership(curve, m, grid=None):
    """
    `f ∈ X_ω`: the measured modulus `curve` of `f` is `O(omega)` on `grid`,
    ordered towards the origin.
    """
    grid = _check_grid(grid, upper=TWO_PI)
    items, values = [], []
    for delta in grid:
        values.append(
            _ratio(Condition.MEMBERSHIP, curve(delta), _value(m.omega, delta), delta, items),
        )
    return build_fit_report(
        Condition.MEMBERSHIP,
        values,
        items=items,
        label=f'{curve.f.label} against {m.label}',
    )
