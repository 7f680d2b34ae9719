import math
import warnings

import numpy as np
from scipy import integrate

from summability.lab.constants import (
    IMPROPER_BLOCK_OCTAVES,
    IMPROPER_BLOCKS,
    QUADRATURE_TOLERANCE,
    STABILITY_FACTOR,
    STABILITY_SLACK,
)
from summability.lab.validation.models import FitItem, FitReport


def quad(func, a, b, tolerance=QUADRATURE_TOLERANCE):
    """Adaptive Gauss-Kronrod quadrature returning `(value, error_estimate)`."""
    if a == b:
        return 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', integrate.IntegrationWarning)
        value, error = integrate.quad(
            lambda t: float(func(t)),
            a,
            b,
            epsabs=tolerance * 1e-2,
            epsrel=tolerance,
            limit=200,
        )
    return value, error


def log_quad(func, a, b, tolerance=QUADRATURE_TOLERANCE):
    """Quadrature of `func` over `[a, b]`, `0 < a < b`, in the variable `s = log t`."""
    value, _ = quad(
        lambda s: func(math.exp(s)) * math.exp(s),
        math.log(a),
        math.log(b),
        tolerance=tolerance,
    )
    return value


def improper_integral(func, u, tolerance=QUADRATURE_TOLERANCE):
    """
    Integrates `func` over `(0, u]` refining towards the origin in blocks
    `[u 2^(-16k), u 2^(-16(k-1))]`.

    Returns `(value, convergent)`. The integral is declared divergent when the
    last block neither falls below `tolerance` of the total nor shrinks by a
    factor two against its predecessor.
    """
    blocks = []
    upper = u
    for _ in range(IMPROPER_BLOCKS):
        lower = upper * 2.0 ** -IMPROPER_BLOCK_OCTAVES
        blocks.append(log_quad(func, lower, upper, tolerance=tolerance))
        upper = lower
    total = math.fsum(blocks)
    if not all(math.isfinite(block) for block in blocks):
        return math.inf, False
    last, previous = abs(blocks[-1]), abs(blocks[-2])
    if last <= tolerance * abs(total) or last <= 0.5 * previous:
        return total, True
    return math.inf, False


def _sup(values):
    return max(values) if values else 0.0


def build_fit_report(condition, values, items=None, label=None):
    """
    Applies the refinement-stable surrogate of an O-condition to `values`
    ordered along refinement (`u -> 0` or `n -> oo`).

    The coarse half is the first `ceil(len/2)` samples; the report is ok when
    every value is finite, no ERROR item has been collected and
    `sup(values) <= 2 sup(coarse) + 1e-12`.
    """
    items = list(items or [])
    values = [float(value) for value in values]
    coarse = values[:(len(values) + 1) // 2]
    constant = _sup(values)
    coarse_constant = _sup(coarse)
    finite = all(np.isfinite(values))
    stable = constant <= STABILITY_FACTOR * coarse_constant + STABILITY_SLACK
    if not finite:
        items.append(FitItem(level='ERROR', message='The checked ratio is not finite.'))
    elif not stable:
        items.append(
            FitItem(
                level='ERROR',
                message=(
                    f'The checked ratio is not refinement-stable: {constant!r} on the '
                    f'full sample against {coarse_constant!r} on the coarse half.'
                ),
            ),
        )
    return FitReport(
        condition=condition,
        label=label,
        constant=constant,
        coarse_constant=coarse_constant,
        ok=finite and stable and not any(item.level == 'ERROR' for item in items),
        values=values,
        items=items,
    )
