import math

import numpy as np
from pydantic import BaseModel, validator

from summability.lab.constants import SINGULARITY_GUARD
from summability.lab.exceptions import DomainError, SingularityError


ENVELOPE_SLACK = 1e-9
ENVELOPE_FLOOR = 1e-12


class KernelPoint(BaseModel):
    k: int
    r: int
    t: float

    @validator('k')
    def _check_k(cls, value):
        if value < 0:
            raise ValueError('k must be nonnegative')
        return value

    @validator('r')
    def _check_r(cls, value):
        if value == 0:
            raise ValueError('r must be nonzero')
        return value


class AbelIdentity(BaseModel):
    """Both sides of a summation-by-parts identity, computed independently."""
    lhs: float
    rhs: float

    @property
    def difference(self):
        return abs(self.lhs - self.rhs)


def _scalar_or_array(value):
    return float(value) if np.ndim(value) == 0 else value


def _half_denominator(k, r, t, guard):
    """
    Returns `(k, r, t, 2 sin(rt/2))` broadcast together, raising
    `SingularityError` for the first `t` within `guard` of some `2lπ/r`.
    """
    k, r, t = np.broadcast_arrays(
        np.asarray(k, dtype=int),
        np.asarray(r, dtype=int),
        np.asarray(t, dtype=float),
    )
    if np.any(k < 0):
        raise DomainError('k must be nonnegative.')
    if np.any(r == 0):
        raise DomainError('r must be nonzero.')
    nearest = 2 * math.pi * np.round(r * t / (2 * math.pi)) / r
    close = np.flatnonzero(np.abs(t - nearest) <= guard)
    if close.size:
        index = np.unravel_index(close[0], t.shape)
        raise SingularityError(
            KernelPoint(k=int(k[index]), r=int(r[index]), t=float(t[index])),
            float(nearest[index]),
        )
    return k, r, t, 2 * np.sin(r * t / 2)


def dirichlet_gen(k, r, t, guard=SINGULARITY_GUARD):
    """`D°_{k,r}(t) = sin((2k+r)t/2) / (2 sin(rt/2))`, vectorized over `k, r, t`."""
    k, r, t, denominator = _half_denominator(k, r, t, guard)
    return _scalar_or_array(np.sin((2 * k + r) * t / 2) / denominator)


def conj_dirichlet_gen(k, r, t, guard=SINGULARITY_GUARD):
    """`D̃°_{k,r}(t) = cos((2k+r)t/2) / (2 sin(rt/2))`, vectorized over `k, r, t`."""
    k, r, t, denominator = _half_denominator(k, r, t, guard)
    return _scalar_or_array(np.cos((2 * k + r) * t / 2) / denominator)


def conj_dirichlet(k, r, t, guard=SINGULARITY_GUARD):
    """`D̃_{k,r}(t) = (cos(t/2) - cos((2k+r)t/2)) / (2 sin(rt/2))`, vectorized over `k, r, t`."""
    k, r, t, denominator = _half_denominator(k, r, t, guard)
    return _scalar_or_array((np.cos(t / 2) - np.cos((2 * k + r) * t / 2)) / denominator)


def _padded(a, n, m, r):
    if not m >= n >= 0:
        raise DomainError(f'indices must satisfy m >= n >= 0, got n={n}, m={m}.')
    if r < 1:
        raise DomainError(f'r must be positive, got {r}.')
    a = np.asarray(a, dtype=float)
    size = m + r + 1
    if a.size < size:
        a = np.append(a, np.zeros(size - a.size))
    return a


def abel_sin_identity(a, n, m, r, t, guard=SINGULARITY_GUARD):
    """
    Summation by parts of `Σ_{k=n}^m a_k sin kt` with the kernels `D̃°_{k,±r}`.

    `a` is zero-padded up to index `m + r`. The left-hand side is summed
    directly, the right-hand side is
    `-Σ_{k=n}^m (a_k - a_{k+r}) D̃°_{k,r}(t) + Σ_{k=m+1}^{m+r} a_k D̃°_{k,-r}(t)
    - Σ_{k=n}^{n+r-1} a_k D̃°_{k,-r}(t)`.
    """
    a = _padded(a, n, m, r)
    body = np.arange(n, m + 1)
    head = np.arange(n, n + r)
    tail = np.arange(m + 1, m + r + 1)
    lhs = math.fsum(a[body] * np.sin(body * t))
    rhs = (
        -math.fsum((a[body] - a[body + r]) * conj_dirichlet_gen(body, r, t, guard))
        + math.fsum(a[tail] * conj_dirichlet_gen(tail, -r, t, guard))
        - math.fsum(a[head] * conj_dirichlet_gen(head, -r, t, guard))
    )
    return AbelIdentity(lhs=lhs, rhs=rhs)


def abel_cos_identity(a, n, m, r, t, guard=SINGULARITY_GUARD):
    """
    Summation by parts of `Σ_{k=n}^m a_k cos kt` with the kernels `D°_{k,±r}`:
    `Σ_{k=n}^m (a_k - a_{k+r}) D°_{k,r}(t) - Σ_{k=m+1}^{m+r} a_k D°_{k,-r}(t)
    + Σ_{k=n}^{n+r-1} a_k D°_{k,-r}(t)`.
    """
    a = _padded(a, n, m, r)
    body = np.arange(n, m + 1)
    head = np.arange(n, n + r)
    tail = np.arange(m + 1, m + r + 1)
    lhs = math.fsum(a[body] * np.cos(body * t))
    rhs = (
        math.fsum((a[body] - a[body + r]) * dirichlet_gen(body, r, t, guard))
        - math.fsum(a[tail] * dirichlet_gen(tail, -r, t, guard))
        + math.fsum(a[head] * dirichlet_gen(head, -r, t, guard))
    )
    return AbelIdentity(lhs=lhs, rhs=rhs)


def _exceeds(values, bound):
    return int(np.count_nonzero(np.abs(values) > bound * (1 + ENVELOPE_SLACK) + ENVELOPE_FLOOR))


def envelope_violations(k, t, guard=SINGULARITY_GUARD):
    """
    Counts the points `(k, t)`, `0 < |t| <= π`, where the pointwise
    envelopes of the `r = 1` kernels fail:

    * `|D̃°_{k,1}(t)| <= π / (2|t|)`
    * `|D̃_{k,1}(t)| <= π / |t|`
    * `|D̃_{k,1}(t)| <= k + 1`
    * `|D̃_{k,1}(t)| <= k(k+1)|t| / 2`
    """
    k, t = np.broadcast_arrays(np.asarray(k, dtype=int), np.asarray(t, dtype=float))
    if np.any((np.abs(t) > math.pi) | (t == 0)):
        raise DomainError('envelopes are stated for 0 < |t| <= π.')
    conj_gen = conj_dirichlet_gen(k, 1, t, guard)
    conj = conj_dirichlet(k, 1, t, guard)
    return {
        'conj_dirichlet_gen_pi_over_2t': _exceeds(conj_gen, math.pi / (2 * np.abs(t))),
        'conj_dirichlet_pi_over_t': _exceeds(conj, math.pi / np.abs(t)),
        'conj_dirichlet_k_plus_1': _exceeds(conj, k + 1.0),
        'conj_dirichlet_quadratic': _exceeds(conj, k * (k + 1) * np.abs(t) / 2),
    }
