import logging
import math

import numpy as np
from scipy import stats

from summability.lab.constants import TAIL_TOLERANCE
from summability.lab.decorators import matrix_family
from summability.lab.enums import Condition
from summability.lab.exceptions import DomainError
from summability.lab.validation.helpers import build_fit_report
from summability.lab.validation.models import FitItem, FitReport


logger = logging.getLogger(__name__)

DECAY_FLOOR = 1e-6
DEFAULT_M_SAMPLES = 24


class SummabilityMatrix:
    """
    A nonnegative row-stochastic matrix `A = (a_{n,k})`.

    Rows are produced on demand by `row_factory(n)`, which returns the
    entries `a_{n,0..K(n)}` already truncated so that the dropped tail stays
    below the tail tolerance, and are cached per `n`. Filling the cache is
    idempotent, so concurrent readers may compute the same row twice.

    **Parameters:**

    * **row_factory** - callable mapping `n` to a 1-d array of row entries.
    * **label** - description used in reports.
    * **lower_triangular** - `True` when `a_{n,k} = 0` for every `k > n`.
    """

    def __init__(self, row_factory, label, lower_triangular=False):
        self.row_factory = row_factory
        self.label = label
        self.lower_triangular = lower_triangular
        self._rows = {}

    def __repr__(self):
        return f'<SummabilityMatrix {self.label}>'

    def row(self, n):
        if n < 0:
            raise DomainError(f'row index must be nonnegative, got {n}.')
        cached = self._rows.get(n)
        if cached is None:
            cached = np.asarray(self.row_factory(n), dtype=float)
            cached.setflags(write=False)
            cached = self._rows.setdefault(n, cached)
        return cached

    def K(self, n):
        return self.row(n).size - 1

    def entry(self, n, k):
        row = self.row(n)
        return float(row[k]) if 0 <= k < row.size else 0.0

    def tail_weights(self, n, size):
        """`w_ν = Σ_{k >= ν} a_{n,k}` for `ν = 0..size-1`."""
        row = self.row(n)
        tails = np.cumsum(row[::-1])[::-1]
        weights = np.zeros(size)
        weights[:min(size, tails.size)] = tails[:size]
        return weights


def _positive_weights(weights, size, label):
    if callable(weights):
        values = np.array([weights(k) for k in range(size)], dtype=float)
    else:
        values = np.asarray(weights, dtype=float)
        if values.size < size:
            raise DomainError(f'{label} weights cover {values.size} indices, {size} needed.')
        values = values[:size]
    if np.any(values <= 0):
        raise DomainError(f'{label} weights must be positive.')
    return values


def _power_weights(weights, exponent):
    if weights is not None:
        return weights
    return lambda k: (k + 1.0) ** exponent


@matrix_family('cesaro')
def make_cesaro():
    """Cesàro (C,1) means, `a_{n,k} = 1/(n+1)` for `k <= n`."""
    return SummabilityMatrix(
        lambda n: np.full(n + 1, 1.0 / (n + 1)),
        'cesaro',
        lower_triangular=True,
    )


@matrix_family('riesz')
def make_riesz(weights=None, exponent=0.0):
    """
    Riesz means `a_{n,k} = q_k / Q_n`, `Q_n = Σ_{k<=n} q_k`. Without explicit
    `weights` the sequence `q_k = (k+1)^exponent` is used.
    """
    weights = _power_weights(weights, exponent)

    def row_factory(n):
        q = _positive_weights(weights, n + 1, 'Riesz')
        return q / math.fsum(q)

    return SummabilityMatrix(row_factory, f'riesz exponent={exponent!r}', lower_triangular=True)


@matrix_family('norlund')
def make_norlund(weights=None, exponent=0.0):
    """
    Nörlund means `a_{n,k} = p_{n-k} / P_n`, `P_n = Σ_{k<=n} p_k`. Without
    explicit `weights` the sequence `p_k = (k+1)^exponent` is used.
    """
    weights = _power_weights(weights, exponent)

    def row_factory(n):
        p = _positive_weights(weights, n + 1, 'Nörlund')
        return p[::-1] / math.fsum(p)

    return SummabilityMatrix(row_factory, f'norlund exponent={exponent!r}', lower_triangular=True)


@matrix_family('euler')
def make_euler(q=1.0):
    """Euler means `a_{n,k} = C(n,k) q^(n-k) / (1+q)^n`."""
    if q <= 0:
        raise DomainError(f'q must be positive, got {q!r}.')
    return SummabilityMatrix(
        lambda n: stats.binom.pmf(np.arange(n + 1), n, 1.0 / (1.0 + q)),
        f'euler q={q!r}',
        lower_triangular=True,
    )


@matrix_family('identity')
def make_identity():
    """Identity-like rows `a_{n,k} = δ_{k,n}`: the partial sums themselves."""
    def row_factory(n):
        row = np.zeros(n + 1)
        row[n] = 1.0
        return row

    return SummabilityMatrix(row_factory, 'identity', lower_triangular=True)


@matrix_family('point-mass')
def make_point_mass(exponent=2):
    """Rows concentrated at `k = n^exponent`."""
    if exponent < 1:
        raise DomainError(f'exponent must be at least 1, got {exponent!r}.')

    def row_factory(n):
        row = np.zeros(int(round(n ** exponent)) + 1)
        row[-1] = 1.0
        return row

    return SummabilityMatrix(
        row_factory,
        f'point-mass exponent={exponent!r}',
        lower_triangular=exponent == 1,
    )


@matrix_family('poisson')
def make_poisson():
    """Borel-type rows `a_{n,k} = e^-n n^k / k!` with infinite support, tail-truncated."""
    def row_factory(n):
        if n == 0:
            return np.ones(1)
        support = int(stats.poisson.isf(TAIL_TOLERANCE / 2, n)) + 1
        return stats.poisson.pmf(np.arange(support + 1), n)

    return SummabilityMatrix(row_factory, 'poisson')


@matrix_family('pi-step')
def make_pi_step():
    """
    Nonincreasing rows with `a_{n,0} = π/(n+1)` followed by `n` equal entries,
    so that `A_{n,1} = π/(n+1)`; defined for `n >= 3`.
    """
    def row_factory(n):
        if n < 3:
            raise DomainError(f'pi-step rows need n >= 3, got {n}.')
        head = math.pi / (n + 1)
        return np.append(head, np.full(n, (1.0 - head) / n))

    return SummabilityMatrix(row_factory, 'pi-step', lower_triangular=True)


def shift_differences(row, r):
    extended = np.zeros(row.size + 2 * r)
    extended[:row.size] = row
    return np.abs(extended[:row.size + r] - extended[r:])


def a_nr(A, n, r):
    """`A_{n,r} = Σ_{k>=0} |a_{n,k} - a_{n,k+r}|`."""
    if r < 1:
        raise DomainError(f'r must be positive, got {r}.')
    return math.fsum(shift_differences(A.row(n), r))


def _reciprocal(condition, value, n, items):
    if value == 0:
        items.append(
            FitItem(level='ERROR', message=f'Condition ({condition}) violated: zero sum.', at=n),
        )
        return math.inf
    return 1.0 / value


def check_113(A, n_values, r):
    """`[Σ_{l=0}^n Σ_{k=l}^{r+l-1} a_{n,k}]^-1 = O(1)` over `n_values`."""
    if r < 1:
        raise DomainError(f'r must be positive, got {r}.')
    items, values = [], []
    for n in n_values:
        row = A.row(n)
        k = np.arange(row.size)
        counts = np.maximum(0, np.minimum(n, k) - np.maximum(0, k - r + 1) + 1)
        values.append(_reciprocal(Condition.C113, math.fsum(row * counts), n, items))
    return build_fit_report(Condition.C113, values, items=items, label=A.label)


def check_114(A, n_values):
    """`Σ_k (k+1) a_{n,k} = O(n+1)` over `n_values`."""
    values = []
    for n in n_values:
        row = A.row(n)
        values.append(math.fsum((np.arange(row.size) + 1) * row) / (n + 1))
    return build_fit_report(Condition.C114, values, label=A.label)


def default_m_values(A, n, r, samples=DEFAULT_M_SAMPLES):
    upper = A.K(n) + r
    return np.unique(np.round(np.geomspace(1, upper, samples)).astype(int)).tolist()


def check_200(A, n_values, r, c, m_values=None):
    """
    Condition (200): `Σ_{k>=m} |a_{n,k} - a_{n,k+r}| <= K Σ_{k>=m/c} a_{n,k}/k`.

    For each `n` the ratio of both sides is maximized over `m`; the report
    constant is the smallest `K` that works on the whole sample and the
    report is ok when it is finite and refinement-stable in `n`.
    """
    if r < 1:
        raise DomainError(f'r must be positive, got {r}.')
    if c <= 1:
        raise DomainError(f'c must exceed 1, got {c!r}.')
    logger.warning(
        'Condition (200) is evaluated with the lower limit m/c on the right-hand '
        'side rather than n/c.',
    )
    items, values = [], []
    for n in n_values:
        row = A.row(n)
        differences = shift_differences(row, r)
        lhs_tails = np.cumsum(differences[::-1])[::-1]
        k = np.arange(1, row.size)
        rhs_tails = np.append(np.cumsum((row[1:] / k)[::-1])[::-1], 0.0)
        worst = 0.0
        for m in (m_values if m_values is not None else default_m_values(A, n, r)):
            lhs = float(lhs_tails[m]) if m < lhs_tails.size else 0.0
            start = max(1, math.ceil(m / c))
            rhs = float(rhs_tails[start - 1]) if start - 1 < rhs_tails.size else 0.0
            if lhs == 0:
                continue
            if rhs == 0:
                items.append(
                    FitItem(
                        level='ERROR',
                        message=f'Condition (200) violated at n={n}, m={m}: empty right-hand side.',
                        at=n,
                    ),
                )
                worst = math.inf
                continue
            worst = max(worst, lhs / rhs)
        values.append(worst)
    return build_fit_report(Condition.C200, values, items=items, label=A.label)


def remark_report(condition, A):
    """(113) and (114) hold for every lower triangular matrix without evaluation."""
    return FitReport(
        condition=condition,
        label=A.label,
        constant=1.0,
        coarse_constant=1.0,
        ok=True,
        items=[
            FitItem(
                level='INFO',
                message=f'Condition ({condition}) holds for lower triangular matrices.',
            ),
        ],
    )


def check_matrix(A, n_values, tolerance=TAIL_TOLERANCE):
    """
    Checks the matrix axioms on `n_values`: nonnegative entries, row sums
    within `tolerance` of one, and `a_{n,k}` for `k <= 2` not increasing from
    `n` to `4n` unless it stays below `1e-6` (only where `4n <= max(n_values)`).
    """
    items = []
    deviations = []
    for n in n_values:
        row = A.row(n)
        if np.any(row < 0):
            items.append(FitItem(level='ERROR', message='Negative entry.', at=n))
        deviation = abs(math.fsum(row) - 1.0)
        deviations.append(deviation)
        if deviation > tolerance:
            items.append(
                FitItem(level='ERROR', message=f'Row sum off by {deviation!r}.', at=n),
            )
        if 4 * n <= max(n_values):
            for k in range(3):
                later = A.entry(4 * n, k)
                if later > A.entry(n, k) and later >= DECAY_FLOOR:
                    items.append(
                        FitItem(level='ERROR', message=f'Column {k} does not decay.', at=n),
                    )
    return FitReport(
        condition=Condition.MATRIX,
        label=A.label,
        constant=max(deviations, default=0.0),
        coarse_constant=max(deviations[:(len(deviations) + 1) // 2], default=0.0),
        ok=not items,
        values=deviations,
        items=items,
    )
