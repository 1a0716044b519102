"""
Restricted master problem: max k subject to per-link coverage and convexity.

    max k
    s.t.  sum_M w(M, l) * lambda_M >= k    for every link l      (dual mu_l)
          sum_M lambda_M = 1                                    (dual gamma)
          lambda >= 0, k free

Solved with a dense primal simplex tableau. ``k`` is split into k+ - k-,
each covering row carries a surplus column, and the starting basis is the
surplus columns plus the first pool column on the convexity row, which is
primal feasible without a phase one.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .configuration import Configuration
from .exceptions import NumericalError, ValidationError
from .network import LinkSet

logger = logging.getLogger(__name__)

PIVOT_TOLERANCE = 1e-9
GAP_TOLERANCE = 1e-7
STALL_THRESHOLD = 50
CLAMP_TOLERANCE = 1e-12


class ColumnPool:
    """Ordered, duplicate-free set of configuration columns."""

    def __init__(self, columns: Iterable[Configuration] = ()):
        self._columns: list[Configuration] = []
        self._index: dict[str, int] = {}
        for column in columns:
            self.add(column)

    def add(self, column: Configuration) -> bool:
        """Append ``column`` unless an equal one is present. Returns True if added."""
        if column.key in self._index:
            return False
        self._index[column.key] = len(self._columns)
        self._columns.append(column)
        logger.debug('Pool column %d added: %r', len(self._columns) - 1, column)
        return True

    def position(self, column: Configuration) -> Optional[int]:
        return self._index.get(column.key)

    @property
    def columns(self) -> tuple[Configuration, ...]:
        return tuple(self._columns)

    def __contains__(self, column: Configuration) -> bool:
        return column.key in self._index

    def __iter__(self) -> Iterator[Configuration]:
        return iter(self._columns)

    def __len__(self) -> int:
        return len(self._columns)


@dataclass(frozen=True)
class Schedule:
    links: LinkSet
    columns: tuple[Configuration, ...]
    fractions: tuple[float, ...]
    objective: float
    per_link_rates: dict[tuple[int, int], float] = field(default_factory=dict)

    def active_columns(self, threshold: float = CLAMP_TOLERANCE) -> list[tuple[Configuration, float]]:
        """Configurations the network actually spends time in, with their fractions."""
        return [(c, f) for c, f in zip(self.columns, self.fractions) if f > threshold]


@dataclass(frozen=True)
class DualPrices:
    mu: dict[tuple[int, int], float]
    gamma: float


@dataclass(frozen=True)
class RateReport:
    rates: dict[tuple[int, int], float]
    minimum: float
    bottlenecks: tuple[tuple[int, int], ...]


def coverage_matrix(columns: Sequence[Configuration], links: LinkSet) -> np.ndarray:
    """Entry [l, j] is the weight of link l's path in column j, 0 if not realized."""
    matrix = np.zeros((len(links), len(columns)))
    for j, column in enumerate(columns):
        for i, link in enumerate(links):
            matrix[i, j] = column.weight_for(link.pair)
    return matrix


class Tableau:
    """
    Dense simplex tableau for ``min c x  s.t.  A x = b, x >= 0``.

    Row 0 holds ``[-z, reduced costs]``, rows 1.. hold ``[x_B, B^-1 A]``.
    Entering columns follow Dantzig's rule until ``stall_threshold``
    consecutive degenerate pivots, then Bland's rule for the rest of the
    solve. Ratio-test ties go to the basic variable with the lowest index.
    """

    def __init__(
        self,
        c: np.ndarray,
        A: np.ndarray,
        b: np.ndarray,
        basis: Sequence[int],
        tolerance: float = PIVOT_TOLERANCE,
        stall_threshold: int = STALL_THRESHOLD,
    ):
        self.c = c
        self.A = A
        self.b = b
        self.m, self.n = A.shape
        self.basis = np.array(basis, dtype=int)
        self.tolerance = tolerance
        self.stall_threshold = stall_threshold
        self.pivots = 0
        self.bland = False

        inv_basis_matrix = np.linalg.inv(A[:, self.basis])
        self.tableau = np.zeros((self.m + 1, self.n + 1))
        self.tableau[1:, 0] = inv_basis_matrix @ b
        self.tableau[1:, 1:] = inv_basis_matrix @ A
        self.tableau[0, :] = np.hstack([
            -1 * c[self.basis] @ self.tableau[1:, 0],
            c - c[self.basis] @ self.tableau[1:, 1:],
        ])

    def pivot(self, pivot_row: int, pivot_col: int):
        self.basis[pivot_row - 1] = pivot_col - 1
        self.tableau[pivot_row, :] /= self.tableau[pivot_row, pivot_col]
        for i in range(self.tableau.shape[0]):
            if i == pivot_row:
                continue
            self.tableau[i, :] -= self.tableau[i, pivot_col] * self.tableau[pivot_row, :]
        self.pivots += 1

    def _entering(self) -> Optional[int]:
        reduced = self.tableau[0, 1:]
        candidates = np.flatnonzero(reduced < -self.tolerance)
        if candidates.size == 0:
            return None
        if self.bland:
            return int(candidates[0])
        return int(candidates[np.argmin(reduced[candidates])])

    def _leaving(self, entering: int) -> int:
        column = self.tableau[1:, entering + 1]
        rows = np.flatnonzero(column > self.tolerance)
        if rows.size == 0:
            raise NumericalError('Restricted master problem reported unbounded; inputs are inconsistent.')
        ratios = self.tableau[1 + rows, 0] / column[rows]
        best = ratios.min()
        tied = rows[ratios <= best + self.tolerance]
        return int(tied[np.argmin(self.basis[tied])])

    def solve(self, max_pivots: Optional[int] = None):
        if max_pivots is None:
            max_pivots = 50 * (self.m + self.n) + 1000
        stalled = 0
        while True:
            entering = self._entering()
            if entering is None:
                return
            if self.pivots >= max_pivots:
                raise NumericalError(
                    f'Simplex did not certify optimality within {max_pivots} pivots.',
                    details={'pivots': self.pivots},
                )
            row = self._leaving(entering)
            degenerate = self.tableau[row + 1, 0] <= self.tolerance
            self.pivot(row + 1, entering + 1)
            logger.debug('Pivot %d: column %d enters, row %d leaves.', self.pivots, entering, row)
            stalled = stalled + 1 if degenerate else 0
            if not self.bland and stalled >= self.stall_threshold:
                logger.debug('Switching to Bland rule after %d degenerate pivots.', stalled)
                self.bland = True

    def primal(self) -> np.ndarray:
        x = np.zeros(self.n)
        x[self.basis] = np.linalg.solve(self.A[:, self.basis], self.b)
        return x

    def dual(self) -> np.ndarray:
        return np.linalg.solve(self.A[:, self.basis].T, self.c[self.basis])


def _clamp(values: np.ndarray, name: str) -> np.ndarray:
    if (values < -math.sqrt(PIVOT_TOLERANCE)).any():
        raise NumericalError(f'Negative {name} {values.min()!r} in the optimal basis.')
    return np.where(values < 0, 0.0, values)


def solve_rmp(
    pool: ColumnPool,
    links: LinkSet,
    *,
    pivot_tolerance: float = PIVOT_TOLERANCE,
    gap_tolerance: float = GAP_TOLERANCE,
    stall_threshold: int = STALL_THRESHOLD,
) -> tuple[Schedule, DualPrices]:
    """Solve the RMP over ``pool`` and return the optimal schedule with its dual prices."""
    if len(pool) == 0:
        raise ValidationError('Column pool is empty.')
    if not links:
        raise ValidationError('Link set is empty.')
    link_pairs = {link.pair for link in links}
    for column in pool:
        extra = set(column.realized_links) - link_pairs
        if extra:
            raise ValidationError(f'Column {column!r} realizes pairs outside the link set: {sorted(extra)}.')

    columns = pool.columns
    n, m = len(columns), len(links)
    weights = coverage_matrix(columns, links)

    # Variables: lambda_0..lambda_{n-1}, k+, k-, surplus_0..surplus_{m-1}.
    A = np.zeros((m + 1, n + 2 + m))
    A[:m, :n] = -weights
    A[:m, n] = 1.0
    A[:m, n + 1] = -1.0
    A[:m, n + 2:] = np.eye(m)
    A[m, :n] = 1.0
    b = np.zeros(m + 1)
    b[m] = 1.0
    c = np.zeros(n + 2 + m)
    c[n] = -1.0
    c[n + 1] = 1.0

    tableau = Tableau(
        c, A, b,
        basis=[n + 2 + i for i in range(m)] + [0],
        tolerance=pivot_tolerance,
        stall_threshold=stall_threshold,
    )
    tableau.solve()

    x = tableau.primal()
    fractions = _clamp(np.where(np.abs(x[:n]) <= CLAMP_TOLERANCE, 0.0, x[:n]), 'fraction')
    objective = float(x[n] - x[n + 1])

    y = tableau.dual()
    mu = _clamp(np.where(np.abs(y[:m]) <= CLAMP_TOLERANCE, 0.0, -y[:m]), 'dual price')
    gamma = float(-y[m])

    if abs(objective - gamma) > gap_tolerance:
        raise NumericalError(
            f'Duality gap {abs(objective - gamma):.3e} exceeds {gap_tolerance:.1e}.',
            details={'objective': objective, 'gamma': gamma},
        )

    rates = weights @ fractions
    schedule = Schedule(
        links=links,
        columns=columns,
        fractions=tuple(float(f) for f in fractions),
        objective=objective,
        per_link_rates={link.pair: float(rate) for link, rate in zip(links, rates)},
    )
    duals = DualPrices(mu={link.pair: float(value) for link, value in zip(links, mu)}, gamma=gamma)
    logger.debug('RMP solved: %d columns, %d links, k=%.12g, %d pivots.', n, m, objective, tableau.pivots)
    return schedule, duals


def evaluate_schedule(schedule: Schedule, links: LinkSet, tolerance: float = 1e-9) -> RateReport:
    """Recompute per-link rates from the fractions, independently of the solver."""
    rates = {
        link.pair: math.fsum(
            fraction * column.weight_for(link.pair)
            for column, fraction in zip(schedule.columns, schedule.fractions)
        )
        for link in links
    }
    minimum = min(rates.values()) if rates else 0.0
    bottlenecks = tuple(pair for pair, rate in rates.items() if rate <= minimum + tolerance)
    return RateReport(rates=rates, minimum=minimum, bottlenecks=bottlenecks)
