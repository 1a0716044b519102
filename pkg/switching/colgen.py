"""Column generation driver: RMP -> duals -> pricing -> new column, until certified optimal."""
import logging
from dataclasses import dataclass, field, replace
from typing import Optional

from .configuration import Configuration
from .exceptions import IterationLimitError, NumericalError, ValidationError
from .master_lp import (
    GAP_TOLERANCE,
    PIVOT_TOLERANCE,
    STALL_THRESHOLD,
    ColumnPool,
    DualPrices,
    Schedule,
    solve_rmp,
)
from .network import (
    DEFAULT_PATH_CAP,
    LinkSet,
    NetworkGraph,
    PathCatalog,
    enumerate_paths,
    validate_graph,
)
from .pricing import (
    DEFAULT_NODE_BUDGET,
    DEFAULT_TOLERANCE,
    PricingInstance,
    TerminationCertificate,
    assignment_to_configuration,
    solve_pricing,
    termination_epsilon,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITERATIONS = 100_000


@dataclass(frozen=True)
class SolveOptions:
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    path_cap: int = DEFAULT_PATH_CAP
    pricing_budget: int = DEFAULT_NODE_BUDGET
    tolerance: float = DEFAULT_TOLERANCE
    pivot_tolerance: float = PIVOT_TOLERANCE
    gap_tolerance: float = GAP_TOLERANCE
    stall_threshold: int = STALL_THRESHOLD

    @classmethod
    def from_settings(cls, **overrides) -> 'SolveOptions':
        """Read defaults from Django settings; ``None`` overrides are ignored."""
        from django.conf import settings

        options = cls(
            max_iterations=settings.QNET_MAX_ITERATIONS,
            path_cap=settings.QNET_PATH_CAP,
            pricing_budget=settings.QNET_PRICING_BUDGET,
            tolerance=settings.QNET_TOLERANCE,
            gap_tolerance=max(GAP_TOLERANCE, settings.QNET_TOLERANCE),
            pivot_tolerance=settings.QNET_PIVOT_TOLERANCE,
            stall_threshold=settings.QNET_STALL_THRESHOLD,
        )
        return options.with_overrides(**overrides)

    def with_overrides(self, **overrides) -> 'SolveOptions':
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> dict:
        return {
            'max_iterations': self.max_iterations,
            'path_cap': self.path_cap,
            'pricing_budget': self.pricing_budget,
            'tolerance': self.tolerance,
            'pivot_tolerance': self.pivot_tolerance,
            'gap_tolerance': self.gap_tolerance,
            'stall_threshold': self.stall_threshold,
        }


@dataclass(frozen=True)
class SolveReport:
    iterations: int
    objective_trace: tuple[float, ...]
    final_schedule: Schedule
    final_duals: DualPrices
    pool_size: int
    pricing_node_counts: tuple[int, ...]
    catalog: PathCatalog = field(repr=False, default=None)

    @property
    def objective(self) -> float:
        return self.final_schedule.objective


def initialize_pool(graph: NetworkGraph, links: LinkSet, catalog: PathCatalog) -> ColumnPool:
    """Empty column plus, per link, the single-path column on its least attenuated path."""
    pool = ColumnPool([Configuration.empty(graph)])
    for link in links:
        candidates = catalog.paths_for(link.pair)
        if not candidates:
            continue
        # min() keeps the first of equally attenuated paths, i.e. canonical order.
        shortest = min(candidates, key=lambda path: path.total_attenuation_db)
        pool.add(Configuration(graph=graph, paths=(shortest,)))
    return pool


def solve(graph: NetworkGraph, links: LinkSet, options: Optional[SolveOptions] = None) -> SolveReport:
    options = options or SolveOptions()

    validation = validate_graph(graph)
    if not validation.ok:
        raise ValidationError(
            'Network graph is invalid.',
            details=[v.to_dict() for v in validation.violations],
        )
    if not links:
        raise ValidationError('Cannot schedule an empty link set.')

    catalog = enumerate_paths(graph, options.path_cap).with_priorities(links)
    unrealizable = [link.pair for link in links if not catalog.by_pair.get(link.pair)]
    if unrealizable:
        raise ValidationError(f'Links without a TR-path: {unrealizable}.')

    pool = initialize_pool(graph, links, catalog)
    logger.info(
        'Column generation started: %d links, %d paths, %d initial columns.',
        len(links), len(catalog), len(pool),
    )

    trace: list[float] = []
    node_counts: list[int] = []
    schedule = None
    for iteration in range(1, options.max_iterations + 1):
        schedule, duals = solve_rmp(
            pool, links,
            pivot_tolerance=options.pivot_tolerance,
            gap_tolerance=options.gap_tolerance,
            stall_threshold=options.stall_threshold,
        )
        trace.append(schedule.objective)

        instance = PricingInstance.build(catalog, duals)
        result = solve_pricing(instance, node_budget=options.pricing_budget, tolerance=options.tolerance)
        node_counts.append(result.nodes)

        if isinstance(result, TerminationCertificate):
            logger.info(
                'Column generation converged after %d iterations: k=%.12g, %d columns.',
                iteration, schedule.objective, len(pool),
            )
            return SolveReport(
                iterations=iteration,
                objective_trace=tuple(trace),
                final_schedule=schedule,
                final_duals=duals,
                pool_size=len(pool),
                pricing_node_counts=tuple(node_counts),
                catalog=catalog,
            )

        column = assignment_to_configuration(result, catalog)
        logger.info(
            'Iteration %d: k=%.12g, pricing %.12g > gamma %.12g, adding %r.',
            iteration, schedule.objective, result.objective_value, duals.gamma, column,
        )
        if not pool.add(column):
            raise NumericalError(
                f'Pricing returned column {column!r} already in the pool with value '
                f'{result.objective_value:.12g} > gamma + eps '
                f'{duals.gamma + termination_epsilon(duals.gamma, options.tolerance):.12g}.',
                details={'iteration': iteration},
            )

    raise IterationLimitError(
        f'Column generation did not converge within {options.max_iterations} iterations.',
        best_schedule=schedule,
        details={'iterations': options.max_iterations, 'objective': schedule.objective if schedule else None},
    )
