"""
Pricing: the edge-disjoint path packing with the largest dual-weighted value.

Each catalog path p of pair (t, r) scores ``w_p * mu_(t, r)``. A feasible
selection uses every transmitter, receiver and edge at most once. If the best
selection scores no more than ``gamma + eps`` no column can improve the
master problem and a termination certificate is returned instead.
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Union

from .configuration import Configuration
from .exceptions import ResourceLimitError, ValidationError
from .master_lp import DualPrices
from .network import PathCatalog

logger = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 10_000_000
DEFAULT_TOLERANCE = 1e-7
ORACLE_PATH_CAP = 20


def termination_epsilon(gamma: float, tolerance: float = DEFAULT_TOLERANCE) -> float:
    return tolerance * max(1.0, abs(gamma))


@dataclass(frozen=True)
class PricingInstance:
    catalog: PathCatalog
    duals: DualPrices
    coefficients: tuple[float, ...]

    @property
    def threshold(self) -> float:
        return self.duals.gamma

    @classmethod
    def build(cls, catalog: PathCatalog, duals: DualPrices) -> 'PricingInstance':
        """Score every path with its weight times the dual price of its own pair."""
        coefficients = tuple(path.weight * duals.mu.get(path.pair, 0.0) for path in catalog)
        if any(value < 0 for value in coefficients):
            raise ValidationError('Pricing coefficients must be non-negative.')
        return cls(catalog=catalog, duals=duals, coefficients=coefficients)


@dataclass(frozen=True)
class PricingAssignment:
    selected: tuple[int, ...]
    objective_value: float
    nodes: int = 0


@dataclass(frozen=True)
class TerminationCertificate:
    """No configuration beats ``gamma`` by more than ``epsilon``: the master problem is optimal."""

    best_value: float
    gamma: float
    epsilon: float
    nodes: int = 0


PricingResult = Union[PricingAssignment, TerminationCertificate]


def resource_masks(catalog: PathCatalog) -> list[int]:
    """Bitmask of the edges, transmitter and receiver each path occupies."""
    graph = catalog.graph
    edge_count = len(graph.edges)
    offsets = {node.index: position for position, node in enumerate(graph.nodes)}
    masks = []
    for path in catalog:
        mask = 0
        for position in path.edge_indices:
            mask |= 1 << position
        mask |= 1 << (edge_count + offsets[path.transmitter.index])
        mask |= 1 << (edge_count + offsets[path.receiver.index])
        masks.append(mask)
    return masks


def is_feasible(catalog: PathCatalog, selected) -> bool:
    """Check the transmitter, receiver and edge usage constraints of a selection."""
    edges: set[int] = set()
    transmitters: set[int] = set()
    receivers: set[int] = set()
    for position in selected:
        path = catalog[position]
        if path.transmitter.index in transmitters or path.receiver.index in receivers:
            return False
        if edges.intersection(path.edge_indices):
            return False
        transmitters.add(path.transmitter.index)
        receivers.add(path.receiver.index)
        edges.update(path.edge_indices)
    return True


def selection_value(coefficients, selected) -> float:
    """Sum coefficients in ascending index order, the order both searches accumulate in."""
    value = 0.0
    for position in sorted(selected):
        value += coefficients[position]
    return value


class BranchAndBound:
    """
    Depth-first include-first search over paths in catalog order.

    A node's bound is its value plus, for each still-free transmitter, the
    best coefficient among its undecided compatible paths. Only strictly
    better selections replace the incumbent, so the first optimum found,
    which is the lexicographically smallest, is kept.
    """

    def __init__(self, instance: PricingInstance, node_budget: int, floor: float):
        self.coefficients = instance.coefficients
        self.masks = resource_masks(instance.catalog)
        self.owners = [path.transmitter.index for path in instance.catalog]
        self.candidates = [i for i, value in enumerate(self.coefficients) if value > 0]
        self.node_budget = node_budget
        self.floor = floor
        self.nodes = 0
        self.best_value = 0.0
        self.best: tuple[int, ...] = ()

    def _bound(self, start: int, used: int, value: float) -> float:
        best_per_owner: dict[int, float] = {}
        for position in self.candidates[start:]:
            if self.masks[position] & used:
                continue
            owner = self.owners[position]
            coefficient = self.coefficients[position]
            if coefficient > best_per_owner.get(owner, 0.0):
                best_per_owner[owner] = coefficient
        return value + sum(best_per_owner.values())

    def _search(self, start: int, used: int, value: float, chosen: list[int]):
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise ResourceLimitError(
                f'Pricing exceeded its budget of {self.node_budget} branch-and-bound nodes.',
                details={'node_budget': self.node_budget},
            )
        if value > self.best_value:
            self.best_value = value
            self.best = tuple(chosen)

        bound = self._bound(start, used, value)
        margin = 1e-12 * max(1.0, abs(bound))
        if bound + margin <= self.best_value or bound + margin <= self.floor:
            return

        for offset in range(start, len(self.candidates)):
            position = self.candidates[offset]
            if self.masks[position] & used:
                continue
            chosen.append(position)
            self._search(offset + 1, used | self.masks[position], value + self.coefficients[position], chosen)
            chosen.pop()

    def run(self) -> PricingAssignment:
        self._search(0, 0, 0.0, [])
        return PricingAssignment(selected=self.best, objective_value=self.best_value, nodes=self.nodes)


def solve_pricing(
    instance: PricingInstance,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
    tolerance: float = DEFAULT_TOLERANCE,
) -> PricingResult:
    """Return the best path packing, or a certificate when nothing beats gamma + eps."""
    epsilon = termination_epsilon(instance.threshold, tolerance)
    floor = instance.threshold + epsilon
    search = BranchAndBound(instance, node_budget, floor)
    assignment = search.run()
    logger.debug(
        'Pricing: best %.12g vs gamma %.12g after %d nodes.',
        assignment.objective_value, instance.threshold, assignment.nodes,
    )
    if assignment.objective_value <= floor:
        return TerminationCertificate(
            best_value=assignment.objective_value,
            gamma=instance.threshold,
            epsilon=epsilon,
            nodes=assignment.nodes,
        )
    return assignment


def pricing_oracle(instance: PricingInstance, path_cap: int = ORACLE_PATH_CAP) -> PricingAssignment:
    """Exhaustive subset scan; ties go to the lexicographically smallest index set."""
    catalog = instance.catalog
    if len(catalog) > path_cap:
        raise ResourceLimitError(
            f'Pricing oracle is limited to {path_cap} paths, catalog has {len(catalog)}.',
            details={'path_cap': path_cap, 'paths': len(catalog)},
        )
    positions = [i for i, value in enumerate(instance.coefficients) if value > 0]
    best: Optional[tuple[int, ...]] = ()
    best_value = 0.0
    for size in range(1, len(positions) + 1):
        for subset in combinations(positions, size):
            if not is_feasible(catalog, subset):
                continue
            value = selection_value(instance.coefficients, subset)
            if value > best_value or (value == best_value and subset < best):
                best, best_value = subset, value
    return PricingAssignment(selected=best, objective_value=best_value)


def assignment_to_configuration(assignment: PricingAssignment, catalog: PathCatalog) -> Configuration:
    return Configuration(graph=catalog.graph, paths=tuple(catalog[i] for i in assignment.selected))
