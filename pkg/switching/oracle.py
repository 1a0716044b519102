"""
Brute-force ground truth for small graphs.

Enumerates every network configuration and solves the unrestricted LP over
all of them, and scans all 0/1 edge mappings to cross-check the flow
characterization of configurations against the path-set definition.
"""
import logging
from dataclasses import dataclass
from typing import Optional

from .configuration import Configuration, FlowMapping, check_flow
from .exceptions import ResourceLimitError
from .master_lp import ColumnPool, Schedule, solve_rmp
from .network import LinkSet, NetworkGraph, PathCatalog, enumerate_paths
from .pricing import resource_masks

logger = logging.getLogger(__name__)

UNIVERSE_PATH_CAP = 20
FLOW_SCAN_EDGE_CAP = 10


@dataclass(frozen=True)
class ConfigurationUniverse:
    graph: NetworkGraph
    configs: tuple[Configuration, ...]

    def __len__(self) -> int:
        return len(self.configs)

    def __iter__(self):
        return iter(self.configs)


@dataclass(frozen=True)
class FlowScanReport:
    edges: int
    scanned: int
    valid: int
    cycle_flagged: int
    disagreements: tuple[tuple[int, ...], ...]

    @property
    def ok(self) -> bool:
        return not self.disagreements


def enumerate_configurations(
    graph: NetworkGraph,
    catalog: PathCatalog,
    path_cap: int = UNIVERSE_PATH_CAP,
) -> ConfigurationUniverse:
    """Backtrack over the catalog, keeping every subset that respects the usage constraints."""
    if len(catalog) > path_cap:
        raise ResourceLimitError(
            f'Configuration enumeration is limited to {path_cap} paths, catalog has {len(catalog)}.',
            details={'path_cap': path_cap, 'paths': len(catalog)},
        )
    masks = resource_masks(catalog)
    subsets: list[tuple[int, ...]] = []

    def extend(start: int, used: int, chosen: list[int]):
        subsets.append(tuple(chosen))
        for position in range(start, len(masks)):
            if masks[position] & used:
                continue
            chosen.append(position)
            extend(position + 1, used | masks[position], chosen)
            chosen.pop()

    extend(0, 0, [])
    configs = tuple(
        Configuration(graph=graph, paths=tuple(catalog[i] for i in subset))
        for subset in subsets
    )
    logger.debug('Universe of %d configurations over %d paths.', len(configs), len(catalog))
    return ConfigurationUniverse(graph=graph, configs=configs)


def solve_full_lp(universe: ConfigurationUniverse, links: LinkSet) -> Schedule:
    """
    Solve the max-min LP over every configuration.

    Configurations realizing pairs outside ``links`` are left out: dropping
    those paths yields another member of the universe with identical
    coverage, so the optimum is unchanged.
    """
    pairs = {link.pair for link in links}
    pool = ColumnPool(c for c in universe if set(c.realized_links) <= pairs)
    schedule, _ = solve_rmp(pool, links)
    return schedule


def exhaustive_flow_scan(graph: NetworkGraph, edge_cap: int = FLOW_SCAN_EDGE_CAP) -> FlowScanReport:
    """
    Compare the flow test against the path-set definition on all 2^|E| mappings.

    A mapping counts as a configuration by flow when it balances and its
    edges decompose into simple TR-paths; by definition when its edge set is
    the union of some feasible subset of catalog paths.
    """
    edge_count = len(graph.edges)
    if edge_count > edge_cap:
        raise ResourceLimitError(
            f'Flow scan is limited to {edge_cap} edges, graph has {edge_count}.',
            details={'edge_cap': edge_cap, 'edges': edge_count},
        )
    catalog = enumerate_paths(graph)
    universe = enumerate_configurations(graph, catalog, path_cap=max(UNIVERSE_PATH_CAP, len(catalog)))
    by_definition = {config.edge_indices for config in universe}

    valid = cycle_flagged = 0
    disagreements = []
    for bits in range(1 << edge_count):
        flow = FlowMapping(values=tuple((bits >> i) & 1 for i in range(edge_count)))
        result = check_flow(graph, flow)
        if result.ok and result.warnings:
            cycle_flagged += 1
        flow_says = result.ok and not result.warnings
        definition_says = frozenset(flow.selected) in by_definition
        valid += flow_says
        if flow_says != definition_says:
            logger.warning('Flow/definition disagreement on edges %s.', flow.selected)
            disagreements.append(flow.selected)

    return FlowScanReport(
        edges=edge_count,
        scanned=1 << edge_count,
        valid=valid,
        cycle_flagged=cycle_flagged,
        disagreements=tuple(disagreements),
    )


def full_enumeration_optimum(graph: NetworkGraph, links: LinkSet, catalog: Optional[PathCatalog] = None) -> float:
    if catalog is None:
        catalog = enumerate_paths(graph)
    catalog = catalog.with_priorities(links)
    return solve_full_lp(enumerate_configurations(graph, catalog), links).objective
