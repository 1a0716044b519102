"""
Network configurations as edge-disjoint path sets and as unit-capacity flows.

A configuration is a set of pairwise edge-disjoint simple TR-paths in which
every transmitter and every receiver is used at most once. Equivalently it
is a 0/1 edge mapping with transmitter balance in [-1, 0], receiver balance
in [0, 1] and switch conservation, whose selected edges split into simple
TR-paths.
"""
import hashlib
import json
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

from .exceptions import DecompositionError, ValidationError
from .network import (
    DEFAULT_PRIORITY,
    Link,
    NetworkGraph,
    NodeKind,
    TrPath,
    ValidationResult,
    Violation,
    make_path,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlowMapping:
    """0/1 value per edge, indexed by position in the owning graph's edge list."""

    values: tuple[int, ...]

    @classmethod
    def zeros(cls, graph: NetworkGraph) -> 'FlowMapping':
        return cls(values=(0,) * len(graph.edges))

    @classmethod
    def from_edges(cls, graph: NetworkGraph, edge_indices: Iterable[int]) -> 'FlowMapping':
        chosen = set(edge_indices)
        return cls(values=tuple(1 if i in chosen else 0 for i in range(len(graph.edges))))

    @property
    def selected(self) -> tuple[int, ...]:
        return tuple(i for i, value in enumerate(self.values) if value)


def _path_key(paths: Iterable[TrPath]) -> str:
    serialized = json.dumps(sorted(list(p.edge_indices) for p in paths), separators=(',', ':'))
    return hashlib.sha256(serialized.encode('utf-8')).hexdigest()


EMPTY_CONFIG_KEY = _path_key(())


@dataclass(frozen=True, eq=False)
class Configuration:
    """
    An edge-disjoint set of TR-paths of ``graph``.

    Paths are kept in canonical order (node index sequence). Construction
    fails with ``ValidationError`` if two paths share an edge, a
    transmitter or a receiver. Equality and hashing follow ``config_key``.
    """

    graph: NetworkGraph
    paths: tuple[TrPath, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.paths, key=lambda p: p.node_indices))
        object.__setattr__(self, 'paths', ordered)

        used_edges: set[int] = set()
        used_tx: set[int] = set()
        used_rx: set[int] = set()
        for path in ordered:
            shared = used_edges.intersection(path.edge_indices)
            if shared:
                raise ValidationError(f'Paths share edges {sorted(shared)}.')
            if path.transmitter.index in used_tx:
                raise ValidationError(f'Transmitter {path.transmitter.label} is used by two paths.')
            if path.receiver.index in used_rx:
                raise ValidationError(f'Receiver {path.receiver.label} is used by two paths.')
            used_edges.update(path.edge_indices)
            used_tx.add(path.transmitter.index)
            used_rx.add(path.receiver.index)

    @classmethod
    def empty(cls, graph: NetworkGraph) -> 'Configuration':
        return cls(graph=graph)

    @cached_property
    def key(self) -> str:
        return _path_key(self.paths)

    @cached_property
    def realized_links(self) -> dict[tuple[int, int], TrPath]:
        """The path P(M, l) of every (transmitter, receiver) pair this configuration realizes."""
        return {path.pair: path for path in self.paths}

    @cached_property
    def column_weights(self) -> dict[tuple[int, int], float]:
        return {pair: path.weight for pair, path in self.realized_links.items()}

    @property
    def edge_indices(self) -> frozenset[int]:
        return frozenset(i for path in self.paths for i in path.edge_indices)

    def weight_for(self, pair: tuple[int, int]) -> float:
        return self.column_weights.get(pair, 0.0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __len__(self) -> int:
        return len(self.paths)

    def __repr__(self) -> str:
        return f'Configuration({[p.node_indices for p in self.paths]})'


def config_key(config: Configuration) -> str:
    """Stable identity token; the empty configuration maps to ``EMPTY_CONFIG_KEY``."""
    return config.key


def _balance_violations(graph: NetworkGraph, flow: FlowMapping) -> list[Violation]:
    balance = {node.index: 0 for node in graph.nodes}
    for position, value in enumerate(flow.values):
        if value:
            edge = graph.edges[position]
            balance[edge.source.index] -= 1
            balance[edge.target.index] += 1

    violations = []
    for node in graph.nodes:
        net = balance[node.index]
        if node.kind is NodeKind.TRANSMITTER:
            ok = -1 <= net <= 0
        elif node.kind is NodeKind.RECEIVER:
            ok = 0 <= net <= 1
        else:
            ok = net == 0
        if not ok:
            violations.append(Violation(
                f'{node.kind.value}_balance',
                f'{node.kind.value.capitalize()} {node.label} has imbalance {net:+d}.',
                node.label,
            ))
    return violations


def _decompose(graph: NetworkGraph, selected: Iterable[int]) -> Optional[list[tuple[int, ...]]]:
    """
    Split the selected edges into simple TR-paths covering all of them.

    Depth-first with backtracking: transmitters in index order, outgoing
    edges in target order, no vertex revisited. Returns the first complete
    decomposition, or None if some edge cannot be covered.
    """
    selected = set(selected)
    out: dict[int, list[int]] = {}
    for index, positions in graph.out_edges.items():
        out[index] = [p for p in positions if p in selected]
    starts = [t for t in graph.transmitters if out.get(t.index)]

    used: set[int] = set()
    paths: list[tuple[int, ...]] = []

    def start(i: int) -> bool:
        if i == len(starts):
            return len(used) == len(selected)
        transmitter = starts[i]
        return walk(i, transmitter, {transmitter.index}, [])

    def walk(i: int, node, visited: set[int], trail: list[int]) -> bool:
        if node.kind is NodeKind.RECEIVER:
            paths.append(tuple(trail))
            if start(i + 1):
                return True
            paths.pop()
            return False
        for position in out.get(node.index, ()):
            if position in used:
                continue
            target = graph.edges[position].target
            if target.index in visited or target.kind is NodeKind.TRANSMITTER:
                continue
            used.add(position)
            trail.append(position)
            visited.add(target.index)
            if walk(i, target, visited, trail):
                return True
            used.discard(position)
            trail.pop()
            visited.discard(target.index)
        return False

    return paths if start(0) else None


def check_flow(graph: NetworkGraph, flow: FlowMapping) -> ValidationResult:
    """
    Check the unit-capacity flow conditions at every node.

    Balance breaches are violations. A mapping that balances but leaves
    edges no simple TR-path decomposition can cover (switch-only cycles) is
    reported under the ``uncovered`` warning.
    """
    if len(flow.values) != len(graph.edges):
        return ValidationResult(violations=(Violation(
            'domain', f'Flow has {len(flow.values)} values for {len(graph.edges)} edges.',
        ),))
    bad_values = [i for i, value in enumerate(flow.values) if value not in (0, 1)]
    if bad_values:
        return ValidationResult(violations=(Violation(
            'binary', f'Flow values at edges {bad_values} are not 0 or 1.',
        ),))

    violations = _balance_violations(graph, flow)
    if violations:
        return ValidationResult(violations=tuple(violations))

    if _decompose(graph, flow.selected) is None:
        subjects = [f'{graph.edges[i].source.label}->{graph.edges[i].target.label}' for i in flow.selected]
        return ValidationResult(warnings=(Violation(
            'uncovered',
            'Balanced flow whose edges do not split into simple TR-paths (switch-only cycle).',
            ','.join(subjects),
        ),))
    return ValidationResult()


def is_configuration_flow(graph: NetworkGraph, flow: FlowMapping) -> bool:
    result = check_flow(graph, flow)
    return result.ok and not result.warnings


def flow_to_paths(
    graph: NetworkGraph,
    flow: FlowMapping,
    links: Optional[Iterable[Link]] = None,
) -> Configuration:
    """Decompose a valid flow into its configuration; path weights use ``links`` priorities when given."""
    result = check_flow(graph, flow)
    if not result.ok:
        raise ValidationError(
            'Flow violates the unit-capacity conditions.',
            details=[v.to_dict() for v in result.violations],
        )
    decomposition = _decompose(graph, flow.selected)
    if decomposition is None:
        logger.warning('Flow over edges %s contains a switch-only cycle.', flow.selected)
        raise DecompositionError(
            'Selected edges are not covered by edge-disjoint simple TR-paths.',
            details={'edges': list(flow.selected)},
        )

    priorities = {link.pair: link.priority_weight for link in links} if links is not None else None
    paths = []
    for trail in decomposition:
        pair = (graph.edges[trail[0]].source.index, graph.edges[trail[-1]].target.index)
        priority = DEFAULT_PRIORITY if priorities is None else priorities.get(pair, 0.0)
        paths.append(make_path(graph, trail, priority))
    return Configuration(graph=graph, paths=tuple(paths))


def paths_to_flow(config: Configuration) -> FlowMapping:
    return FlowMapping.from_edges(config.graph, config.edge_indices)
