"""
Raw network graphs, links, TR-paths and path weights.

A raw network graph is a digraph over transmitters, switches and receivers
whose edges carry an attenuation in dB. Transmitters only emit, receivers
only absorb. Every value here is an immutable dataclass and every function is
pure.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .exceptions import ResourceLimitError, ValidationError, WeightDomainError

logger = logging.getLogger(__name__)

DEFAULT_PATH_CAP = 1_000_000
DEFAULT_PRIORITY = 1.0


class NodeKind(str, Enum):
    TRANSMITTER = 'transmitter'
    RECEIVER = 'receiver'
    SWITCH = 'switch'


@dataclass(frozen=True)
class Node:
    index: int
    kind: NodeKind
    name: str = ''

    @property
    def label(self) -> str:
        return self.name or f'{self.kind.value[:2]}{self.index}'


@dataclass(frozen=True)
class Edge:
    source: Node
    target: Node
    attenuation_db: float

    @property
    def pair(self) -> tuple[int, int]:
        return self.source.index, self.target.index


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    subject: Optional[str] = None

    def to_dict(self) -> dict:
        return {'code': self.code, 'message': self.message, 'subject': self.subject}


@dataclass(frozen=True)
class ValidationResult:
    """Outcome of a structural check. Violations are failures, warnings are not."""

    violations: tuple[Violation, ...] = ()
    warnings: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            'ok': self.ok,
            'violations': [v.to_dict() for v in self.violations],
            'warnings': [w.to_dict() for w in self.warnings],
        }


@dataclass(frozen=True)
class NetworkGraph:
    nodes: tuple[Node, ...] = ()
    edges: tuple[Edge, ...] = ()

    @cached_property
    def node_by_index(self) -> dict[int, Node]:
        return {node.index: node for node in self.nodes}

    @cached_property
    def edge_position(self) -> dict[tuple[int, int], int]:
        """Map (source index, target index) to the edge's position in ``edges``."""
        positions = {}
        for position, edge in enumerate(self.edges):
            positions.setdefault(edge.pair, position)
        return positions

    @cached_property
    def out_edges(self) -> dict[int, tuple[int, ...]]:
        """Outgoing edge positions per node, sorted by target index."""
        grouped: dict[int, list[int]] = {node.index: [] for node in self.nodes}
        for position, edge in enumerate(self.edges):
            grouped.setdefault(edge.source.index, []).append(position)
        return {
            index: tuple(sorted(positions, key=lambda p: (self.edges[p].target.index, p)))
            for index, positions in grouped.items()
        }

    def nodes_of_kind(self, kind: NodeKind) -> tuple[Node, ...]:
        return tuple(sorted((n for n in self.nodes if n.kind is kind), key=lambda n: n.index))

    @property
    def transmitters(self) -> tuple[Node, ...]:
        return self.nodes_of_kind(NodeKind.TRANSMITTER)

    @property
    def receivers(self) -> tuple[Node, ...]:
        return self.nodes_of_kind(NodeKind.RECEIVER)

    @property
    def switches(self) -> tuple[Node, ...]:
        return self.nodes_of_kind(NodeKind.SWITCH)


@dataclass(frozen=True)
class Link:
    transmitter: Node
    receiver: Node
    priority_weight: float = DEFAULT_PRIORITY

    @property
    def pair(self) -> tuple[int, int]:
        return self.transmitter.index, self.receiver.index


LinkSet = tuple[Link, ...]


@dataclass(frozen=True)
class TrPath:
    """A simple transmitter-to-receiver path, stored as graph edges plus their positions."""

    edges: tuple[Edge, ...]
    edge_indices: tuple[int, ...]
    weight: float = field(default=0.0, compare=False)

    @property
    def transmitter(self) -> Node:
        return self.edges[0].source

    @property
    def receiver(self) -> Node:
        return self.edges[-1].target

    @property
    def pair(self) -> tuple[int, int]:
        return self.transmitter.index, self.receiver.index

    @property
    def nodes(self) -> tuple[Node, ...]:
        return (self.edges[0].source,) + tuple(edge.target for edge in self.edges)

    @property
    def node_indices(self) -> tuple[int, ...]:
        return tuple(node.index for node in self.nodes)

    @property
    def total_attenuation_db(self) -> float:
        return sum(edge.attenuation_db for edge in self.edges)


@dataclass(frozen=True)
class PathCatalog:
    """Every simple TR-path of a graph, in lexicographic order of node index sequences."""

    graph: NetworkGraph
    paths: tuple[TrPath, ...] = ()

    @cached_property
    def by_pair(self) -> dict[tuple[int, int], tuple[int, ...]]:
        grouped: dict[tuple[int, int], list[int]] = {}
        for position, path in enumerate(self.paths):
            grouped.setdefault(path.pair, []).append(position)
        return {pair: tuple(positions) for pair, positions in grouped.items()}

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def __getitem__(self, position: int) -> TrPath:
        return self.paths[position]

    def paths_for(self, pair: tuple[int, int]) -> tuple[TrPath, ...]:
        return tuple(self.paths[p] for p in self.by_pair.get(pair, ()))

    def with_priorities(self, links: Iterable[Link]) -> 'PathCatalog':
        """Re-weight every path with its own link's priority; pairs outside ``links`` weigh 0."""
        priorities = {link.pair: link.priority_weight for link in links}
        weighted = tuple(
            replace(path, weight=path_weight(path.total_attenuation_db, priorities.get(path.pair, 0.0)))
            for path in self.paths
        )
        return PathCatalog(graph=self.graph, paths=weighted)


def validate_graph(graph: NetworkGraph) -> ValidationResult:
    """Check the raw-network-graph rules. Never raises: every breach is returned."""
    violations = []

    seen: dict[int, Node] = {}
    for node in graph.nodes:
        if node.index < 0:
            violations.append(Violation('negative_index', f'Node {node.label} has a negative index.', node.label))
        if node.index in seen:
            violations.append(Violation(
                'duplicate_node', f'Node index {node.index} is used more than once.', node.label,
            ))
        seen[node.index] = node

    pairs = set()
    for edge in graph.edges:
        subject = f'{edge.source.label}->{edge.target.label}'
        for end in (edge.source, edge.target):
            if seen.get(end.index) != end:
                violations.append(Violation('unknown_node', f'Edge {subject} references unknown node {end.label}.', subject))
        if edge.source.kind is NodeKind.RECEIVER:
            violations.append(Violation('receiver_out_edge', f'Receiver {edge.source.label} has outgoing edge {subject}.', subject))
        if edge.target.kind is NodeKind.TRANSMITTER:
            violations.append(Violation('transmitter_in_edge', f'Transmitter {edge.target.label} has ingoing edge {subject}.', subject))
        if not (math.isfinite(edge.attenuation_db) and edge.attenuation_db > 0):
            violations.append(Violation(
                'attenuation', f'Edge {subject} attenuation must be positive and finite, got {edge.attenuation_db!r}.', subject,
            ))
        if edge.pair in pairs:
            violations.append(Violation('duplicate_edge', f'Edge {subject} appears more than once.', subject))
        pairs.add(edge.pair)

    return ValidationResult(violations=tuple(violations))


def make_path(graph: NetworkGraph, edge_indices: Iterable[int], priority_weight: float = DEFAULT_PRIORITY) -> TrPath:
    """Build a TrPath from edge positions, checking it is a simple TR-path of ``graph``."""
    edge_indices = tuple(edge_indices)
    if not edge_indices:
        raise ValidationError('A TR-path needs at least one edge.')
    try:
        edges = tuple(graph.edges[i] for i in edge_indices)
    except IndexError as exc:
        raise ValidationError(f'Edge position out of range in {edge_indices}.') from exc

    for previous, current in zip(edges, edges[1:]):
        if previous.target != current.source:
            raise ValidationError(f'Edges {previous.pair} and {current.pair} are not connected.')
    path = TrPath(edges=edges, edge_indices=edge_indices)
    nodes = path.nodes
    if len({n.index for n in nodes}) != len(nodes):
        raise ValidationError(f'Path {path.node_indices} revisits a vertex.')
    if nodes[0].kind is not NodeKind.TRANSMITTER or nodes[-1].kind is not NodeKind.RECEIVER:
        raise ValidationError(f'Path {path.node_indices} must run from a transmitter to a receiver.')
    if any(n.kind is not NodeKind.SWITCH for n in nodes[1:-1]):
        raise ValidationError(f'Path {path.node_indices} has a non-switch intermediate node.')
    return replace(path, weight=path_weight(path.total_attenuation_db, priority_weight))


def enumerate_paths(graph: NetworkGraph, path_cap: int = DEFAULT_PATH_CAP) -> PathCatalog:
    """
    Enumerate every simple TR-path by depth-first search.

    Transmitters are visited in index order and outgoing edges in target
    order, so the catalog comes out lexicographically sorted by node index
    sequence. Weights use priority 1; see ``PathCatalog.with_priorities``.
    """
    found: list[tuple[int, ...]] = []

    def walk(node: Node, visited: set[int], trail: list[int]):
        for position in graph.out_edges.get(node.index, ()):
            target = graph.edges[position].target
            if target.index in visited:
                continue
            trail.append(position)
            if target.kind is NodeKind.RECEIVER:
                found.append(tuple(trail))
                if len(found) > path_cap:
                    raise ResourceLimitError(
                        f'Graph has more than {path_cap} simple TR-paths.',
                        details={'path_cap': path_cap},
                    )
            elif target.kind is NodeKind.SWITCH:
                visited.add(target.index)
                walk(target, visited, trail)
                visited.discard(target.index)
            trail.pop()

    for transmitter in graph.transmitters:
        walk(transmitter, {transmitter.index}, [])

    paths = tuple(make_path(graph, trail) for trail in found)
    logger.debug('Enumerated %d TR-paths over %d edges.', len(paths), len(graph.edges))
    return PathCatalog(graph=graph, paths=paths)


def derive_links(
    graph: NetworkGraph,
    catalog: PathCatalog,
    priorities: Optional[Mapping[tuple[int, int], float]] = None,
) -> LinkSet:
    """Return the realizable (transmitter, receiver) pairs, ordered by node index."""
    priorities = dict(priorities or {})
    unrealizable = sorted(pair for pair in priorities if pair not in catalog.by_pair)
    if unrealizable:
        raise ValidationError(
            f'Priorities reference unrealizable pairs: {unrealizable}.',
            details={'pairs': [list(pair) for pair in unrealizable]},
        )
    for pair, weight in priorities.items():
        if not (math.isfinite(weight) and weight >= 0):
            raise ValidationError(f'Priority weight for {pair} must be finite and non-negative, got {weight!r}.')

    return tuple(
        Link(
            transmitter=graph.node_by_index[t],
            receiver=graph.node_by_index[r],
            priority_weight=float(priorities.get((t, r), DEFAULT_PRIORITY)),
        )
        for t, r in sorted(catalog.by_pair)
    )


def transmittance(total_attenuation_db: float) -> float:
    return 10.0 ** (-total_attenuation_db / 10.0)


def key_capacity(total_attenuation_db: float) -> float:
    """Repeaterless secret-key capacity -log2(1 - eta) of a channel with the given loss."""
    if not (math.isfinite(total_attenuation_db) and total_attenuation_db > 0):
        raise WeightDomainError(f'Attenuation must be positive and finite, got {total_attenuation_db!r}.')
    return -math.log1p(-transmittance(total_attenuation_db)) / math.log(2.0)


def path_weight(total_attenuation_db: Optional[float], priority_weight: float = DEFAULT_PRIORITY) -> float:
    """Priority-weighted key capacity of a path; an absent path (``None``) weighs 0."""
    if total_attenuation_db is None:
        return 0.0
    if priority_weight < 0:
        raise WeightDomainError(f'Priority weight must be non-negative, got {priority_weight!r}.')
    capacity = key_capacity(total_attenuation_db)
    return priority_weight * capacity
