"""
JSON documents for networks and schedules, and the bench CSV layout.

Network file::

    {"format_version": 1,
     "nodes": [{"id": "tx1", "kind": "transmitter"}, ...],
     "edges": [{"source": "tx1", "target": "sw1", "attenuation_db": 1.0}, ...],
     "links": [{"transmitter": "tx1", "receiver": "rx1", "priority_weight": 1.0}]}

``links`` is optional; when omitted every realizable pair gets priority 1.
Node ids are strings in files and dense indices (file order) in memory.
"""
import hashlib
import json
import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .colgen import SolveReport
from .configuration import Configuration, check_flow, flow_to_paths, paths_to_flow
from .exceptions import FORMAT_VERSION, ParseError, ValidationError
from .network import (
    DEFAULT_PATH_CAP,
    Edge,
    LinkSet,
    NetworkGraph,
    Node,
    NodeKind,
    PathCatalog,
    ValidationResult,
    Violation,
    derive_links,
    enumerate_paths,
    make_path,
    path_weight,
    validate_graph,
)

logger = logging.getLogger(__name__)

BENCH_HEADER = (
    'scenario',
    'n_transmitters',
    'n_receivers',
    'n_switches',
    'seed',
    'edges',
    'links',
    'paths',
    'iterations',
    'pool_size',
    'wall_ms',
    'objective',
    'error',
)


@dataclass(frozen=True)
class LoadedNetwork:
    graph: NetworkGraph
    links: LinkSet
    catalog: PathCatalog
    document: dict

    @property
    def sha256(self) -> str:
        return compute_hash(network_to_document(self.graph, self.links))


def _require(mapping, key: str, kind, where: str):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ParseError(f'{where}: missing "{key}".')
    value = mapping[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ParseError(f'{where}: "{key}" must be {kind.__name__}, got {type(value).__name__}.')
    return value


def read_json(path) -> dict:
    try:
        with open(path, encoding='utf-8') as f:
            document = json.load(f)
    except OSError as exc:
        raise ParseError(f'Cannot read {path}: {exc}.') from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f'Malformed JSON in {path}: {exc}.') from exc
    if not isinstance(document, dict):
        raise ParseError(f'{path}: top level must be a JSON object.')
    return document


def graph_from_document(document: dict) -> tuple[NetworkGraph, Optional[dict[tuple[int, int], float]]]:
    """Build the graph (and explicit link priorities, if any) from a parsed network document."""
    raw_nodes = document.get('nodes')
    raw_edges = document.get('edges', [])
    if not isinstance(raw_nodes, list) or not isinstance(raw_edges, list):
        raise ParseError('Network document needs "nodes" and "edges" lists.')

    nodes = []
    ids: dict[str, Node] = {}
    for position, raw in enumerate(raw_nodes):
        node_id = _require(raw, 'id', str, f'nodes[{position}]')
        kind_name = _require(raw, 'kind', str, f'nodes[{position}]')
        try:
            kind = NodeKind(kind_name)
        except ValueError as exc:
            raise ParseError(f'nodes[{position}]: unknown kind "{kind_name}".') from exc
        if node_id in ids:
            raise ValidationError(f'Duplicate node id "{node_id}".')
        node = Node(index=position, kind=kind, name=node_id)
        ids[node_id] = node
        nodes.append(node)

    def lookup(node_id: str, where: str) -> Node:
        if node_id not in ids:
            raise ValidationError(f'{where}: unknown node "{node_id}".')
        return ids[node_id]

    edges = []
    for position, raw in enumerate(raw_edges):
        where = f'edges[{position}]'
        source = lookup(_require(raw, 'source', str, where), where)
        target = lookup(_require(raw, 'target', str, where), where)
        edges.append(Edge(source, target, _require(raw, 'attenuation_db', float, where)))

    priorities = None
    if document.get('links') is not None:
        if not isinstance(document['links'], list):
            raise ParseError('"links" must be a list.')
        priorities = {}
        for position, raw in enumerate(document['links']):
            where = f'links[{position}]'
            t = lookup(_require(raw, 'transmitter', str, where), where)
            r = lookup(_require(raw, 'receiver', str, where), where)
            weight = raw.get('priority_weight', 1.0)
            if isinstance(weight, bool) or not isinstance(weight, (int, float)):
                raise ParseError(f'{where}: "priority_weight" must be a number.')
            priorities[(t.index, r.index)] = float(weight)

    return NetworkGraph(nodes=tuple(nodes), edges=tuple(edges)), priorities


def load_network_document(document: dict, path_cap: int = DEFAULT_PATH_CAP) -> LoadedNetwork:
    graph, priorities = graph_from_document(document)
    validation = validate_graph(graph)
    if not validation.ok:
        raise ValidationError(
            'Network graph is invalid.',
            details=[v.to_dict() for v in validation.violations],
        )
    catalog = enumerate_paths(graph, path_cap)
    links = derive_links(graph, catalog, priorities)
    if priorities is not None:
        links = tuple(link for link in links if link.pair in priorities)
    return LoadedNetwork(graph=graph, links=links, catalog=catalog, document=document)


def load_network(path, path_cap: int = DEFAULT_PATH_CAP) -> LoadedNetwork:
    """Read, parse and validate a network file."""
    loaded = load_network_document(read_json(path), path_cap)
    logger.info(
        'Loaded %s: %d nodes, %d edges, %d links.',
        path, len(loaded.graph.nodes), len(loaded.graph.edges), len(loaded.links),
    )
    return loaded


def network_to_document(graph: NetworkGraph, links: Optional[LinkSet] = None, extra: Optional[dict] = None) -> dict:
    document = {
        'format_version': FORMAT_VERSION,
        'nodes': [{'id': node.label, 'kind': node.kind.value} for node in graph.nodes],
        'edges': [
            {'source': e.source.label, 'target': e.target.label, 'attenuation_db': e.attenuation_db}
            for e in graph.edges
        ],
    }
    if links is not None:
        document['links'] = [
            {'transmitter': l.transmitter.label, 'receiver': l.receiver.label, 'priority_weight': l.priority_weight}
            for l in links
        ]
    if extra:
        document.update(extra)
    return document


def schedule_to_document(report: SolveReport, links: LinkSet, network_sha256: str) -> dict:
    schedule = report.final_schedule
    return {
        'format_version': FORMAT_VERSION,
        'network_sha256': network_sha256,
        'objective': schedule.objective,
        'links': [
            {
                'transmitter': link.transmitter.label,
                'receiver': link.receiver.label,
                'priority_weight': link.priority_weight,
                'rate': schedule.per_link_rates[link.pair],
            }
            for link in links
        ],
        'columns': [
            {
                'fraction': fraction,
                'paths': [
                    {'nodes': [n.label for n in path.nodes], 'weight': path.weight}
                    for path in column.paths
                ],
            }
            for column, fraction in schedule.active_columns()
        ],
        'report': {
            'iterations': report.iterations,
            'pool_size': report.pool_size,
            'objective_trace': list(report.objective_trace),
            'pricing_node_counts': list(report.pricing_node_counts),
        },
    }


def compute_hash(document: dict) -> str:
    """Stable SHA-256 of a JSON document (key order does not matter)."""
    serialized = json.dumps(document, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(serialized.encode('utf-8')).hexdigest()


def dump_json(document: dict) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + '\n'


def write_text(text: str, path) -> None:
    Path(path).write_text(text, encoding='utf-8')


def validate_schedule_document(network: LoadedNetwork, document: dict) -> ValidationResult:
    """
    Check a schedule file against its network.

    Every listed path must be a TR-path of the graph, every column a
    configuration whose flow passes the unit-capacity test and decomposes
    back to the same edges, fractions must sum to one and the reported rates
    must match a recomputation.
    """
    graph = network.graph
    violations: list[Violation] = []

    if document.get('format_version') != FORMAT_VERSION:
        violations.append(Violation('format_version', f'Unsupported format_version {document.get("format_version")!r}.'))
    if document.get('network_sha256') != network.sha256:
        violations.append(Violation('network_mismatch', 'Schedule was not solved for this network.'))

    ids = {node.label: node for node in graph.nodes}
    priorities = {link.pair: link.priority_weight for link in network.links}
    columns = document.get('columns')
    if not isinstance(columns, list):
        return ValidationResult(violations=tuple(violations + [Violation('columns', '"columns" must be a list.')]))

    fractions = []
    rates = {pair: 0.0 for pair in priorities}
    for position, raw_column in enumerate(columns):
        where = f'columns[{position}]'
        fraction = raw_column.get('fraction') if isinstance(raw_column, dict) else None
        if isinstance(fraction, bool) or not isinstance(fraction, (int, float)) or fraction < -1e-12:
            violations.append(Violation('fraction', f'{where}: fraction must be a non-negative number.', where))
            continue
        fractions.append(float(fraction))

        paths = []
        for path_position, raw_path in enumerate(raw_column.get('paths') or []):
            path_where = f'{where}.paths[{path_position}]'
            names = raw_path.get('nodes') if isinstance(raw_path, dict) else None
            if not isinstance(names, list) or len(names) < 2 or any(name not in ids for name in names):
                violations.append(Violation('unknown_node', f'{path_where}: unknown or missing nodes.', path_where))
                continue
            hops = [(ids[a].index, ids[b].index) for a, b in zip(names, names[1:])]
            missing = [hop for hop in hops if hop not in graph.edge_position]
            if missing:
                violations.append(Violation('unknown_edge', f'{path_where}: no edge for hops {missing}.', path_where))
                continue
            try:
                path = make_path(graph, [graph.edge_position[hop] for hop in hops], 1.0)
            except ValidationError as exc:
                violations.append(Violation('invalid_path', f'{path_where}: {exc.message}', path_where))
                continue
            if path.pair not in priorities:
                violations.append(Violation('unknown_link', f'{path_where}: pair is not a scheduled link.', path_where))
                continue
            paths.append(replace(path, weight=path_weight(path.total_attenuation_db, priorities[path.pair])))

        try:
            config = Configuration(graph=graph, paths=tuple(paths))
        except ValidationError as exc:
            violations.append(Violation('not_configuration', f'{where}: {exc.message}', where))
            continue

        flow = paths_to_flow(config)
        flow_result = check_flow(graph, flow)
        if not flow_result.ok or flow_result.warnings:
            violations.append(Violation('flow', f'{where}: induced flow fails the unit-capacity test.', where))
            continue
        if flow_to_paths(graph, flow).edge_indices != config.edge_indices:
            violations.append(Violation('round_trip', f'{where}: flow does not decompose back to its paths.', where))
        for pair, path in config.realized_links.items():
            rates[pair] += fraction * path.weight

    if fractions and abs(math.fsum(fractions) - 1.0) > 1e-9:
        violations.append(Violation('fractions_sum', f'Fractions sum to {math.fsum(fractions)!r}, not 1.'))

    reported = {}
    for raw_link in document.get('links') or []:
        try:
            pair = (ids[raw_link['transmitter']].index, ids[raw_link['receiver']].index)
            reported[pair] = float(raw_link['rate'])
        except (KeyError, TypeError, ValueError):
            violations.append(Violation('links', f'Malformed link entry {raw_link!r}.'))
    for pair, rate in rates.items():
        if pair in reported and abs(reported[pair] - rate) > 1e-7 * max(1.0, abs(rate)):
            violations.append(Violation('rate', f'Reported rate {reported[pair]!r} for {pair} differs from {rate!r}.'))

    objective = document.get('objective')
    if isinstance(objective, (int, float)) and rates and objective > min(rates.values()) + 1e-9:
        violations.append(Violation('objective', f'Objective {objective!r} exceeds the minimum link rate.'))

    return ValidationResult(violations=tuple(violations))
