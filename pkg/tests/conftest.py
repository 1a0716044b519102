import json
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from switching.configuration import Configuration
from switching.io import load_network
from switching.network import Edge, NetworkGraph, Node, NodeKind, PathCatalog

FIXTURES = Path(__file__).parent / 'fixtures'

KINDS = {'tx': NodeKind.TRANSMITTER, 'sw': NodeKind.SWITCH, 'rx': NodeKind.RECEIVER}

MESH_EDGES = [
    ('tx1', 'sw1', 1.0),
    ('tx2', 'sw1', 1.0),
    ('tx3', 'sw2', 1.0),
    ('sw1', 'sw2', 1.0),
    ('sw1', 'sw3', 1.0),
    ('sw2', 'sw3', 1.0),
    ('sw3', 'rx1', 1.0),
    ('sw3', 'rx2', 1.0),
    ('sw2', 'rx3', 1.0),
]

MESH_NODES = ['tx1', 'tx2', 'tx3', 'sw1', 'sw2', 'sw3', 'rx1', 'rx2', 'rx3']

# Total attenuation whose key capacity is exactly 1 bit (eta = 1/2).
HALF_DB = 3.0102999566398120


def build_graph(edges, nodes=()):
    """Graph from (source, target, attenuation) triples; kinds come from the tx/sw/rx name prefix."""
    names = list(nodes)
    for source, target, _ in edges:
        for name in (source, target):
            if name not in names:
                names.append(name)
    by_name = {name: Node(index, KINDS[name[:2]], name) for index, name in enumerate(names)}
    return NetworkGraph(
        nodes=tuple(by_name.values()),
        edges=tuple(Edge(by_name[s], by_name[t], float(a)) for s, t, a in edges),
    )


def random_raw_graph(rng, n_transmitters, n_switches, n_receivers, p, max_edges=None):
    """
    Arbitrary raw network graph: direct tx->rx edges and switch cycles allowed.

    Edge candidates are drawn in a fixed order and the list is cut at ``max_edges``.
    """
    names = (
        [f'tx{i + 1}' for i in range(n_transmitters)]
        + [f'sw{i + 1}' for i in range(n_switches)]
        + [f'rx{i + 1}' for i in range(n_receivers)]
    )
    edges = []
    for source in names:
        if source.startswith('rx'):
            continue
        for target in names:
            if target == source or target.startswith('tx'):
                continue
            if rng.random() < p:
                edges.append((source, target, float(rng.uniform(0.5, 6.0))))
    if max_edges is not None:
        edges = edges[:max_edges]
    return build_graph(edges, nodes=names)


def reweighted(catalog, weights):
    """Catalog copy with explicit path weights, position by position."""
    return PathCatalog(
        graph=catalog.graph,
        paths=tuple(replace(path, weight=float(w)) for path, w in zip(catalog, weights)),
    )


def column(catalog, *positions):
    return Configuration(graph=catalog.graph, paths=tuple(catalog[p] for p in positions))


@pytest.fixture()
def make_graph():
    return build_graph


@pytest.fixture()
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture()
def mesh_graph():
    return build_graph(MESH_EDGES, nodes=MESH_NODES)


@pytest.fixture()
def chain_graph():
    return build_graph([('tx1', 'sw1', HALF_DB / 2), ('sw1', 'rx1', HALF_DB / 2)])


@pytest.fixture()
def fixture_path():
    def _path(name):
        return FIXTURES / name
    return _path


@pytest.fixture()
def mesh_network():
    return load_network(FIXTURES / 'mesh.json')


@pytest.fixture()
def mesh_expected():
    return json.loads((FIXTURES / 'mesh_expected.json').read_text(encoding='utf-8'))


@pytest.fixture()
def network_file(tmp_path):
    """Write a network document to a temp file and return its path."""
    def _make(document, name='network.json'):
        p = tmp_path / name
        p.write_text(json.dumps(document), encoding='utf-8')
        return p
    return _make
