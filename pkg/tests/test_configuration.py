import pytest

from switching.configuration import (
    EMPTY_CONFIG_KEY,
    Configuration,
    FlowMapping,
    check_flow,
    config_key,
    flow_to_paths,
    is_configuration_flow,
    paths_to_flow,
)
from switching.exceptions import DecompositionError, ValidationError
from switching.instance_gen import GenSpec, generate
from switching.network import Link, enumerate_paths, make_path
from switching.pricing import is_feasible
from tests.conftest import build_graph, random_raw_graph

# Mesh edge positions: 0 tx1-sw1, 1 tx2-sw1, 2 tx3-sw2, 3 sw1-sw2, 4 sw1-sw3,
# 5 sw2-sw3, 6 sw3-rx1, 7 sw3-rx2, 8 sw2-rx3.
HIGHLIGHTED = (0, 4, 7)


def random_configuration(rng, catalog):
    order = rng.permutation(len(catalog))
    chosen = []
    for position in order:
        if is_feasible(catalog, chosen + [int(position)]):
            chosen.append(int(position))
        if rng.random() < 0.2:
            break
    return Configuration(graph=catalog.graph, paths=tuple(catalog[i] for i in chosen))


def shares_switch(config):
    seen = set()
    for path in config.paths:
        inner = set(path.node_indices[1:-1])
        if seen & inner:
            return True
        seen |= inner
    return False


# ---------------------------------------------------------------------------
# check_flow
# ---------------------------------------------------------------------------

class TestCheckFlow:
    def test_zero_flow_is_valid(self, mesh_graph):
        result = check_flow(mesh_graph, FlowMapping.zeros(mesh_graph))
        assert result.ok
        assert result.warnings == ()

    def test_dangling_switch_edge(self, mesh_graph):
        result = check_flow(mesh_graph, FlowMapping.from_edges(mesh_graph, [3]))
        assert not result.ok
        assert [(v.code, v.subject) for v in result.violations] == [
            ('switch_balance', 'sw1'),
            ('switch_balance', 'sw2'),
        ]

    def test_highlighted_path(self, mesh_graph):
        assert is_configuration_flow(mesh_graph, FlowMapping.from_edges(mesh_graph, HIGHLIGHTED))

    def test_transmitter_cannot_emit_twice(self):
        graph = build_graph([('tx1', 'rx1', 1.0), ('tx1', 'rx2', 1.0)])
        result = check_flow(graph, FlowMapping(values=(1, 1)))
        assert [v.code for v in result.violations] == ['transmitter_balance']

    def test_receiver_cannot_absorb_twice(self):
        graph = build_graph([('tx1', 'rx1', 1.0), ('tx2', 'rx1', 1.0)])
        result = check_flow(graph, FlowMapping(values=(1, 1)))
        assert [v.code for v in result.violations] == ['receiver_balance']

    def test_wrong_length(self, mesh_graph):
        result = check_flow(mesh_graph, FlowMapping(values=(0, 1)))
        assert [v.code for v in result.violations] == ['domain']

    def test_non_binary(self, mesh_graph):
        result = check_flow(mesh_graph, FlowMapping(values=(2,) + (0,) * 8))
        assert [v.code for v in result.violations] == ['binary']

    def test_switch_cycle_is_flagged(self):
        graph = build_graph([('tx1', 'sw1', 1.0), ('sw1', 'rx1', 1.0), ('sw2', 'sw3', 1.0), ('sw3', 'sw2', 1.0)])
        result = check_flow(graph, FlowMapping(values=(1, 1, 1, 1)))
        assert result.ok
        assert [w.code for w in result.warnings] == ['uncovered']
        assert not is_configuration_flow(graph, FlowMapping(values=(1, 1, 1, 1)))


# ---------------------------------------------------------------------------
# flow_to_paths / paths_to_flow
# ---------------------------------------------------------------------------

class TestFlowToPaths:
    def test_zero_flow_gives_empty_configuration(self, mesh_graph):
        config = flow_to_paths(mesh_graph, FlowMapping.zeros(mesh_graph))
        assert len(config) == 0
        assert config_key(config) == EMPTY_CONFIG_KEY

    def test_highlighted_path(self, mesh_graph):
        config = flow_to_paths(mesh_graph, FlowMapping.from_edges(mesh_graph, HIGHLIGHTED))
        assert len(config) == 1
        assert [n.label for n in config.paths[0].nodes] == ['tx1', 'sw1', 'sw3', 'rx2']

    def test_two_disjoint_paths(self, mesh_graph):
        config = flow_to_paths(mesh_graph, FlowMapping.from_edges(mesh_graph, [0, 4, 6, 2, 8]))
        assert [[n.label for n in p.nodes] for p in config.paths] == [
            ['tx1', 'sw1', 'sw3', 'rx1'],
            ['tx3', 'sw2', 'rx3'],
        ]

    def test_backtracks_over_shared_switches(self):
        # sw1 and sw3 each carry two paths; taking sw1->rx2 first strands the sw1-sw2-sw3 cycle.
        graph = build_graph(
            [
                ('tx1', 'sw1', 1.0), ('sw1', 'sw2', 1.0), ('sw2', 'sw3', 1.0), ('sw3', 'rx1', 1.0),
                ('tx2', 'sw3', 1.0), ('sw3', 'sw1', 1.0), ('sw1', 'rx2', 1.0),
            ],
            nodes=['tx1', 'tx2', 'sw1', 'rx2', 'sw2', 'sw3', 'rx1'],
        )
        config = flow_to_paths(graph, FlowMapping(values=(1,) * 7))
        assert [[n.label for n in p.nodes] for p in config.paths] == [
            ['tx1', 'sw1', 'sw2', 'sw3', 'rx1'],
            ['tx2', 'sw3', 'sw1', 'rx2'],
        ]

    def test_switch_cycle_raises(self):
        graph = build_graph([('tx1', 'sw1', 1.0), ('sw1', 'rx1', 1.0), ('sw2', 'sw3', 1.0), ('sw3', 'sw2', 1.0)])
        with pytest.raises(DecompositionError) as exc_info:
            flow_to_paths(graph, FlowMapping(values=(1, 1, 1, 1)))
        assert exc_info.value.exit_code == 3

    def test_invalid_flow_raises(self, mesh_graph):
        with pytest.raises(ValidationError):
            flow_to_paths(mesh_graph, FlowMapping.from_edges(mesh_graph, [3]))

    def test_link_priorities_scale_weights(self, mesh_graph):
        flow = FlowMapping.from_edges(mesh_graph, HIGHLIGHTED)
        plain = flow_to_paths(mesh_graph, flow)
        (pair,) = plain.realized_links
        links = [Link(mesh_graph.node_by_index[pair[0]], mesh_graph.node_by_index[pair[1]], 3.0)]
        weighted = flow_to_paths(mesh_graph, flow, links)
        assert weighted.weight_for(pair) == pytest.approx(3.0 * plain.weight_for(pair))

    def test_paths_to_flow_of_empty(self, mesh_graph):
        assert paths_to_flow(Configuration.empty(mesh_graph)) == FlowMapping.zeros(mesh_graph)

    def test_paths_to_flow_marks_path_edges(self, mesh_graph):
        config = Configuration(graph=mesh_graph, paths=(make_path(mesh_graph, HIGHLIGHTED),))
        assert paths_to_flow(config).selected == HIGHLIGHTED


class TestRoundTrips:
    def test_configurations_survive_flow_round_trip(self, rng):
        checked = exact = 0
        seed = 0
        while checked < 1000:
            seed += 1
            spec = GenSpec(
                n_transmitters=int(rng.integers(1, 5)),
                n_receivers=int(rng.integers(1, 5)),
                n_switches=int(rng.integers(1, 5)),
                seed=seed,
            )
            graph = generate(spec)
            catalog = enumerate_paths(graph)
            if not len(catalog):
                continue
            for _ in range(10):
                config = random_configuration(rng, catalog)
                flow = paths_to_flow(config)
                assert is_configuration_flow(graph, flow)
                decomposed = flow_to_paths(graph, flow)
                assert paths_to_flow(decomposed) == flow
                if not shares_switch(config):
                    assert decomposed == config
                    exact += 1
                checked += 1
        assert exact > 0

    def test_valid_flows_survive_path_round_trip(self, rng):
        seen = 0
        for _ in range(200):
            graph = random_raw_graph(rng, 2, 3, 2, p=0.4, max_edges=10)
            candidates = [FlowMapping.zeros(graph)] + [
                FlowMapping(values=tuple(int(v) for v in rng.integers(0, 2, len(graph.edges))))
                for _ in range(20)
            ]
            for flow in candidates:
                if not is_configuration_flow(graph, flow):
                    continue
                assert paths_to_flow(flow_to_paths(graph, flow)) == flow
                seen += 1
        assert seen > 0


# ---------------------------------------------------------------------------
# Configuration and config_key
# ---------------------------------------------------------------------------

class TestConfigKey:
    def test_path_order_does_not_matter(self, mesh_graph):
        a = make_path(mesh_graph, [0, 4, 6])
        b = make_path(mesh_graph, [2, 8])
        first = Configuration(graph=mesh_graph, paths=(a, b))
        second = Configuration(graph=mesh_graph, paths=(b, a))
        assert config_key(first) == config_key(second)
        assert first == second
        assert len({first, second}) == 1

    def test_one_edge_difference_changes_key(self, mesh_graph):
        first = Configuration(graph=mesh_graph, paths=(make_path(mesh_graph, [0, 4, 6]),))
        second = Configuration(graph=mesh_graph, paths=(make_path(mesh_graph, [0, 4, 7]),))
        assert config_key(first) != config_key(second)

    def test_empty_key_is_fixed(self, mesh_graph, chain_graph):
        assert config_key(Configuration.empty(mesh_graph)) == EMPTY_CONFIG_KEY
        assert config_key(Configuration.empty(chain_graph)) == EMPTY_CONFIG_KEY

    def test_shared_edge_rejected(self, mesh_graph):
        with pytest.raises(ValidationError):
            Configuration(graph=mesh_graph, paths=(make_path(mesh_graph, [0, 4, 6]), make_path(mesh_graph, [1, 4, 7])))

    def test_shared_transmitter_rejected(self):
        graph = build_graph([('tx1', 'rx1', 1.0), ('tx1', 'rx2', 1.0)])
        with pytest.raises(ValidationError):
            Configuration(graph=graph, paths=(make_path(graph, [0]), make_path(graph, [1])))

    def test_shared_receiver_rejected(self):
        graph = build_graph([('tx1', 'rx1', 1.0), ('tx2', 'rx1', 1.0)])
        with pytest.raises(ValidationError):
            Configuration(graph=graph, paths=(make_path(graph, [0]), make_path(graph, [1])))

    def test_shared_switch_is_allowed(self, mesh_graph):
        config = Configuration(
            graph=mesh_graph,
            paths=(make_path(mesh_graph, [0, 3, 5, 6]), make_path(mesh_graph, [2, 8])),
        )
        assert len(config) == 2
        assert config.edge_indices == frozenset({0, 2, 3, 5, 6, 8})
