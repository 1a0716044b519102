import pytest

from switching.exceptions import ResourceLimitError, ValidationError
from switching.master_lp import DualPrices
from switching.network import derive_links, enumerate_paths
from switching.pricing import (
    PricingAssignment,
    PricingInstance,
    TerminationCertificate,
    assignment_to_configuration,
    is_feasible,
    pricing_oracle,
    solve_pricing,
    termination_epsilon,
)
from tests.conftest import build_graph, random_raw_graph, reweighted


def instance_for(catalog, mu, gamma=0.0):
    return PricingInstance.build(catalog, DualPrices(mu=mu, gamma=gamma))


def uniform_mu(links):
    return {link.pair: 1.0 / len(links) for link in links}


def random_instance(rng):
    """Random graph (at most 12 paths) with random non-negative duals, some of them zero."""
    while True:
        graph = random_raw_graph(
            rng,
            n_transmitters=int(rng.integers(1, 4)),
            n_switches=int(rng.integers(1, 4)),
            n_receivers=int(rng.integers(1, 4)),
            p=float(rng.uniform(0.3, 0.7)),
            max_edges=12,
        )
        catalog = enumerate_paths(graph)
        if 0 < len(catalog) <= 12:
            break
    links = derive_links(graph, catalog)
    raw = {link.pair: (0.0 if rng.random() < 0.2 else float(rng.random())) for link in links}
    total = sum(raw.values()) or 1.0
    mu = {pair: value / total for pair, value in raw.items()}
    return catalog.with_priorities(links), mu


# ---------------------------------------------------------------------------
# solve_pricing
# ---------------------------------------------------------------------------

class TestSolvePricing:
    def test_single_path_is_selected(self):
        graph = build_graph([('tx1', 'rx1', 1.0)])
        catalog = reweighted(enumerate_paths(graph), [3.0])
        result = solve_pricing(instance_for(catalog, {(0, 1): 1.0}))
        assert isinstance(result, PricingAssignment)
        assert result.selected == (0,)
        assert result.objective_value == 3.0

    def test_zero_duals_give_certificate(self, mesh_graph):
        catalog = enumerate_paths(mesh_graph)
        links = derive_links(mesh_graph, catalog)
        result = solve_pricing(instance_for(catalog, {link.pair: 0.0 for link in links}))
        assert isinstance(result, TerminationCertificate)
        assert result.best_value == 0.0
        assert result.epsilon == termination_epsilon(0.0)

    def test_mesh_matches_exhaustive_packing(self, mesh_graph):
        catalog = enumerate_paths(mesh_graph)
        links = derive_links(mesh_graph, catalog)
        instance = instance_for(catalog.with_priorities(links), uniform_mu(links))
        result = solve_pricing(instance)
        expected = pricing_oracle(instance)
        assert isinstance(result, PricingAssignment)
        assert result.selected == expected.selected
        assert result.objective_value == expected.objective_value
        assert is_feasible(catalog, result.selected)

    def test_matches_oracle_on_random_instances(self, rng):
        for _ in range(500):
            catalog, mu = random_instance(rng)
            gamma = 0.0 if rng.random() < 0.5 else float(rng.uniform(0.0, 0.5))
            instance = instance_for(catalog, mu, gamma)
            expected = pricing_oracle(instance)
            result = solve_pricing(instance)
            if isinstance(result, PricingAssignment):
                assert result.selected == expected.selected
                assert result.objective_value == expected.objective_value
                assert is_feasible(catalog, result.selected)
            else:
                assert expected.objective_value <= gamma + termination_epsilon(gamma)

    def test_threshold_is_monotone(self, rng):
        for _ in range(50):
            catalog, mu = random_instance(rng)
            best = pricing_oracle(instance_for(catalog, mu)).objective_value
            for gamma in (0.0, best / 2, best * 0.999, best, best * 1.001, best + 1.0):
                result = solve_pricing(instance_for(catalog, mu, gamma))
                improving = best > gamma + termination_epsilon(gamma)
                assert isinstance(result, PricingAssignment) is improving

    def test_node_budget(self, mesh_graph):
        catalog = enumerate_paths(mesh_graph)
        links = derive_links(mesh_graph, catalog)
        with pytest.raises(ResourceLimitError) as exc_info:
            solve_pricing(instance_for(catalog, uniform_mu(links)), node_budget=1)
        assert exc_info.value.exit_code == 4

    def test_negative_dual_rejected(self):
        graph = build_graph([('tx1', 'rx1', 1.0)])
        with pytest.raises(ValidationError):
            instance_for(enumerate_paths(graph), {(0, 1): -0.5})


# ---------------------------------------------------------------------------
# pricing_oracle
# ---------------------------------------------------------------------------

class TestPricingOracle:
    def test_empty_catalog(self):
        graph = build_graph([('tx1', 'sw1', 1.0)], nodes=['tx1', 'sw1', 'rx1'])
        result = pricing_oracle(instance_for(enumerate_paths(graph), {}))
        assert result.selected == ()
        assert result.objective_value == 0.0

    def test_shared_edge_forces_a_choice(self):
        graph = build_graph([('tx1', 'sw1', 1.0), ('sw1', 'rx1', 1.0), ('sw1', 'rx2', 1.0)])
        catalog = reweighted(enumerate_paths(graph), [2.0, 3.0])
        mu = {path.pair: 1.0 for path in catalog}
        result = pricing_oracle(instance_for(catalog, mu))
        assert result.selected == (1,)
        assert result.objective_value == 3.0

    def test_disjoint_paths_are_combined(self):
        graph = build_graph([('tx1', 'rx1', 1.0), ('tx2', 'rx2', 1.0)])
        catalog = reweighted(enumerate_paths(graph), [2.0, 3.0])
        mu = {path.pair: 1.0 for path in catalog}
        result = pricing_oracle(instance_for(catalog, mu))
        assert result.selected == (0, 1)
        assert result.objective_value == 5.0

    def test_path_cap(self):
        graph = build_graph(
            [(f'tx{i}', 'sw1', 1.0) for i in range(1, 6)] + [('sw1', f'rx{i}', 1.0) for i in range(1, 6)]
        )
        catalog = enumerate_paths(graph)
        assert len(catalog) == 25
        with pytest.raises(ResourceLimitError):
            pricing_oracle(instance_for(catalog, {path.pair: 0.04 for path in catalog}))


# ---------------------------------------------------------------------------
# assignment_to_configuration
# ---------------------------------------------------------------------------

class TestAssignmentToConfiguration:
    def test_empty_assignment(self, mesh_graph):
        config = assignment_to_configuration(PricingAssignment((), 0.0), enumerate_paths(mesh_graph))
        assert len(config) == 0

    def test_single_path(self, mesh_graph):
        catalog = enumerate_paths(mesh_graph)
        config = assignment_to_configuration(PricingAssignment((3,), 1.0), catalog)
        assert config.paths == (catalog[3],)

    def test_realized_links_follow_selection(self, rng):
        for _ in range(200):
            catalog, mu = random_instance(rng)
            assignment = pricing_oracle(instance_for(catalog, mu))
            config = assignment_to_configuration(assignment, catalog)
            assert set(config.realized_links) == {catalog[i].pair for i in assignment.selected}
