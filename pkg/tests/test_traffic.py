"""
Tests for the network model, BPR/Beckmann costs, shortest paths, route sets,
generators and CSV export
"""

import networkx as nx
import numpy as np
import pytest
from scipy.integrate import quad

from conftest import BUNDLED_GRID, BUNDLED_GRID_BACKGROUND, parallel_network
from src.errors import InputError, NoPathError, ParseError
from src.tap_baselines import dia
from src.traffic import (
    GRID_OD_PAIRS,
    Link,
    Node,
    OdDemand,
    TrafficNetwork,
    beckmann_objective,
    beijing_scale_network,
    bpr_time,
    format_network,
    generate_route_set,
    generate_route_sets,
    grid_network,
    k_shortest_paths,
    link_overlap,
    link_times,
    parse_network,
    read_network,
    route_cost,
    shortest_path,
    split_demand,
    synthetic_initial_flows,
    write_flow_csv,
    write_heatmap_csv,
)

GRID_LINK = Link("1", "a", "b", t0=1.0, capacity=25.0)


class NoAssignment:
    """Assignment stand-in that never supplies an R1 route."""

    def routes_for_od(self, od_index):
        return []


class FixedAssignment:
    def __init__(self, routes):
        self.routes = routes

    def routes_for_od(self, od_index):
        return self.routes


def three_path_network() -> TrafficNetwork:
    nodes = [Node(n) for n in ("o", "a", "b", "c", "d")]
    links = [Link("1", "o", "a", 1.0, 10.0), Link("2", "a", "d", 1.0, 10.0),
             Link("3", "o", "b", 2.0, 10.0), Link("4", "b", "d", 2.0, 10.0),
             Link("5", "o", "c", 3.0, 10.0), Link("6", "c", "d", 3.0, 10.0)]
    return TrafficNetwork(nodes, links, [OdDemand("o", "d", 3.0)])


class TestNetworkFormat:
    def test_parse_minimal(self):
        network = parse_network("NODE 1 0 0\nNODE 2 1 0\nLINK 7 1 2 2.5 30\nOD 1 2 4\n")
        link = network.links[0]
        assert (link.id, link.tail, link.head, link.t0, link.capacity) == ("7", "1", "2", 2.5, 30.0)
        assert (link.alpha, link.beta, link.initial_flow) == (0.15, 4, 0.0)
        assert network.total_demand == 4.0

    def test_optional_initial_flow(self):
        network = parse_network("NODE 1\nNODE 2\nLINK 1 1 2 1 25 6\n")
        assert network.initial_flows[0] == 6.0

    def test_unrecognized_line(self):
        with pytest.raises(ParseError) as error:
            parse_network("NODE 1\nEDGE 1 2\n", source="net.txt")
        assert error.value.line_number == 2

    def test_non_integer_beta(self):
        with pytest.raises(ParseError):
            parse_network("NODE 1\nNODE 2\nLINK 1 1 2 1 25 0.15 4.5\n")

    def test_unknown_node(self):
        with pytest.raises(ParseError):
            parse_network("NODE 1\nLINK 1 1 2 1 25\n")

    def test_disconnected_od(self):
        with pytest.raises(NoPathError):
            TrafficNetwork([Node("1"), Node("2")], [Link("1", "2", "1", 1.0, 1.0)],
                           [OdDemand("1", "2", 1.0)])

    def test_format_then_parse(self, grid):
        network = parse_network(format_network(grid))
        assert network.links == grid.links
        assert network.od_pairs == grid.od_pairs

    def test_format_leads_with_comments(self, grid):
        lines = format_network(grid, ["first", "second"]).splitlines()
        assert lines[:3] == ["# first", "# second", "# LINK id tail head t0 capacity alpha beta init_flow"]
        assert lines[3] == "NODE 1 0 4"

    def test_invalid_link(self):
        with pytest.raises(InputError):
            Link("1", "a", "b", t0=0.0, capacity=1.0)


class TestCosts:
    def test_bpr_free_flow(self):
        assert bpr_time(GRID_LINK, 0.0) == 1.0

    def test_bpr_at_capacity(self):
        assert bpr_time(GRID_LINK, 25.0) == pytest.approx(1.15)

    def test_bpr_at_twice_capacity(self):
        link = Link("1", "a", "b", t0=2.0, capacity=25.0)
        assert bpr_time(link, 50.0) == pytest.approx(3.4 * 2.0)

    def test_bpr_monotone_and_convex(self):
        flows = np.linspace(0.0, 60.0, 301)
        times = np.array([bpr_time(GRID_LINK, f) for f in flows])
        assert np.all(np.diff(times) >= 0)
        assert np.all(np.diff(times, 2) >= -1e-12)

    def test_negative_flow(self):
        with pytest.raises(InputError):
            bpr_time(GRID_LINK, -1.0)

    def test_beckmann_zero(self, grid):
        assert beckmann_objective(grid, np.zeros(grid.n_links)) == 0.0

    def test_beckmann_single_link(self):
        network = parallel_network([1.0], demand=1.0)
        assert beckmann_objective(network, [25.0]) == pytest.approx(25.75)

    def test_beckmann_matches_quadrature(self, rng):
        network = parallel_network(rng.uniform(0.5, 3.0, 5), demand=1.0, capacity=20.0)
        flows = rng.uniform(0.0, 40.0, 5)
        expected = sum(quad(lambda x, link=link: bpr_time(link, x), 0.0, f)[0]
                       for link, f in zip(network.links, flows))
        assert beckmann_objective(network, flows) == pytest.approx(expected, rel=1e-6)

    def test_beckmann_increasing_in_each_flow(self, grid, rng):
        flows = rng.uniform(0.0, 30.0, grid.n_links)
        base = beckmann_objective(grid, flows)
        for a in rng.choice(grid.n_links, 10, replace=False):
            bumped = flows.copy()
            bumped[a] += 0.5
            assert beckmann_objective(grid, bumped) > base

    def test_link_times_vectorized(self, grid, rng):
        flows = rng.uniform(0.0, 30.0, grid.n_links)
        expected = [bpr_time(link, f) for link, f in zip(grid.links, flows)]
        np.testing.assert_allclose(link_times(grid, flows), expected)


class TestShortestPath:
    def test_single_link(self):
        network = parallel_network([2.0], demand=1.0)
        route = shortest_path(network, network.t0, "o", "d")
        assert route.links == (0,)
        assert route.nodes == ("o", "d")

    def test_cheaper_of_two_paths(self):
        network = three_path_network()
        costs = np.array([1.5, 1.5, 2.0, 3.0, 9.0, 9.0])
        assert network.route_link_ids(shortest_path(network, costs, "o", "d")) == ["1", "2"]

    def test_ties_break_on_node_sequence(self):
        network = three_path_network()
        assert network.route_link_ids(shortest_path(network, np.ones(6), "o", "d")) == ["1", "2"]

    def test_matches_bellman_ford(self, rng):
        for _ in range(20):
            n = 50
            graph = nx.DiGraph()
            links = []
            for i in range(1, n + 1):
                for j in range(i + 1, n + 1):
                    if j == i + 1 or rng.random() < 0.08:
                        cost = float(rng.uniform(0.1, 5.0))
                        graph.add_edge(str(i), str(j), weight=cost)
                        links.append(Link(str(len(links) + 1), str(i), str(j), cost, 1.0))
            network = TrafficNetwork([Node(str(i)) for i in range(1, n + 1)], links, [])
            route = shortest_path(network, network.t0, "1", str(n))
            expected = nx.bellman_ford_path_length(graph, "1", str(n), weight="weight")
            assert route_cost(route, network.t0) == pytest.approx(expected, abs=1e-9)

    def test_not_worse_than_random_simple_paths(self, grid, rng):
        costs = rng.uniform(0.5, 2.0, grid.n_links)
        best = route_cost(shortest_path(grid, costs, "1", "25"), costs)
        graph = nx.DiGraph()
        for index, link in enumerate(grid.links):
            graph.add_edge(link.tail, link.head, index=index)
        for path, _ in zip(nx.all_simple_paths(graph, "1", "25", cutoff=12), range(1000)):
            total = sum(costs[graph.edges[u, v]["index"]] for u, v in zip(path, path[1:]))
            assert best <= total + 1e-12

    def test_unreachable(self):
        network = TrafficNetwork([Node("1"), Node("2")], [Link("1", "2", "1", 1.0, 1.0)], [])
        with pytest.raises(NoPathError):
            shortest_path(network, network.t0, "1", "2")

    def test_negative_cost(self):
        network = parallel_network([1.0], demand=1.0)
        with pytest.raises(InputError):
            shortest_path(network, [-1.0], "o", "d")

    def test_yen_order(self):
        network = three_path_network()
        routes = k_shortest_paths(network, network.t0, "o", "d", 5)
        assert [network.route_link_ids(r) for r in routes] == [["1", "2"], ["3", "4"], ["5", "6"]]


class TestRouteSets:
    def test_forced_three_paths(self):
        network = three_path_network()
        routes = generate_route_set(network, 0, NoAssignment())
        assert [network.route_link_ids(r) for r in routes] == [["1", "2"], ["3", "4"], ["5", "6"]]

    def test_r1_from_assignment(self):
        network = three_path_network()
        r1 = network.route_from_links(["5", "6"])
        routes = generate_route_set(network, 0, FixedAssignment([r1, r1]))
        assert routes[0] == r1
        assert network.route_link_ids(routes[1]) == ["1", "2"]
        assert network.route_link_ids(routes[2]) == ["3", "4"]

    def test_r2_skips_r1(self):
        network = three_path_network()
        r1 = network.route_from_links(["1", "2"])
        routes = generate_route_set(network, 0, FixedAssignment([r1]))
        assert network.route_link_ids(routes[1]) == ["3", "4"]

    def test_reduced_route_count(self):
        network = parallel_network([1.0, 2.0], demand=2.0)
        routes = generate_route_set(network, 0, NoAssignment(), max_routes=3)
        assert len(routes) == 2

    def test_grid_corner_to_corner(self, grid):
        assignment = dia(grid, 1.0, order_seed=0)
        od_index = GRID_OD_PAIRS.index((1, 25, 5))
        routes = generate_route_set(grid, od_index, assignment)
        assert len(routes) == 3
        assert len(set(routes)) == 3
        r2 = routes[1]
        assert len(r2) == 8
        assert route_cost(r2, grid.t0) == pytest.approx(8.0)
        for route in routes:
            assert route.origin == "1" and route.destination == "25"
            assert len(set(route.nodes)) == len(route.nodes)
            for index, (tail, head) in enumerate(zip(route.nodes, route.nodes[1:])):
                link = grid.links[route.links[index]]
                assert (link.tail, link.head) == (tail, head)

    def test_every_od_gets_a_set(self, grid):
        sets = generate_route_sets(grid, dia(grid, 1.0, order_seed=1))
        assert sorted(sets) == list(range(15))
        assert all(len(routes) == 3 for routes in sets.values())

    def test_link_overlap(self):
        network = three_path_network()
        a = network.route_from_links(["1", "2"])
        b = network.route_from_links(["3", "4"])
        assert link_overlap(a, a) == 1.0
        assert link_overlap(a, b) == 0.0


class TestSplitDemand:
    def test_whole_groups(self):
        assert split_demand(5.0, 1.0) == [1.0] * 5

    def test_remainder_group(self):
        assert split_demand(5.0, 2.0) == [2.0, 2.0, 1.0]

    def test_fractional_group_size(self):
        groups = split_demand(5.0, 0.1)
        assert len(groups) == 50
        assert sum(groups) == pytest.approx(5.0)

    def test_rejects_nonpositive_size(self):
        with pytest.raises(InputError):
            split_demand(5.0, 0.0)


class TestGenerators:
    def test_grid_fixture_shape(self, grid):
        assert (len(grid.nodes), grid.n_links, len(grid.od_pairs)) == (25, 80, 15)
        assert grid.total_demand == 75.0

    def test_bundled_fixture_matches_generator(self, grid):
        bundled = read_network(BUNDLED_GRID)
        assert [(l.id, l.tail, l.head) for l in bundled.links] == \
            [(l.id, l.tail, l.head) for l in grid.links]
        assert bundled.od_pairs == grid.od_pairs
        assert np.all(bundled.initial_flows == 0.0)

    def test_bundled_background_variant(self):
        network = read_network(BUNDLED_GRID_BACKGROUND)
        expected = [(7 * int(link.id)) % 11 for link in network.links]
        np.testing.assert_array_equal(network.initial_flows, expected)

    def test_synthetic_flows(self, grid):
        flows = synthetic_initial_flows(grid, seed=3)
        np.testing.assert_array_equal(flows, synthetic_initial_flows(grid, seed=3))
        assert np.all(flows >= np.round(0.1 * 25)) and np.all(flows <= np.round(0.6 * 25))
        assert np.all(flows == np.round(flows))

    def test_beijing_scale(self):
        network = beijing_scale_network(seed=0)
        assert (len(network.nodes), network.n_links, len(network.od_pairs)) == (89, 408, 20)
        assert network.total_demand == 1600.0
        assert np.all(network.initial_flows > 0)


class TestExport:
    def test_flow_csv(self, grid, tmp_path):
        flows = np.arange(grid.n_links, dtype=float)
        lines = write_flow_csv(grid, flows, tmp_path / "flows.csv").read_text().splitlines()
        assert lines[0] == "link_id,tail,head,flow,time"
        assert lines[1].split(",")[:4] == ["1", "1", "2", "0.0"]
        assert len(lines) == 81

    def test_heatmap_midpoints(self, grid, tmp_path):
        lines = write_heatmap_csv(grid, np.ones(grid.n_links), tmp_path / "heat.csv").read_text().splitlines()
        assert lines[0] == "x,y,flow"
        # link 1 joins node 1 (0, 4) and node 2 (1, 4)
        assert lines[1] == "0.5,4.0,1.0"

    def test_heatmap_needs_coordinates(self, tmp_path):
        network = parallel_network([1.0], demand=1.0)
        with pytest.raises(InputError):
            write_heatmap_csv(network, [1.0], tmp_path / "heat.csv")
