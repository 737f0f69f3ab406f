"""
Traffic module
Network model and file format, BPR/Beckmann costs, paths, route sets and export
"""

from .network import (
    Link,
    Node,
    OdDemand,
    Route,
    TrafficNetwork,
    format_network,
    parse_network,
    read_network,
    sort_key,
    split_demand,
    write_network,
)
from .costs import beckmann_integral_coefficient, beckmann_objective, beckmann_terms, bpr_time, link_times
from .paths import k_shortest_paths, route_cost, route_key, shortest_path
from .route_sets import generate_route_set, generate_route_sets, link_overlap, most_used_route
from .generators import (
    BEIJING_OD_PROFILE,
    GRID_COMMENTS,
    GRID_OD_PAIRS,
    beijing_scale_network,
    grid_network,
    synthetic_initial_flows,
)
from .export import write_flow_csv, write_heatmap_csv

__all__ = [
    'Link', 'Node', 'OdDemand', 'Route', 'TrafficNetwork', 'format_network', 'parse_network',
    'read_network', 'sort_key', 'split_demand', 'write_network',
    'beckmann_integral_coefficient', 'beckmann_objective', 'beckmann_terms', 'bpr_time', 'link_times',
    'k_shortest_paths', 'route_cost', 'route_key', 'shortest_path',
    'generate_route_set', 'generate_route_sets', 'link_overlap', 'most_used_route',
    'BEIJING_OD_PROFILE', 'GRID_COMMENTS', 'GRID_OD_PAIRS', 'beijing_scale_network', 'grid_network',
    'synthetic_initial_flows', 'write_flow_csv', 'write_heatmap_csv',
]
