"""Multi-path beam routing: LoS graph, candidate paths, clique selection."""

from .cliques import DEFAULT_CLIQUE_CAP, PathGraph, build_path_graph, maximal_cliques
from .graph import LosGraph, WeightedGraph, build_los_graph, idealized_edge_weights
from .routing import (
    INFEASIBLE,
    OK,
    CandidatePath,
    PathGainEvaluator,
    RoutingSolution,
    allocate_power,
    brute_force_route,
    coherent_power,
    path_gain_exact,
    received_power_sum,
    route_cba,
    select_best,
    single_path_route,
)
from .yen import shortest_path, yen_k_paths
