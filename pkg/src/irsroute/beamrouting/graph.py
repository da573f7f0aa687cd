"""LoS graph over {BS, IRSs, user} and the additive Yen surrogate weights."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..arraygeom import half_space_contains, los_blocked


@dataclass
class LosGraph:
    """Directed graph; node 0 is the BS, node ``n_nodes - 1`` the user.

    ``edges`` maps ``(i, j)`` to the distance ``d_ij`` in meters.
    """

    n_nodes: int
    edges: dict = field(default_factory=dict)

    @property
    def user(self) -> int:
        return self.n_nodes - 1

    def successors(self, i: int) -> list[int]:
        return sorted(j for (a, j) in self.edges if a == i)

    def predecessors(self, j: int) -> list[int]:
        return sorted(i for (i, b) in self.edges if b == j)

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edges

    def without_edges(self, drop) -> "LosGraph":
        drop = set(drop)
        return LosGraph(self.n_nodes, {e: d for e, d in self.edges.items() if e not in drop})

    def simple_paths(self, cap: int | None = None) -> list[tuple]:
        """Every BS-to-user path as a full node tuple, in lexicographic order."""
        out: list[tuple] = []
        succ = {i: self.successors(i) for i in range(self.n_nodes)}

        def walk(path):
            u = path[-1]
            if u == self.user:
                out.append(tuple(path))
                if cap is not None and len(out) > cap:
                    raise ValueError(f"more than {cap} BS-user paths; scene too large to enumerate")
                return
            for v in succ[u]:
                if v not in path:
                    walk(path + [v])

        walk([0])
        return out


def _line_of_sight(scenario, i: int, j: int) -> bool:
    if scenario.explicit_los_pairs is not None:
        return frozenset((i, j)) in scenario.explicit_los_pairs
    return not los_blocked(scenario.node(i).position, scenario.node(j).position, scenario.obstacles)


def build_los_graph(scenario) -> LosGraph:
    """Edges ``i -> j`` that carry an effective outward LoS reflection.

    Requires line of sight, each IRS endpoint to see the other node strictly in
    its reflection half-space, and ``d_0j > d_0i`` unless ``j`` is the user.
    The direct BS-user link is never an edge.
    """
    n = scenario.n_irs + 2
    user = n - 1
    d0 = [scenario.distance(0, k) for k in range(n)]
    g = LosGraph(n)
    for i in range(0, user):
        for j in range(1, n):
            if i == j or (i == 0 and j == user):
                continue
            if j != user and not d0[j] > d0[i]:
                continue
            ni, nj = scenario.node(i), scenario.node(j)
            if i != 0 and not half_space_contains(ni, nj.position):
                continue
            if j != user and not half_space_contains(nj, ni.position):
                continue
            if not _line_of_sight(scenario, i, j):
                continue
            g.edges[(i, j)] = scenario.distance(i, j)
    return g


@dataclass
class WeightedGraph:
    n_nodes: int
    weights: dict  # (i, j) -> float, may be negative

    def successors(self, i: int) -> list[int]:
        return sorted(j for (a, j) in self.weights if a == i)

    def path_weight(self, path) -> float:
        return math.fsum(self.weights[(a, b)] for a, b in zip(path, path[1:]))


def idealized_edge_weights(graph: LosGraph, scenario) -> WeightedGraph:
    """``-log`` of each hop's share of the ideal path amplitude.

    Summing along a path gives ``-log(beta^((L+1)/2) prod(1/d) M^L sqrt(N_B))``,
    i.e. the amplitude with perfect beam alignment. Codebook losses are ignored
    because they couple consecutive hops and are not edge-separable.
    """
    half_log_beta = 0.5 * math.log(scenario.carrier.beta)
    weights = {}
    for (i, j), d in graph.edges.items():
        gain = half_log_beta - math.log(d)
        if j != graph.user:
            gain += math.log(scenario.node(j).n_elements)
        if i == 0:
            gain += 0.5 * math.log(scenario.bs.n_b)
        weights[(i, j)] = -gain
    return WeightedGraph(graph.n_nodes, weights)
