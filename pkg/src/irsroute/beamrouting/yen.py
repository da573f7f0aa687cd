"""Yen's K loopless shortest paths.

Weights from :func:`idealized_edge_weights` can be negative (large IRSs at
short range have a net gain above 1), so the inner shortest-path routine is
Bellman-Ford rather than Dijkstra. LoS graphs are DAGs by construction, so no
negative cycle can occur there; a general graph with one raises.
"""

from __future__ import annotations

import heapq

from .graph import WeightedGraph


def _tight(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-9 * (1.0 + abs(a) + abs(b))


def shortest_path(wg: WeightedGraph, source: int, target: int, banned_nodes=frozenset(),
                  banned_edges=frozenset()):
    """Min-weight path ``source -> target`` avoiding the banned items, or ``None``.

    Among equal-weight paths the lexicographically smallest node sequence wins.
    """
    edges = [(u, v, w) for (u, v), w in wg.weights.items()
             if u not in banned_nodes and v not in banned_nodes and (u, v) not in banned_edges]
    dist = {target: 0.0}
    for _ in range(wg.n_nodes):
        changed = False
        for u, v, w in edges:
            if v in dist:
                cand = w + dist[v]
                if u not in dist or cand < dist[u] and not _tight(cand, dist[u]):
                    dist[u] = cand
                    changed = True
        if not changed:
            break
    else:
        raise ValueError("negative cycle in weighted graph")
    if source not in dist:
        return None

    out = {}
    for u, v, w in edges:
        out.setdefault(u, []).append((v, w))
    path = [source]
    while path[-1] != target:
        u = path[-1]
        step = min((v for v, w in out.get(u, ()) if v in dist and v not in path
                    and _tight(w + dist[v], dist[u])), default=None)
        if step is None:
            raise RuntimeError("shortest-path reconstruction failed")
        path.append(step)
    return tuple(path)


def yen_k_paths(wg: WeightedGraph, k: int, source: int = 0, target: int | None = None):
    """Up to ``k`` simple ``source -> target`` paths of smallest total weight.

    Returns ``[(weight, node_tuple), ...]`` sorted by weight, ties broken by
    the node sequence. Empty if the target is unreachable.
    """
    if k < 1:
        raise ValueError("K must be >= 1")
    if target is None:
        target = wg.n_nodes - 1
    first = shortest_path(wg, source, target)
    if first is None:
        return []
    accepted = [first]
    seen = {first}
    heap: list = []
    while len(accepted) < k:
        prev = accepted[-1]
        for i in range(len(prev) - 1):
            root = prev[: i + 1]
            banned_edges = {(p[i], p[i + 1]) for p in accepted if p[: i + 1] == root}
            spur = shortest_path(wg, prev[i], target, frozenset(root[:-1]), banned_edges)
            if spur is None:
                continue
            cand = root[:-1] + spur
            if cand not in seen:
                seen.add(cand)
                heapq.heappush(heap, (wg.path_weight(cand), cand))
        if not heap:
            break
        accepted.append(heapq.heappop(heap)[1])
    return sorted(((wg.path_weight(p), p) for p in accepted))
