"""Path conflict graph and Bron-Kerbosch maximal clique enumeration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_CLIQUE_CAP = 24


@dataclass(frozen=True, eq=False)
class PathGraph:
    adjacency: np.ndarray  # symmetric bool, True iff the two paths share no IRS

    @property
    def n_paths(self) -> int:
        return self.adjacency.shape[0]

    def neighbors(self, i: int) -> set[int]:
        return set(np.flatnonzero(self.adjacency[i]).tolist())


def build_path_graph(paths) -> PathGraph:
    """``paths`` are IRS index sequences or objects with an ``irs_sequence``."""
    sets = [set(getattr(p, "irs_sequence", p)) for p in paths]
    n = len(sets)
    adj = np.zeros((n, n), dtype=bool)
    for a in range(n):
        for b in range(a + 1, n):
            adj[a, b] = adj[b, a] = sets[a].isdisjoint(sets[b])
    return PathGraph(adj)


def maximal_cliques(pg: PathGraph, cap: int | None = DEFAULT_CLIQUE_CAP) -> list[tuple]:
    """All maximal cliques as sorted index tuples, in lexicographic order.

    Bron-Kerbosch with Tomita pivoting; worst case ``3^(K/3)`` cliques, hence
    the cap on the number of vertices.
    """
    n = pg.n_paths
    if cap is not None and n > cap:
        raise ValueError(f"{n} candidate paths exceeds the clique-enumeration cap of {cap}; "
                         "use a smaller K")
    if n == 0:
        return []
    nbrs = [pg.neighbors(i) for i in range(n)]
    out: list[tuple] = []

    def expand(r: list[int], p: set[int], x: set[int]):
        if not p and not x:
            out.append(tuple(sorted(r)))
            return
        pivot = max(p | x, key=lambda u: (len(p & nbrs[u]), -u))
        for v in sorted(p - nbrs[pivot]):
            expand(r + [v], p & nbrs[v], x & nbrs[v])
            p = p - {v}
            x = x | {v}

    expand([], set(range(n)), set())
    return sorted(out)
