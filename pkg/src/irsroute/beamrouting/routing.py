"""Exact per-path gains, power allocation, and multi-path selection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..arraygeom import response_toward
from ..codebook import CodebookSet, IrsBeamSelection, best_bs_beam, best_irs_beam
from .cliques import DEFAULT_CLIQUE_CAP, build_path_graph, maximal_cliques
from .graph import LosGraph, build_los_graph, idealized_edge_weights
from .yen import yen_k_paths

OK = "ok"
INFEASIBLE = "infeasible"


@dataclass(frozen=True, eq=False)
class CandidatePath:
    irs_sequence: tuple
    value: complex  # end-to-end complex gain with the selected beams
    bs_beam_index: int
    irs_selections: tuple  # IrsBeamSelection per IRS, in path order
    user_index: int

    @property
    def amplitude(self) -> float:
        return abs(self.value)

    @property
    def phase(self) -> float:
        return float(np.angle(self.value))

    @property
    def nodes(self) -> tuple:
        return (0, *self.irs_sequence, self.user_index)

    @property
    def label(self) -> str:
        return "-".join(str(n) for n in self.nodes)


@dataclass
class RoutingSolution:
    status: str
    paths: list = field(default_factory=list)
    alphas: list = field(default_factory=list)
    gamma_u: float = 0.0  # received power for unit transmit power
    candidates: list = field(default_factory=list)

    @property
    def q(self) -> int:
        return len(self.paths)

    @property
    def feasible(self) -> bool:
        return self.status == OK


def received_power_sum(paths) -> float:
    """Coherent-combining objective ``sum |h_q|^2`` (order independent)."""
    return math.fsum(p.amplitude ** 2 for p in paths)


class PathGainEvaluator:
    """Computes :class:`CandidatePath` values for one scenario and codebook set.

    Beam searches depend only on ``(previous, current, next)`` node triples, so
    they are memoized; evaluating every path of a small scene stays cheap.
    """

    def __init__(self, scenario, codebooks: CodebookSet | None = None, graph: LosGraph | None = None):
        self.scenario = scenario
        self.codebooks = codebooks or CodebookSet.for_scenario(scenario)
        self.graph = graph if graph is not None else build_los_graph(scenario)
        self._irs_cache: dict = {}
        self._bs_cache: dict = {}
        self._sqrt_beta = math.sqrt(scenario.carrier.beta)

    def bs_beam(self, first: int) -> tuple[int, complex]:
        if first not in self._bs_cache:
            sc = self.scenario
            h = response_toward(sc.bs, sc.node(first).position)
            self._bs_cache[first] = best_bs_beam(self.codebooks.bs, h)
        return self._bs_cache[first]

    def irs_beam(self, prev: int, node: int, nxt: int) -> IrsBeamSelection:
        key = (prev, node, nxt)
        if key not in self._irs_cache:
            sc = self.scenario
            pose = sc.node(node)
            cb = self.codebooks.irs(pose.m0)
            incoming = response_toward(pose, sc.node(prev).position)
            outgoing = response_toward(pose, sc.node(nxt).position)
            self._irs_cache[key] = best_irs_beam(cb, cb, incoming, outgoing)
        return self._irs_cache[key]

    def __call__(self, irs_sequence) -> CandidatePath:
        irs_sequence = tuple(int(a) for a in irs_sequence)
        if not irs_sequence:
            raise ValueError("a reflection path needs at least one IRS")
        user = self.graph.user
        nodes = (0, *irs_sequence, user)
        for a, b in zip(nodes, nodes[1:]):
            if not self.graph.has_edge(a, b):
                raise ValueError(f"hop {a}->{b} of path {nodes} is not an edge of the LoS graph")
        k, bs_value = self.bs_beam(irs_sequence[0])
        sels = tuple(self.irs_beam(nodes[i - 1], nodes[i], nodes[i + 1])
                     for i in range(1, len(nodes) - 1))
        value = complex(bs_value)
        for a, b in zip(nodes, nodes[1:]):
            value *= self._sqrt_beta / self.graph.edges[(a, b)]
        for s in sels:
            value *= s.gain
        return CandidatePath(irs_sequence, value, k, sels, user)


def path_gain_exact(path, scenario, codebooks: CodebookSet | None = None,
                    graph: LosGraph | None = None) -> CandidatePath:
    return PathGainEvaluator(scenario, codebooks, graph)(path)


def allocate_power(amplitudes) -> list[float]:
    """Power fractions ``|h_q|^2 / sum |h|^2`` that attain the coherent-combining bound."""
    powers = [float(a) ** 2 for a in amplitudes]
    total = math.fsum(powers)
    if not total > 0:
        raise ValueError("power allocation needs at least one non-zero amplitude")
    return [p / total for p in powers]


def coherent_power(amplitudes, alphas) -> float:
    """``(sum sqrt(alpha_q) |h_q|)^2`` for arbitrary fractions."""
    return math.fsum(math.sqrt(a) * abs(h) for a, h in zip(alphas, amplitudes)) ** 2


def _rank(paths) -> list:
    return sorted(paths, key=lambda p: (-p.amplitude, p.irs_sequence))


def select_best(paths, cliques) -> RoutingSolution:
    """Pick the clique of mutually disjoint paths with the largest ``sum |h|^2``."""
    paths = list(paths)
    if not paths or not cliques:
        return RoutingSolution(INFEASIBLE, candidates=paths)
    best, best_val = None, -1.0
    for clique in cliques:
        val = received_power_sum(paths[i] for i in clique)
        if val > best_val:
            best, best_val = clique, val
    chosen = [paths[i] for i in best]
    return RoutingSolution(OK, chosen, allocate_power(p.amplitude for p in chosen), best_val, paths)


def route_cba(scenario, k: int | None = None, codebooks: CodebookSet | None = None,
              graph: LosGraph | None = None, clique_cap: int | None = DEFAULT_CLIQUE_CAP
              ) -> RoutingSolution:
    """Clique-based multi-path routing.

    Yen's algorithm on idealized hop weights proposes ``k`` candidates; their
    exact codebook gains are recomputed and ranked, then the best maximal
    clique of the disjointness graph is selected.
    """
    k = scenario.k_candidates if k is None else k
    graph = graph if graph is not None else build_los_graph(scenario)
    evaluate = PathGainEvaluator(scenario, codebooks, graph)
    ranked = yen_k_paths(idealized_edge_weights(graph, scenario), k)
    candidates = _rank(evaluate(p[1:-1]) for _, p in ranked)
    if not candidates:
        return RoutingSolution(INFEASIBLE)
    cliques = maximal_cliques(build_path_graph(candidates), cap=clique_cap)
    return select_best(candidates, cliques)


def single_path_route(solution: RoutingSolution) -> RoutingSolution:
    """Q=1 special case over the same candidate set: the strongest single path."""
    if not solution.candidates:
        return RoutingSolution(INFEASIBLE)
    best = _rank(solution.candidates)[0]
    return RoutingSolution(OK, [best], [1.0], best.amplitude ** 2, solution.candidates)


def brute_force_route(graph: LosGraph, scenario, codebooks: CodebookSet | None = None,
                      max_paths: int | None = None, path_cap: int = 4096) -> RoutingSolution:
    """Exhaustive optimum over every family of pairwise IRS-disjoint paths.

    Only meant for small scenes; raises if the scene has more than
    ``path_cap`` simple BS-user paths.
    """
    evaluate = PathGainEvaluator(scenario, codebooks, graph)
    paths = _rank(evaluate(p[1:-1]) for p in graph.simple_paths(cap=path_cap))
    if not paths:
        return RoutingSolution(INFEASIBLE)
    if max_paths is None:
        max_paths = len(graph.successors(0))
    sets = [frozenset(p.irs_sequence) for p in paths]
    best: list = []
    best_val = -1.0

    def search(start: int, chosen: list, used: frozenset):
        nonlocal best, best_val
        if chosen:
            val = received_power_sum(paths[i] for i in chosen)
            if val > best_val:
                best, best_val = list(chosen), val
        if len(chosen) == max_paths:
            return
        for i in range(start, len(paths)):
            if used.isdisjoint(sets[i]):
                search(i + 1, chosen + [i], used | sets[i])

    search(0, [], frozenset())
    chosen = [paths[i] for i in best]
    return RoutingSolution(OK, chosen, allocate_power(p.amplitude for p in chosen), best_val, paths)
