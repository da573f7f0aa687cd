"""Composite BS-user channel through every switched-on IRS.

The routed design assumes each beam only travels its own path. Here the
physical channel is evaluated instead: every LoS edge between active nodes
carries signal, so side-lobe leakage into other paths (and skip links inside
a path) shows up as the gap between :func:`effective_channel_dp` and the
interference-free ``sum |h_q|^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .beamrouting.graph import LosGraph
from .channel import los_link


@dataclass(frozen=True, eq=False)
class NetworkConfiguration:
    active_irs: dict  # IRS node index -> theta (unit-modulus, length m0^2)
    bs_precoder: np.ndarray


@dataclass(frozen=True, eq=False)
class CompositeChannel:
    row_vector: np.ndarray  # (N_B,)
    # path node tuple -> row_path @ w_B; only filled by the enumeration oracle
    per_path_contributions: dict = field(default_factory=dict)


def compose_precoder(beams, alphas, phases) -> np.ndarray:
    """``sum_q sqrt(alpha_q) exp(-j phi_q) w_q``; unit norm for orthonormal beams."""
    if not len(beams) == len(alphas) == len(phases):
        raise ValueError("beams, alphas and phases must have equal length")
    if not beams:
        raise ValueError("need at least one beam")
    w = np.zeros(len(beams[0]), dtype=complex)
    for b, a, phi in zip(beams, alphas, phases):
        w += math.sqrt(a) * np.exp(-1j * phi) * np.asarray(b)
    return w


def configuration_from_solution(solution, codebooks) -> NetworkConfiguration:
    """Switch on the routed IRSs with their selected phases and build ``w_B``.

    Paths that picked the same BS codeword make the split beams non-orthogonal;
    the precoder is then rescaled to unit norm so transmit power is respected.
    """
    active = {}
    for p in solution.paths:
        for node, sel in zip(p.irs_sequence, p.irs_selections):
            active[node] = sel.theta
    w = compose_precoder([codebooks.bs[p.bs_beam_index] for p in solution.paths],
                         solution.alphas, [p.phase for p in solution.paths])
    norm = np.linalg.norm(w)
    if norm > 0 and abs(norm - 1.0) > 1e-12:
        w = w / norm
    return NetworkConfiguration(active, w)


class _Links:
    def __init__(self, scenario):
        self.scenario = scenario
        self._cache = {}

    def __call__(self, i: int, j: int) -> np.ndarray:
        if (i, j) not in self._cache:
            sc = self.scenario
            self._cache[(i, j)] = los_link(sc.node(i), sc.node(j), sc.carrier).matrix
        return self._cache[(i, j)]


def effective_channel_dp(graph: LosGraph, scenario, config: NetworkConfiguration) -> CompositeChannel:
    """Sum over all LoS paths through active IRSs, by forward propagation.

    IRSs are visited in increasing BS distance; every edge points outward, so
    each incident field is complete before it is reflected onward.
    """
    links = _Links(scenario)
    user = graph.user
    order = sorted(config.active_irs, key=lambda j: (scenario.distance(0, j), j))
    rank = {j: r for r, j in enumerate(order)}
    fields: dict[int, np.ndarray] = {}
    for j in order:
        f = np.zeros((scenario.node(j).n_elements, scenario.bs.n_b), dtype=complex)
        if graph.has_edge(0, j):
            f += links(0, j)
        for i in graph.predecessors(j):
            if i == 0 or i not in config.active_irs:
                continue
            if rank[i] >= rank[j]:
                raise RuntimeError(f"LoS graph is not outward-ordered at edge {i}->{j}")
            f += links(i, j) @ (config.active_irs[i][:, None] * fields[i])
        fields[j] = f
    row = np.zeros(scenario.bs.n_b, dtype=complex)
    for j in order:
        if graph.has_edge(j, user):
            row += (links(j, user) @ (config.active_irs[j][:, None] * fields[j]))[0]
    return CompositeChannel(row)


def cascade_row(scenario, nodes, thetas) -> np.ndarray:
    """Explicit matrix cascade ``g^H Phi_L S ... Phi_1 H`` for one node path.

    ``thetas`` maps IRS index to its reflection vector. Returns the
    ``(N_B,)`` row; multiply by a precoder for the scalar channel.
    """
    sc = scenario
    acc = los_link(sc.node(nodes[0]), sc.node(nodes[1]), sc.carrier).matrix
    for a, b in zip(nodes[1:], nodes[2:]):
        acc = los_link(sc.node(a), sc.node(b), sc.carrier).matrix @ np.diag(thetas[a]) @ acc
    return acc[0]


def path_sum_channel(graph: LosGraph, scenario, config: NetworkConfiguration,
                     cap: int = 20000) -> CompositeChannel:
    """Enumeration oracle for :func:`effective_channel_dp`."""
    active = set(config.active_irs)
    keep = {e: d for e, d in graph.edges.items()
            if (e[0] == 0 or e[0] in active) and (e[1] == graph.user or e[1] in active)}
    sub = LosGraph(graph.n_nodes, keep)
    row = np.zeros(scenario.bs.n_b, dtype=complex)
    contributions = {}
    for nodes in sub.simple_paths(cap=cap):
        r = cascade_row(scenario, nodes, config.active_irs)
        contributions[nodes] = complex(r @ config.bs_precoder)
        row += r
    return CompositeChannel(row, contributions)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    return 10.0 * math.log10(watts) + 30.0 if watts > 0 else -math.inf


def received_power(channel: CompositeChannel, w_b, transmit_power_dbm: float) -> tuple[float, float]:
    """Received signal power ``P_t |h w_B|^2`` as ``(dBm, watts)``."""
    watts = dbm_to_watts(transmit_power_dbm) * abs(complex(channel.row_vector @ w_b)) ** 2
    return watts_to_dbm(watts), watts


def random_phase_power(amplitudes, alphas, seed) -> float:
    """Power when the per-path signals add with i.i.d. uniform phases (no BS compensation)."""
    if len(amplitudes) != len(alphas):
        raise ValueError("amplitudes and alphas must have equal length")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    psi = rng.uniform(0.0, 2.0 * np.pi, size=len(amplitudes))
    terms = np.sqrt(np.asarray(alphas, dtype=float)) * np.asarray(amplitudes, dtype=float)
    return float(abs(np.sum(terms * np.exp(1j * psi))) ** 2)
