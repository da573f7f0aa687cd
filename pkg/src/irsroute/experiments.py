"""Experiment orchestration behind the CLI: route, evaluate, sweep.

Every run produces :class:`ResultRow` records with a fixed column order. Output
is deterministic for a given scenario and seed; the runtime column stays empty
unless timing is requested, so repeated runs give byte-identical CSV.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, fields

import numpy as np

from .beamrouting import (
    INFEASIBLE,
    OK,
    PathGainEvaluator,
    RoutingSolution,
    allocate_power,
    build_los_graph,
    coherent_power,
    received_power_sum,
    route_cba,
    single_path_route,
)
from .channel import los_link, rayleigh_nlos
from .codebook import CodebookSet
from .fullchannel import (
    configuration_from_solution,
    dbm_to_watts,
    effective_channel_dp,
    random_phase_power,
    received_power,
    watts_to_dbm,
)

SWEEP_PARAMS = ("k", "m0", "rho")
DEFAULT_RHO = 3.0
DEFAULT_RANDOM_SEEDS = 1000


class SolutionMismatch(ValueError):
    pass


@dataclass
class ResultRow:
    experiment: str
    scenario: str
    param: str = ""
    value: str = ""
    status: str = OK
    q: int = 0
    paths: str = ""  # node sequences joined by "|", e.g. "0-1-4-8|0-2-5-8"
    amplitudes_db: str = ""  # 20 log10 |h_q| per path, ";"-joined
    alphas: str = ""
    gamma_free_dbm: str = ""  # interference-free received power
    gamma_dp_dbm: str = ""  # composite channel including leakage
    gap_db: str = ""  # gamma_dp - gamma_free
    single_path_dbm: str = ""
    random_mean_dbm: str = ""
    random_max_dbm: str = ""
    baseline_dbm: str = ""  # single-reflection Rayleigh baseline (rho sweep)
    runtime_ms: str = ""


COLUMNS = [f.name for f in fields(ResultRow)]


def _f(x: float, digits: int = 6) -> str:
    if x == -math.inf:
        return "-inf"
    text = f"{x:.{digits}f}"
    return text[1:] if text.startswith("-") and float(text) == 0 else text


def write_csv(rows, stream=None) -> str:
    """Serialize rows; returns the text and also writes it to ``stream`` if given."""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(asdict(r))
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


def _gamma_dbm(scenario, gamma_unit: float) -> float:
    return watts_to_dbm(dbm_to_watts(scenario.transmit_power_dbm) * gamma_unit)


def _fill_solution(row: ResultRow, scenario, sol: RoutingSolution, gamma_free: float):
    row.status = sol.status
    row.q = sol.q
    if not sol.feasible:
        return
    row.paths = "|".join(p.label for p in sol.paths)
    row.amplitudes_db = ";".join(_f(20 * math.log10(p.amplitude)) for p in sol.paths)
    row.alphas = ";".join(f"{a:.9f}" for a in sol.alphas)
    optimal = allocate_power(p.amplitude for p in sol.paths)
    if np.allclose(optimal, sol.alphas, rtol=0, atol=1e-12):
        expect = received_power_sum(sol.paths)
        if abs(gamma_free - expect) > 1e-9 * expect:
            raise AssertionError(f"emitted gamma {gamma_free} != sum |h|^2 {expect}")
    row.gamma_free_dbm = _f(_gamma_dbm(scenario, gamma_free))


def random_phase_stats(sol: RoutingSolution, seed: int, n_seeds: int) -> np.ndarray:
    amps = [p.amplitude for p in sol.paths]
    return np.array([random_phase_power(amps, sol.alphas, [seed, i]) for i in range(n_seeds)])


def _single_link_gain(g_row: np.ndarray, h: np.ndarray, iterations: int = 20) -> float:
    """max |g diag(theta) H w| over unit-modulus theta and unit-norm w (alternating)."""
    _, _, vh = np.linalg.svd(h)
    w = vh[0].conj()
    for _ in range(iterations):
        theta = np.exp(-1j * np.angle(g_row * (h @ w)))
        eff = (g_row * theta) @ h
        w = eff.conj() / np.linalg.norm(eff)
    return float(abs((g_row * theta) @ h @ w))


def single_reflection_baseline(scenario, rho: float, seed: int) -> float:
    """Received power (unit transmit power) of the single-reflection scheme.

    Every IRS relays BS -> IRS -> user in one bounce. Hops that are LoS edges use
    the LoS model; all others are Rayleigh with path-loss exponent ``rho``. Each
    link gets continuous-phase beamforming and the links are combined
    coherently with optimal power split, i.e. ``sum_j a_j^2``.
    """
    graph = build_los_graph(scenario)
    user = scenario.user_index
    total = []
    for j in range(1, user):
        pose = scenario.node(j)
        m, n_b = pose.n_elements, scenario.bs.n_b
        if graph.has_edge(0, j):
            h = los_link(scenario.bs, pose, scenario.carrier).matrix
        else:
            h = rayleigh_nlos(m, n_b, scenario.distance(0, j), rho, scenario.carrier, [seed, j, 0])
        if graph.has_edge(j, user):
            g = los_link(pose, scenario.user, scenario.carrier).matrix[0]
        else:
            g = rayleigh_nlos(1, m, scenario.distance(j, user), rho, scenario.carrier, [seed, j, 1])[0]
        total.append(_single_link_gain(g, h) ** 2)
    return math.fsum(total)


def evaluate_solution(scenario, sol: RoutingSolution, codebooks: CodebookSet, row: ResultRow,
                      seed: int, n_random: int = DEFAULT_RANDOM_SEEDS):
    """Fill composite-channel power, leakage gap and random-phase statistics."""
    if not sol.feasible:
        return row
    gamma_free = coherent_power([p.amplitude for p in sol.paths], sol.alphas)
    _fill_solution(row, scenario, sol, gamma_free)
    graph = build_los_graph(scenario)
    cfg = configuration_from_solution(sol, codebooks)
    dp_dbm, _ = received_power(effective_channel_dp(graph, scenario, cfg), cfg.bs_precoder,
                               scenario.transmit_power_dbm)
    row.gamma_dp_dbm = _f(dp_dbm)
    row.gap_db = _f(dp_dbm - _gamma_dbm(scenario, gamma_free))
    if n_random > 0:
        draws = random_phase_stats(sol, seed, n_random)
        row.random_mean_dbm = _f(_gamma_dbm(scenario, float(draws.mean())))
        row.random_max_dbm = _f(_gamma_dbm(scenario, float(draws.max())))
    if sol.candidates:
        row.single_path_dbm = _f(_gamma_dbm(scenario, single_path_route(sol).gamma_u))
    return row


def _seed(scenario, seed):
    return scenario.seed if seed is None else seed


def cmd_route(scenario, k: int | None = None, seed: int | None = None, timing: bool = False,
              n_random: int = 0):
    t0 = time.perf_counter()
    codebooks = CodebookSet.for_scenario(scenario)
    sol = route_cba(scenario, k=k, codebooks=codebooks)
    row = ResultRow("route", scenario.name)
    if sol.feasible:
        evaluate_solution(scenario, sol, codebooks, row, _seed(scenario, seed), n_random)
    else:
        row.status = INFEASIBLE
    if timing:
        row.runtime_ms = _f((time.perf_counter() - t0) * 1e3, 3)
    return sol, row


def cmd_evaluate(scenario, solution: RoutingSolution | None = None, k: int | None = None,
                 seed: int | None = None, n_random: int = DEFAULT_RANDOM_SEEDS, timing: bool = False):
    t0 = time.perf_counter()
    codebooks = CodebookSet.for_scenario(scenario)
    if solution is None:
        solution = route_cba(scenario, k=k, codebooks=codebooks)
    row = ResultRow("evaluate", scenario.name)
    if solution.feasible:
        evaluate_solution(scenario, solution, codebooks, row, _seed(scenario, seed), n_random)
    else:
        row.status = INFEASIBLE
    if timing:
        row.runtime_ms = _f((time.perf_counter() - t0) * 1e3, 3)
    return row


def cmd_sweep(scenario, param: str, values, k: int | None = None, seed: int | None = None,
              n_random: int = DEFAULT_RANDOM_SEEDS, timing: bool = False) -> list[ResultRow]:
    """One row per swept value, in the order given.

    ``k`` varies the candidate count, ``m0`` the elements per IRS dimension,
    ``rho`` the NLoS path-loss exponent of the single-reflection baseline.
    """
    if param not in SWEEP_PARAMS:
        raise ValueError(f"unknown sweep parameter {param!r}; choose from {SWEEP_PARAMS}")
    values = list(values)
    if not values:
        raise ValueError("sweep needs at least one value")
    seed = _seed(scenario, seed)
    rows = []
    for v in values:
        t0 = time.perf_counter()
        sc, kk = scenario, k
        if param == "k":
            kk = int(v)
            if kk < 1 or kk != v:
                raise ValueError(f"K must be a positive integer, got {v!r}")
        elif param == "m0":
            if int(v) < 1 or int(v) != v:
                raise ValueError(f"M0 must be a positive integer, got {v!r}")
            sc = scenario.with_m0(int(v))
        codebooks = CodebookSet.for_scenario(sc)
        sol = route_cba(sc, k=kk, codebooks=codebooks)
        row = ResultRow("sweep", scenario.name, param, _fmt_value(v))
        if sol.feasible:
            evaluate_solution(sc, sol, codebooks, row, seed, n_random)
        else:
            row.status = INFEASIBLE
        if param == "rho":
            row.baseline_dbm = _f(_gamma_dbm(sc, single_reflection_baseline(sc, float(v), seed)))
        if timing:
            row.runtime_ms = _f((time.perf_counter() - t0) * 1e3, 3)
        rows.append(row)
    return rows


def _fmt_value(v) -> str:
    v = float(v)
    return str(int(v)) if v.is_integer() else repr(v)


def parse_values(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValueError(f"--values must be comma-separated numbers, got {text!r}") from None
    if not vals:
        raise ValueError("sweep needs at least one value")
    return vals


# ---------------------------------------------------------------- solution files

def solution_to_json(scenario, sol: RoutingSolution) -> str:
    doc = {
        "scenario": scenario.name,
        "scenario_fingerprint": scenario.fingerprint(),
        "status": sol.status,
        "paths": [list(p.irs_sequence) for p in sol.paths],
        "alphas": list(sol.alphas),
        "gamma_u": sol.gamma_u,
    }
    return json.dumps(doc, indent=2) + "\n"


def solution_from_json(text: str, scenario) -> RoutingSolution:
    """Rebuild a solution against ``scenario``; beams are re-derived from the paths."""
    doc = json.loads(text)
    if doc.get("scenario_fingerprint") != scenario.fingerprint():
        raise SolutionMismatch("solution was produced for a different scenario "
                               f"({doc.get('scenario')!r}, fingerprint {doc.get('scenario_fingerprint')})")
    if doc.get("status") != OK:
        return RoutingSolution(INFEASIBLE)
    evaluate = PathGainEvaluator(scenario)
    try:
        paths = [evaluate(p) for p in doc["paths"]]
    except ValueError as exc:
        raise SolutionMismatch(str(exc)) from None
    alphas = [float(a) for a in doc["alphas"]]
    if len(alphas) != len(paths) or abs(math.fsum(alphas) - 1.0) > 1e-9:
        raise SolutionMismatch("alphas must match the paths and sum to 1")
    sets = [set(p.irs_sequence) for p in paths]
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            if not sets[i].isdisjoint(sets[j]):
                raise SolutionMismatch("solution paths share an IRS")
    gamma = coherent_power([p.amplitude for p in paths], alphas)
    return RoutingSolution(OK, paths, alphas, gamma)
