import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scenegen import random_scene

from irsroute.beamrouting import build_los_graph, route_cba
from irsroute.codebook import CodebookSet, dft_codebook
from irsroute.fullchannel import (
    NetworkConfiguration,
    compose_precoder,
    configuration_from_solution,
    dbm_to_watts,
    effective_channel_dp,
    path_sum_channel,
    random_phase_power,
    received_power,
    watts_to_dbm,
)
from irsroute.scenario import load_bundled


def _random_config(sc, rng, p_active=0.7):
    active = {j: np.exp(2j * np.pi * rng.random(sc.node(j).n_elements))
              for j in range(1, sc.user_index) if rng.random() < p_active}
    w = rng.normal(size=sc.bs.n_b) + 1j * rng.normal(size=sc.bs.n_b)
    return NetworkConfiguration(active, w / np.linalg.norm(w))


def _close(a, b, rel=1e-10):
    scale = max(np.linalg.norm(a), np.linalg.norm(b), 1e-300)
    return np.linalg.norm(a - b) <= rel * scale


def test_dp_equals_path_sum_on_bundled_scene():
    sc = load_bundled("paperlike-7irs")
    g = build_los_graph(sc)
    rng = np.random.default_rng(11)
    for _ in range(5):
        cfg = _random_config(sc, rng, p_active=1.0)
        assert _close(effective_channel_dp(g, sc, cfg).row_vector,
                      path_sum_channel(g, sc, cfg).row_vector)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_dp_equals_path_sum_random(seed):
    sc = random_scene(seed)
    g = build_los_graph(sc)
    cfg = _random_config(sc, np.random.default_rng(seed))
    dp = effective_channel_dp(g, sc, cfg).row_vector
    ps = path_sum_channel(g, sc, cfg)
    assert _close(dp, ps.row_vector)
    assert complex(dp @ cfg.bs_precoder) == pytest.approx(sum(ps.per_path_contributions.values()),
                                                          rel=1e-9, abs=1e-300)


def test_inactive_network_gives_zero_channel():
    sc = load_bundled("paperlike-7irs")
    cfg = NetworkConfiguration({}, np.ones(sc.bs.n_b) / 4)
    assert not np.any(effective_channel_dp(build_los_graph(sc), sc, cfg).row_vector)


def test_compose_precoder_unit_norm_for_distinct_beams():
    cb = dft_codebook(16, 16)
    w = compose_precoder([cb[0], cb[5], cb[11]], [0.5, 0.3, 0.2], [0.1, -2.0, 1.0])
    assert np.linalg.norm(w) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        compose_precoder([cb[0]], [0.5, 0.5], [0.0])


def test_configuration_renormalizes_shared_beam():
    sc = load_bundled("paperlike-7irs")
    sol = route_cba(sc)
    shared = [p.__class__(p.irs_sequence, p.value, 0, p.irs_selections, p.user_index) for p in sol.paths]
    sol.paths = shared
    cfg = configuration_from_solution(sol, CodebookSet.for_scenario(sc))
    assert np.linalg.norm(cfg.bs_precoder) == pytest.approx(1.0, abs=1e-12)


def test_single_path_full_channel_equals_interference_free():
    sc = load_bundled("single-irs")
    sol = route_cba(sc)
    cb = CodebookSet.for_scenario(sc)
    cfg = configuration_from_solution(sol, cb)
    dbm, watts = received_power(effective_channel_dp(build_los_graph(sc), sc, cfg), cfg.bs_precoder, 30.0)
    assert watts == pytest.approx(sol.gamma_u * 1.0, rel=1e-10)  # 30 dBm = 1 W
    assert dbm == pytest.approx(watts_to_dbm(sol.gamma_u))


def test_orthogonal_disjoint_paths_have_no_leakage():
    sc = load_bundled("disjoint-2path")
    sol = route_cba(sc)
    cfg = configuration_from_solution(sol, CodebookSet.for_scenario(sc))
    _, watts = received_power(effective_channel_dp(build_los_graph(sc), sc, cfg), cfg.bs_precoder,
                              sc.transmit_power_dbm)
    assert watts == pytest.approx(sol.gamma_u * dbm_to_watts(sc.transmit_power_dbm), rel=1e-9)


def test_bundled_scene_gap_is_small():
    sc = load_bundled("paperlike-7irs")
    sol = route_cba(sc)
    cfg = configuration_from_solution(sol, CodebookSet.for_scenario(sc))
    _, watts = received_power(effective_channel_dp(build_los_graph(sc), sc, cfg), cfg.bs_precoder, 30.0)
    assert abs(10 * math.log10(watts / sol.gamma_u)) < 0.01


def test_power_conversions():
    assert dbm_to_watts(30.0) == 1.0
    assert dbm_to_watts(0.0) == pytest.approx(1e-3)
    assert watts_to_dbm(1e-3) == pytest.approx(0.0, abs=1e-12)
    assert watts_to_dbm(0.0) == -math.inf


@settings(max_examples=200)
@given(st.lists(st.floats(1e-3, 10), min_size=1, max_size=6), st.integers(0, 2 ** 32 - 1))
def test_random_phase_never_beats_coherent(amps, seed):
    alphas = [a * a / sum(b * b for b in amps) for a in amps]
    assert random_phase_power(amps, alphas, seed) <= sum(a * a for a in amps) * (1 + 1e-12)


def test_random_phase_deterministic_per_seed():
    assert random_phase_power([1, 2], [0.2, 0.8], [3, 4]) == random_phase_power([1, 2], [0.2, 0.8], [3, 4])
    with pytest.raises(ValueError):
        random_phase_power([1, 2], [1.0], 0)
