import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irsroute.arraygeom import IrsPose, ula_response, upa_response
from irsroute.codebook import (
    Codebook,
    CodebookSet,
    best_bs_beam,
    best_irs_beam,
    dft_codebook,
    phase_codebook,
)


@pytest.mark.parametrize("n", [1, 4, 16])
def test_square_dft_codebook_is_orthonormal(n):
    w = dft_codebook(n, n).vectors
    np.testing.assert_allclose(w @ w.conj().T, np.eye(n), atol=1e-12)


def test_oversampled_dft_is_unit_norm():
    w = dft_codebook(64, 16).vectors
    np.testing.assert_allclose(np.linalg.norm(w, axis=1), 1.0)


def test_undersampled_dft_rejected_but_phase_codebook_allowed():
    with pytest.raises(ValueError):
        dft_codebook(8, 16)
    cb = phase_codebook(8, 16)
    assert (cb.size, cb.n) == (8, 16)
    np.testing.assert_allclose(np.abs(cb.vectors), 1.0)


def test_bs_beam_matches_loop_oracle():
    rng = np.random.default_rng(3)
    cb = dft_codebook(16, 8)
    for _ in range(50):
        resp = ula_response(8, 0.5, rng.uniform(-1, 1))
        scores = [abs(np.vdot(resp, cb[k])) for k in range(cb.size)]
        k, val = best_bs_beam(cb, resp)
        assert k == int(np.argmax(scores))
        assert val == pytest.approx(np.vdot(resp, cb[k]))


def test_bs_beam_tie_takes_lowest_index():
    base = dft_codebook(4, 4).vectors
    cb = Codebook(np.vstack([base[2], base[1], base[1]]))
    k, _ = best_bs_beam(cb, base[1] * 2)
    assert k == 1


def test_bs_on_grid_gain_is_sqrt_n():
    cb = dft_codebook(16, 16)
    resp = ula_response(16, 0.5, 2 * 3 / 16)  # phase step 2 pi 3/16 -> beam 3
    k, val = best_bs_beam(cb, resp)
    assert k == 3
    assert abs(val) == pytest.approx(4.0)


def _irs_oracle(cb, incoming, outgoing):
    best = (-1.0, None)
    ph = cb.phases()
    for kv in range(cb.size):
        for kh in range(cb.size):
            theta = np.kron(ph[kv], ph[kh])
            val = abs(np.sum(outgoing.conj() * theta * incoming))
            if val > best[0] + 1e-12:
                best = (val, (kv, kh))
    return best


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(2, 9), st.integers(0, 2 ** 32 - 1))
def test_irs_beam_matches_double_loop(m0, size, seed):
    rng = np.random.default_rng(seed)
    cb = phase_codebook(size, m0)
    pose = IrsPose.facing([0, 0, 0], [1, 0, 0], m0=m0)
    inc = upa_response(pose, rng.normal(size=3))
    out = upa_response(pose, rng.normal(size=3))
    sel = best_irs_beam(cb, cb, inc, out)
    val, idx = _irs_oracle(cb, inc, out)
    assert abs(sel.gain) == pytest.approx(val, rel=1e-10)
    assert (sel.v_index, sel.h_index) == idx
    np.testing.assert_allclose(np.abs(sel.theta), 1.0)
    assert sel.gain == pytest.approx(np.sum(out.conj() * sel.theta * inc))


def test_irs_aligned_gain_reaches_element_count():
    m0 = 8
    pose = IrsPose.facing([0, 0, 0], [1, 0, 0], m0=m0)
    cb = phase_codebook(m0, m0)
    # directions whose phase steps land on the codebook grid (spacing 1/4 wavelength)
    inc = upa_response(pose, [1, 0, 0])
    out = upa_response(pose, [0.5 ** 0.5, 0.5, -0.5])
    sel = best_irs_beam(cb, cb, inc, out)
    assert abs(sel.gain) == pytest.approx(m0 * m0, rel=1e-9)


def test_codebook_set_caches_by_m0():
    cs = CodebookSet(8, bs_size=8, irs_size_per_dim=16)
    assert cs.irs(4) is cs.irs(4)
    assert cs.irs(6).n == 6
    assert cs.bs.size == 8
