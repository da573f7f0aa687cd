"""DFT beam codebooks and argmax beam selection.

BS beams are unit-norm DFT columns. IRS reflection vectors are the
Kronecker product of one vertical and one horizontal codeword with the
normalization dropped, so every element is a pure phase shift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Codebook:
    vectors: np.ndarray  # (size, n), one codeword per row

    @property
    def size(self) -> int:
        return self.vectors.shape[0]

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    def __getitem__(self, k: int) -> np.ndarray:
        return self.vectors[k]

    def phases(self) -> np.ndarray:
        """Codewords rescaled to unit-modulus entries."""
        return self.vectors / np.abs(self.vectors)


def _dft_rows(size: int, n: int) -> np.ndarray:
    k = np.arange(size)[:, None]
    m = np.arange(n)[None, :]
    return np.exp(2j * np.pi * k * m / size)


def dft_codebook(size: int, n: int) -> Codebook:
    """``size`` unit-norm beams for an ``n``-element array; orthonormal when ``size == n``."""
    if n < 1:
        raise ValueError("array size must be >= 1")
    if size < n:
        raise ValueError(f"undersampled codebook not supported (size={size} < n={n})")
    return Codebook(_dft_rows(size, n) / np.sqrt(n))


def phase_codebook(size: int, n: int) -> Codebook:
    """Unit-modulus DFT phase profiles for one IRS dimension.

    Unlike :func:`dft_codebook` this accepts ``size < n``; passive reflection
    has no orthogonality requirement, the grid is just coarser.
    """
    if size < 1 or n < 1:
        raise ValueError("codebook and array sizes must be >= 1")
    return Codebook(_dft_rows(size, n))


@dataclass(frozen=True, eq=False)
class IrsBeamSelection:
    v_index: int
    h_index: int
    theta: np.ndarray
    gain: complex


def best_bs_beam(codebook: Codebook, bs_response: np.ndarray) -> tuple[int, complex]:
    """Index maximizing ``|bs_response^H w|`` (lowest index on ties) and that inner product."""
    if codebook.size == 0:
        raise ValueError("empty codebook")
    if codebook.n != len(bs_response):
        raise ValueError(f"codebook dimension {codebook.n} != response length {len(bs_response)}")
    values = codebook.vectors @ bs_response.conj()
    k = int(np.argmax(np.abs(values)))
    return k, complex(values[k])


def best_irs_beam(cb_h: Codebook, cb_v: Codebook, incoming: np.ndarray,
                  outgoing: np.ndarray) -> IrsBeamSelection:
    """Exhaustive search of ``|outgoing^H diag(theta) incoming|`` over the product codebook.

    All ``size_v * size_h`` candidates are scored at once as
    ``V @ Z @ H^T`` with ``Z`` the reshaped elementwise product
    ``conj(outgoing) * incoming``. Ties go to the lowest ``(v, h)`` pair.
    """
    m0 = cb_h.n
    if cb_v.n != m0 or len(incoming) != m0 * m0 or len(outgoing) != m0 * m0:
        raise ValueError("incoming/outgoing length must equal the product codebook dimension")
    z = (outgoing.conj() * incoming).reshape(m0, m0)
    v_ph, h_ph = cb_v.phases(), cb_h.phases()
    scores = v_ph @ z @ h_ph.T
    flat = int(np.argmax(np.abs(scores)))
    kv, kh = divmod(flat, cb_h.size)
    theta = np.kron(v_ph[kv], h_ph[kh])
    return IrsBeamSelection(kv, kh, theta, complex(scores[kv, kh]))


class CodebookSet:
    """BS codebook plus per-``m0`` IRS phase codebooks, built lazily."""

    def __init__(self, n_b: int, bs_size: int = 16, irs_size_per_dim: int = 64):
        self.bs = dft_codebook(bs_size, n_b)
        self.irs_size_per_dim = irs_size_per_dim
        self._irs: dict[int, Codebook] = {}

    @classmethod
    def for_scenario(cls, scenario, irs_size_per_dim: int | None = None) -> "CodebookSet":
        return cls(scenario.bs.n_b, scenario.bs_codebook_size,
                   irs_size_per_dim or scenario.irs_codebook_size_per_dim)

    def irs(self, m0: int) -> Codebook:
        """Per-dimension codebook; used for both the horizontal and vertical factor."""
        if m0 not in self._irs:
            self._irs[m0] = phase_codebook(self.irs_size_per_dim, m0)
        return self._irs[m0]
