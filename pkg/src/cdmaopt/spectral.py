"""Weighted DFT powers and the interference matrix of one desired user.

Two length-N unitary transforms are used: ``V`` samples the spectrum at
frequencies m/N and ``V_hat`` at the half-bin offsets m/N + 1/(2N), both
with m = 1..N. Together they are the even and odd bins of a length-2N
zero-padded DFT, which is how the fast path evaluates them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch
from .sequences import SequenceSet, SpreadingSequence


def _chips(s) -> np.ndarray:
    if isinstance(s, SpreadingSequence):
        return s.chips
    return np.asarray(s, dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class SpectralWeights:
    """Per-bin weights ``sqrt(1 + cos(2 pi f) / 2)`` on both frequency grids."""

    N: int
    w: np.ndarray
    w_hat: np.ndarray

    @classmethod
    def for_length(cls, N: int) -> SpectralWeights:
        return _weights(int(N))


@lru_cache(maxsize=64)
def _weights(N: int) -> SpectralWeights:
    if N < 2:
        raise DimensionMismatch(f"N must be >= 2, got {N}")
    m = np.arange(1, N + 1)
    w = np.sqrt(1.0 + 0.5 * np.cos(2.0 * np.pi * m / N))
    w_hat = np.sqrt(1.0 + 0.5 * np.cos(2.0 * np.pi * (m / N + 0.5 / N)))
    w.flags.writeable = False
    w_hat.flags.writeable = False
    return SpectralWeights(N, w, w_hat)


@dataclass(frozen=True, eq=False)
class SpectrumProfile:
    """Quadratic forms ``s* Q_m s`` (``q``) and ``s* Q_hat_m s`` (``q_hat``)."""

    q: np.ndarray
    q_hat: np.ndarray


@dataclass(frozen=True, eq=False)
class InterferenceMatrix:
    """Interference matrix seen by ``excluded_user`` with its diagonal data.

    ``sigma = V* diag(lam) V + V_hat* diag(lam_hat) V_hat``.
    """

    sigma: np.ndarray
    lam: np.ndarray
    lam_hat: np.ndarray
    excluded_user: int

    @property
    def N(self) -> int:
        return self.lam.size


def transform_matrices(N: int, offset: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Dense ``V`` and ``V_hat`` with indices running ``offset .. offset + N - 1``.

    Used as the O(N^2) reference and for building ``sigma``.
    """
    idx = np.arange(offset, offset + N)
    m, n = idx[:, None], idx[None, :]
    scale = 1.0 / np.sqrt(N)
    V = scale * np.exp(-2j * np.pi * m * n / N)
    V_hat = scale * np.exp(-2j * np.pi * n * (m / N + 0.5 / N))
    return V, V_hat


def transform_powers(s) -> tuple[np.ndarray, np.ndarray]:
    """``|V s|^2`` and ``|V_hat s|^2`` (m = 1..N) via one 2N-point FFT."""
    x = _chips(s)
    N = x.size
    # Chip n (1-based) sits at array slot n-1; the resulting unit-modulus
    # phase factor per bin drops out of |.|^2.
    F = np.fft.fft(x, 2 * N)
    p = np.abs(np.roll(F[0::2], -1)) ** 2 / N
    p_hat = np.abs(np.roll(F[1::2], -1)) ** 2 / N
    return p, p_hat


def quad_forms(s, weights: SpectralWeights | None = None) -> SpectrumProfile:
    x = _chips(s)
    if weights is None:
        weights = SpectralWeights.for_length(x.size)
    if weights.N != x.size:
        raise DimensionMismatch(f"weights for N={weights.N}, sequence has N={x.size}")
    p, p_hat = transform_powers(x)
    return SpectrumProfile(weights.w * p, weights.w_hat * p_hat)


def profile_matrix(chips: np.ndarray, weights: SpectralWeights | None = None):
    """Stacked quadratic forms for a K x N chip matrix: arrays of shape (K, N)."""
    chips = np.atleast_2d(chips)
    N = chips.shape[1]
    if weights is None:
        weights = SpectralWeights.for_length(N)
    if weights.N != N:
        raise DimensionMismatch(f"weights for N={weights.N}, sequences have N={N}")
    F = np.fft.fft(chips, 2 * N, axis=1)
    p = np.abs(np.roll(F[:, 0::2], -1, axis=1)) ** 2 / N
    p_hat = np.abs(np.roll(F[:, 1::2], -1, axis=1)) ** 2 / N
    return weights.w * p, weights.w_hat * p_hat


def pair_interference(s_i, s_k, weights: SpectralWeights | None = None) -> float:
    """Sum over m of ``S_m^{i,k}``; symmetric in its two arguments."""
    a, b = _chips(s_i), _chips(s_k)
    if a.size != b.size:
        raise DimensionMismatch(f"lengths differ: {a.size} vs {b.size}")
    pa, pb = quad_forms(a, weights), quad_forms(b, weights)
    return float(pa.q @ pb.q + pa.q_hat @ pb.q_hat)


def interference_spectrum(seqs: SequenceSet, i: int, weights: SpectralWeights | None = None):
    """``(lam, lam_hat)``: weighted sums of the interferers' quadratic forms."""
    seqs.check_user(i)
    if weights is None:
        weights = SpectralWeights.for_length(seqs.N)
    q, q_hat = profile_matrix(seqs.as_array(), weights)
    mask = np.arange(seqs.K) != i
    lam = weights.w * q[mask].sum(axis=0)
    lam_hat = weights.w_hat * q_hat[mask].sum(axis=0)
    return lam, lam_hat


def build_sigma(seqs: SequenceSet, i: int, weights: SpectralWeights | None = None) -> InterferenceMatrix:
    """Dense interference matrix for desired user ``i`` (0-based)."""
    lam, lam_hat = interference_spectrum(seqs, i, weights)
    V, V_hat = transform_matrices(seqs.N)
    sigma = (V.conj().T * lam) @ V + (V_hat.conj().T * lam_hat) @ V_hat
    # Symmetrize away rounding so downstream Hermitian checks are exact.
    sigma = 0.5 * (sigma + sigma.conj().T)
    return InterferenceMatrix(sigma, lam, lam_hat, i)


def total_interference(seqs: SequenceSet, weights: SpectralWeights | None = None) -> np.ndarray:
    """Per-user interference sums ``sum_{k != i} sum_m S_m^{i,k}``, shape (K,)."""
    q, q_hat = profile_matrix(seqs.as_array(), weights)
    gram = q @ q.T + q_hat @ q_hat.T
    np.fill_diagonal(gram, 0.0)
    return gram.sum(axis=1)
