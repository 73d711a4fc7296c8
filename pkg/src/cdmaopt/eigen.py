"""Minimum eigenpair of a Hermitian matrix with a canonical eigenvector phase."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitian, NoConvergence

HERMITIAN_ATOL = 1e-10
RESIDUAL_RTOL = 1e-10
TIE_ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class EigenPair:
    value: float
    vector: np.ndarray
    residual: float


def canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` so its largest-modulus entry is real and nonnegative.

    Ties within 1e-12 go to the lowest index.
    """
    v = np.asarray(v, dtype=np.complex128)
    mod = np.abs(v)
    peak = mod.max()
    if peak == 0.0:
        return v.copy()
    j = int(np.flatnonzero(mod >= peak - TIE_ATOL)[0])
    if v[j].imag == 0.0 and v[j].real >= 0.0:
        return v.copy()
    out = v * (np.conj(v[j]) / mod[j])
    out[j] = mod[j]
    return out


def min_eigenpair(H) -> EigenPair:
    """Smallest eigenvalue of Hermitian ``H`` and a canonical unit eigenvector."""
    H = np.asarray(H, dtype=np.complex128)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {H.shape}")
    dev = np.max(np.abs(H - H.conj().T)) if H.size else 0.0
    if dev > HERMITIAN_ATOL:
        raise NotHermitian(f"max |H - H*| = {dev:.3e}")

    try:
        w, U = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"eigensolver failed: {exc}") from exc

    value = float(w[0])
    u = U[:, 0] / np.linalg.norm(U[:, 0])
    u = canonical_phase(u)
    residual = float(np.linalg.norm(H @ u - value * u))
    bound = RESIDUAL_RTOL * max(1.0, float(np.linalg.norm(H)))
    if not residual <= bound:
        raise NoConvergence(f"residual {residual:.3e} exceeds {bound:.3e}", residual)
    return EigenPair(value, u, residual)
