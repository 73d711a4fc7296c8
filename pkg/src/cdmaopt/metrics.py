"""SINR, SIR, maximum SINR, capacity and eigenvalue bounds.

Every quantity here is a function of ``x = interference / (6 N) + N0 / (2PT)``
in the form ``x ** -1/2``. A zero denominator (no interferers, no noise)
maps to ``inf`` instead of raising so that noise-free sweep traces stay
plottable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .optimizer import harmonic_mean_sq_sinr
from .params import SystemParams
from .sequences import SequenceSet
from .spectral import InterferenceMatrix, total_interference


@dataclass(frozen=True)
class BoundsReport:
    lam_lower: float
    lam_upper: float
    sinr_upper: float
    sinr_lower: float


def _inv_sqrt(x: float) -> float:
    return math.inf if x <= 0.0 else float(x) ** -0.5


def sinr(seqs: SequenceSet, i: int, params: SystemParams) -> float:
    seqs.check_user(i)
    N = seqs.N
    interference = total_interference(seqs)[i]
    return _inv_sqrt(interference / (6.0 * N * N) + params.noise_term)


def sir(seqs: SequenceSet, i: int) -> float:
    """SINR with the thermal noise removed."""
    seqs.check_user(i)
    N = seqs.N
    return _inv_sqrt(total_interference(seqs)[i] / (6.0 * N * N))


def inverse_sq_sir(seqs: SequenceSet) -> np.ndarray:
    """Per-user SIR^-2, the quantity averaged in the convergence plots."""
    N = seqs.N
    return total_interference(seqs) / (6.0 * N * N)


def max_sinr(lambda_min: float, params: SystemParams) -> float:
    """SINR reached by the optimal sequence when the interference eigenvalue is ``lambda_min``."""
    if lambda_min < 0:
        raise ValueError(f"lambda_min must be nonnegative, got {lambda_min}")
    return _inv_sqrt(lambda_min / (6.0 * params.N) + params.noise_term)


def capacity(lambda_min: float, params: SystemParams, base: float = 2.0) -> float:
    """Gaussian-input capacity ``0.5 log(1 + SINR*^2)``; base 2 gives bits per use."""
    s = max_sinr(lambda_min, params)
    if math.isinf(s):
        return math.inf
    return 0.5 * math.log1p(s * s) / math.log(base)


def sinr_bounds(sigma: InterferenceMatrix, params: SystemParams) -> BoundsReport:
    """Bracket the minimum eigenvalue with the diagonal spectra and map to SINR.

    The lower bound adds the two smallest diagonal entries (min of a sum is
    at least the sum of mins). The upper bound follows from Weyl's
    inequality with one term at its extreme eigenvalue.
    """
    lam, lam_hat = sigma.lam, sigma.lam_hat
    lower = float(lam.min() + lam_hat.min())
    upper = float(min(lam.min() + lam_hat.max(), lam.max() + lam_hat.min()))
    N = sigma.N
    noise = params.noise_term
    return BoundsReport(
        lam_lower=lower,
        lam_upper=upper,
        sinr_upper=_inv_sqrt(lower / (6.0 * N) + noise),
        sinr_lower=_inv_sqrt(upper / (6.0 * N) + noise),
    )


def mean_squared_sinr(seqs: SequenceSet, params: SystemParams) -> tuple[float, float]:
    """Arithmetic and harmonic means of SINR^2 over the users."""
    N = seqs.N
    x = total_interference(seqs) / (6.0 * N * N) + params.noise_term
    with np.errstate(divide="ignore"):
        sq = np.where(x > 0.0, 1.0 / np.where(x > 0.0, x, 1.0), np.inf)
    return float(sq.mean()), harmonic_mean_sq_sinr(seqs, params)
