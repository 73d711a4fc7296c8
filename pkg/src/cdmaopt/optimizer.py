"""Single-user optimal sequence and the all-user block-coordinate sweep.

Replacing user i's sequence by the minimum eigenvector of its interference
matrix minimises every term of the total objective

    F = sum_i sum_{k != i} sum_m S_m^{i,k}

that involves user i, because ``S^{i,k} = S^{k,i}`` makes F equal to
``2 s_i* Sigma_i s_i`` plus terms independent of ``s_i``. Sweeping the users
in turn therefore never increases F.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .eigen import canonical_phase, min_eigenpair
from .params import SystemParams
from .sequences import SequenceSet, SpreadingSequence
from .spectral import SpectralWeights, build_sigma, total_interference

log = logging.getLogger(__name__)

DEFAULT_L = 50
DEFAULT_EPS = 1e-8


@dataclass(frozen=True)
class SingleUserSolution:
    sequence: SpreadingSequence
    lambda_min: float
    objective: float


@dataclass
class SweepRecord:
    sweep: int
    objective: float
    lambda_min: list[float]
    converged: bool


@dataclass
class UpdateRecord:
    """State right after one user update inside a sweep."""

    sweep: int
    user: int
    lambda_min: float
    objective: float
    displacement: float


@dataclass
class SweepTrace:
    """History of a run: the initial objective, every update and every sweep."""

    initial_objective: float
    updates: list[UpdateRecord] = field(default_factory=list)
    sweeps: list[SweepRecord] = field(default_factory=list)
    snapshots: dict[int, SequenceSet] = field(default_factory=dict)

    @property
    def objectives(self) -> np.ndarray:
        """F before any update followed by F after each update."""
        return np.array([self.initial_objective] + [u.objective for u in self.updates])

    @property
    def converged(self) -> bool:
        return bool(self.sweeps) and self.sweeps[-1].converged


def objective(seqs: SequenceSet, weights: SpectralWeights | None = None) -> float:
    """Total pairwise interference F (each unordered pair counted twice)."""
    return float(total_interference(seqs, weights).sum())


def solve_single(seqs: SequenceSet, i: int, weights: SpectralWeights | None = None) -> SingleUserSolution:
    """Best sequence for user ``i`` with every other user held fixed."""
    sig = build_sigma(seqs, i, weights)
    pair = min_eigenpair(sig.sigma)
    N = seqs.N
    lam = max(pair.value, 0.0)
    return SingleUserSolution(SpreadingSequence(np.sqrt(N) * pair.vector), lam, N * lam)


def run_algorithm1(
    initial: SequenceSet,
    L: int = DEFAULT_L,
    eps: float = DEFAULT_EPS,
    snapshot_at=(),
) -> tuple[SequenceSet, SweepTrace]:
    """Sweep users 0..K-1 in order, each replaced by its single-user optimum.

    Updates are visible to later users in the same sweep. Stops after ``L``
    sweeps or once no user moved by more than ``eps * sqrt(N)`` (both old and
    new sequences compared in canonical phase). ``snapshot_at`` lists sweep
    counts whose resulting sets are kept in ``trace.snapshots``; sweep 0 is
    the initial set.
    """
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    weights = SpectralWeights.for_length(initial.N)
    wanted = set(snapshot_at)
    current = initial
    trace = SweepTrace(objective(current, weights))
    if 0 in wanted:
        trace.snapshots[0] = current
    tol = eps * np.sqrt(initial.N)

    for sweep in range(1, L + 1):
        lams = []
        moved = 0.0
        for k in range(current.K):
            sol = solve_single(current, k, weights)
            old = canonical_phase(current[k].chips)
            disp = float(np.linalg.norm(sol.sequence.chips - old))
            moved = max(moved, disp)
            current = current.replace(k, sol.sequence)
            lams.append(sol.lambda_min)
            trace.updates.append(UpdateRecord(sweep, k, sol.lambda_min, objective(current, weights), disp))
        converged = moved <= tol
        trace.sweeps.append(SweepRecord(sweep, trace.updates[-1].objective, lams, converged))
        if sweep in wanted:
            trace.snapshots[sweep] = current
        log.debug("sweep %d: F=%.6e max displacement %.3e", sweep, trace.sweeps[-1].objective, moved)
        if converged:
            # Later snapshots equal the converged set.
            for s in wanted:
                if s > sweep:
                    trace.snapshots[s] = current
            break
    return current, trace


def harmonic_mean_sq_sinr(seqs: SequenceSet, params: SystemParams) -> float:
    """Harmonic mean over users of SINR^2."""
    N, K = seqs.N, seqs.K
    denom = objective(seqs) / (6.0 * N * N) + K * params.noise_term
    if denom <= 0.0:
        return float("inf")
    return K / denom
