"""Optimal spreading sequences for asynchronous CDMA.

The desired user's SINR-optimal sequence is the minimum eigenvector of an
interference matrix built from the other users' weighted DFT powers. This
package builds that matrix, extracts the eigenpair, evaluates SINR/SIR,
capacity and eigenvalue bounds, runs the block-coordinate sweep over all
users, and checks the formulas against a chip-level Monte-Carlo link.
"""

from .errors import (
    CdmaError,
    CountOutOfRange,
    DimensionMismatch,
    IndexOutOfRange,
    NoConvergence,
    NotHermitian,
    TauOutOfRange,
    ZeroVector,
)
from .sequences import SequenceSet, SpreadingSequence, gold_codes, normalize, random_sequences
from .params import SystemParams
from .spectral import (
    InterferenceMatrix,
    SpectralWeights,
    SpectrumProfile,
    build_sigma,
    pair_interference,
    quad_forms,
    transform_powers,
)
from .eigen import EigenPair, min_eigenpair
from .optimizer import SingleUserSolution, SweepTrace, harmonic_mean_sq_sinr, run_algorithm1, solve_single
from .metrics import BoundsReport, capacity, max_sinr, mean_squared_sinr, sinr, sinr_bounds, sir
from .simulator import BerReport, SimConfig, TrialDraw, aperiodic_xcorr, interference_term, run_ber, run_trial

__version__ = "0.1.0"
