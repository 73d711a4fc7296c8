"""Spreading-sequence containers and the Gold / random generators.

Sequences are stored as complex128 chip vectors with squared norm N. Users
are indexed from 0 in the library; the CLI reports them from 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import CountOutOfRange, DimensionMismatch, IndexOutOfRange, ZeroVector

NORM_RTOL = 1e-9

# Preferred pair of degree-5 polynomials, listed by their nonzero exponents
# below the leading term: x^5 + x^2 + 1 and x^5 + x^4 + x^3 + x^2 + 1.
GOLD_POLY_A = (2, 0)
GOLD_POLY_B = (4, 3, 2, 0)
GOLD_DEGREE = 5
GOLD_LENGTH = 2**GOLD_DEGREE - 1
GOLD_FAMILY_SIZE = GOLD_LENGTH + 2


@dataclass(frozen=True, eq=False)
class SpreadingSequence:
    """Length-N complex chip vector with ``sum |chips|^2 == N``."""

    chips: np.ndarray

    def __post_init__(self):
        chips = np.array(self.chips, dtype=np.complex128).reshape(-1)
        chips.flags.writeable = False
        object.__setattr__(self, "chips", chips)
        n = chips.size
        if n < 2:
            raise DimensionMismatch(f"sequence length must be >= 2, got {n}")
        energy = float(np.vdot(chips, chips).real)
        if abs(energy - n) > NORM_RTOL * n:
            raise ValueError(f"squared norm {energy!r} differs from N={n}")

    @property
    def N(self) -> int:
        return self.chips.size

    def __len__(self):
        return self.chips.size

    def __eq__(self, other):
        if not isinstance(other, SpreadingSequence):
            return NotImplemented
        return np.array_equal(self.chips, other.chips)

    def __hash__(self):
        return hash(self.chips.tobytes())


@dataclass(frozen=True, eq=False)
class SequenceSet:
    """K spreading sequences of a common length N."""

    sequences: tuple[SpreadingSequence, ...] = field(default_factory=tuple)

    def __post_init__(self):
        seqs = tuple(
            s if isinstance(s, SpreadingSequence) else SpreadingSequence(s) for s in self.sequences
        )
        if not seqs:
            raise DimensionMismatch("a sequence set needs at least one user")
        lengths = {s.N for s in seqs}
        if len(lengths) != 1:
            raise DimensionMismatch(f"sequences have mixed lengths {sorted(lengths)}")
        object.__setattr__(self, "sequences", seqs)

    @classmethod
    def from_array(cls, chips) -> SequenceSet:
        arr = np.atleast_2d(np.asarray(chips))
        return cls(tuple(SpreadingSequence(row) for row in arr))

    @property
    def K(self) -> int:
        return len(self.sequences)

    @property
    def N(self) -> int:
        return self.sequences[0].N

    def as_array(self) -> np.ndarray:
        """K x N complex matrix of chips (a copy)."""
        return np.stack([s.chips for s in self.sequences])

    def check_user(self, i: int) -> int:
        if not 0 <= i < self.K:
            raise IndexOutOfRange(f"user index {i} outside 0..{self.K - 1}")
        return i

    def replace(self, i: int, seq: SpreadingSequence) -> SequenceSet:
        self.check_user(i)
        if seq.N != self.N:
            raise DimensionMismatch(f"replacement has N={seq.N}, set has N={self.N}")
        seqs = list(self.sequences)
        seqs[i] = seq
        return SequenceSet(tuple(seqs))

    def __len__(self):
        return self.K

    def __iter__(self):
        return iter(self.sequences)

    def __getitem__(self, i):
        return self.sequences[i]

    def __eq__(self, other):
        if not isinstance(other, SequenceSet):
            return NotImplemented
        return self.K == other.K and all(a == b for a, b in zip(self.sequences, other.sequences))

    __hash__ = None

    # -- JSON file format -------------------------------------------------

    def to_json(self) -> str:
        # repr() of a float is the shortest string that round-trips exactly,
        # which is never longer than 17 significant digits.
        rows = []
        for s in self.sequences:
            chips = ", ".join(f"[{float(c.real)!r}, {float(c.imag)!r}]" for c in s.chips)
            rows.append(f"    [{chips}]")
        body = ",\n".join(rows)
        return f'{{\n  "N": {self.N},\n  "K": {self.K},\n  "sequences": [\n{body}\n  ]\n}}\n'

    @classmethod
    def from_json(cls, text: str) -> SequenceSet:
        data = json.loads(text)
        try:
            n, k, raw = int(data["N"]), int(data["K"]), data["sequences"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed sequence-set document: {exc}") from None
        arr = np.array(raw, dtype=float)
        if arr.ndim != 3 or arr.shape != (k, n, 2):
            raise DimensionMismatch(f"expected sequences of shape ({k}, {n}, 2), got {arr.shape}")
        return cls.from_array(arr[..., 0] + 1j * arr[..., 1])

    def save(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path) -> SequenceSet:
        return cls.from_json(Path(path).read_text())


def normalize(raw: Iterable[complex] | np.ndarray) -> SpreadingSequence:
    """Scale ``raw`` to squared norm N."""
    v = np.asarray(raw, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ZeroVector("cannot normalize the zero vector")
    return SpreadingSequence(v * (np.sqrt(v.size) / norm))


def lfsr_bits(exponents: Sequence[int], degree: int, state: int | None = None) -> np.ndarray:
    """One period of the binary m-sequence for a primitive polynomial.

    ``exponents`` are the nonzero terms of the polynomial below ``x**degree``
    (0 must be among them). The output obeys the linear recurrence
    ``a[n + degree] = xor(a[n + e] for e in exponents)`` and the first
    ``degree`` output bits are the initial register contents (all ones by
    default).
    """
    if 0 not in exponents:
        raise ValueError("polynomial must have a constant term")
    period = 2**degree - 1
    if state is None:
        state = period
    a = [(state >> b) & 1 for b in range(degree)]
    if not any(a):
        raise ValueError("register state must be nonzero")
    for n in range(period - degree):
        bit = 0
        for e in exponents:
            bit ^= a[n + e]
        a.append(bit)
    return np.array(a, dtype=np.uint8)


def _bits_to_chips(bits: np.ndarray) -> np.ndarray:
    return 1.0 - 2.0 * bits.astype(float)


def gold_family_bits() -> list[np.ndarray]:
    """All 33 Gold sequences of length 31 as bit arrays.

    Order: m-sequence A, m-sequence B, then ``A xor roll(B, -j)`` for
    j = 0..30.
    """
    a = lfsr_bits(GOLD_POLY_A, GOLD_DEGREE)
    b = lfsr_bits(GOLD_POLY_B, GOLD_DEGREE)
    family = [a, b]
    family.extend(a ^ np.roll(b, -j) for j in range(GOLD_LENGTH))
    return family


def gold_codes(count: int) -> SequenceSet:
    """The first ``count`` members of the length-31 Gold family as +/-1 chips."""
    if not 1 <= count <= GOLD_FAMILY_SIZE:
        raise CountOutOfRange(f"gold family has {GOLD_FAMILY_SIZE} members, asked for {count}")
    family = gold_family_bits()[:count]
    return SequenceSet(tuple(SpreadingSequence(_bits_to_chips(b)) for b in family))


def random_sequences(K: int, N: int, seed: int) -> SequenceSet:
    """K independent uniform +/-1 sequences of length N, reproducible from ``seed``."""
    if K < 1:
        raise CountOutOfRange(f"K must be >= 1, got {K}")
    if N < 2:
        raise DimensionMismatch(f"N must be >= 2, got {N}")
    rng = np.random.default_rng(seed)
    signs = rng.integers(0, 2, size=(K, N))
    return SequenceSet.from_array(_bits_to_chips(signs))
