"""System parameters shared by the metric, optimizer and simulator code."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SystemParams:
    """Link parameters; ``T`` is derived as ``N * Tc``.

    ``N0`` is the noise parameter with two-sided spectral density ``N0 / 2``.
    The energy per bit is taken as ``Eb = P * T``.
    """

    N: int
    K: int
    P: float = 1.0
    Tc: float = 1.0
    N0: float = 0.0
    T: float = field(init=False)

    def __post_init__(self):
        if self.N < 2 or self.K < 1:
            raise ValueError(f"need N >= 2 and K >= 1, got N={self.N}, K={self.K}")
        if not (self.P > 0 and self.Tc > 0):
            raise ValueError("P and Tc must be positive")
        if self.N0 < 0:
            raise ValueError("N0 must be nonnegative")
        object.__setattr__(self, "T", self.N * self.Tc)

    @classmethod
    def from_ebn0_db(cls, N: int, K: int, ebn0_db: float, P: float = 1.0, Tc: float = 1.0):
        eb = P * N * Tc
        return cls(N=N, K=K, P=P, Tc=Tc, N0=eb / 10.0 ** (ebn0_db / 10.0))

    @property
    def Eb(self) -> float:
        return self.P * self.T

    @property
    def noise_term(self) -> float:
        """N0 / (2 P T), the thermal-noise part of SINR^-2."""
        return self.N0 / (2.0 * self.P * self.T)

    @property
    def noise_variance(self) -> float:
        """Variance of the correlator's AWGN output, N0 T / 4."""
        return self.N0 * self.T / 4.0

    def with_noise(self, N0: float) -> SystemParams:
        return SystemParams(N=self.N, K=self.K, P=self.P, Tc=self.Tc, N0=N0)
