"""Noise model parameters shared by the simulator and the offline classifier."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class NoiseParams:
    """Circuit noise knobs.

    ``p`` is the per-location depolarizing/readout/init error rate, and the
    leakage probability per location is ``lr * p``. ``mobility`` is the chance
    a CNOT with a leaked control leaks its target instead of randomizing it.
    A leaked ancilla's multi-level readout misses with probability
    ``min(1, mlr * p)``.
    """

    p: float
    lr: float = 0.1
    mobility: float = 0.10
    mlr: float = 10.0
    # behavior knobs left open by the model; defaults documented in README
    reset_clears_leakage: bool = False
    lrc_error_scale: float = 1.0
    mlr_resets_neighbors: bool = False

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0,1], got {self.p}")
        if self.lr < 0:
            raise ValueError(f"lr must be >= 0, got {self.lr}")
        if not 0.0 <= self.p_leak <= 1.0:
            raise ValueError(f"lr*p must be in [0,1], got {self.p_leak}")
        if not 0.0 <= self.mobility <= 1.0:
            raise ValueError(f"mobility must be in [0,1], got {self.mobility}")
        if self.mlr < 0:
            raise ValueError(f"mlr must be >= 0, got {self.mlr}")

    @property
    def p_leak(self) -> float:
        return self.lr * self.p

    @property
    def mlr_miss(self) -> float:
        """Probability a leaked ancilla's readout fails to flag it."""
        return min(1.0, self.mlr * self.p)
