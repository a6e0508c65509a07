"""Per-iteration run records shared by the dense and collapsed backends."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TraceRecord:
    """State summary after one circuit stage.

    iteration 0 is the post-superposition state; iteration k >= 1 is the
    state after the k-th (entanglement, interference) pair.  p_marked is
    the probability of the tracked computational-register subspace (NaN if
    nothing is tracked) and entropy_bits the Shannon entropy of the
    computational-register distribution.  The full-register vectors are
    recorded only when the backend is dense and the system is small.
    """

    iteration: int
    p_marked: float
    entropy_bits: float
    probabilities: np.ndarray | None = None
    amplitudes: np.ndarray | None = None


@dataclass(frozen=True)
class SimulationTrace:
    backend: str
    algorithm: str
    n: int
    m: int
    marked: tuple[str, ...] | None
    records: tuple[TraceRecord, ...]
    metadata: dict = field(default_factory=dict)

    @property
    def iterations(self) -> int:
        """Number of (entanglement, interference) pairs recorded as applied."""
        return self.records[-1].iteration if self.records else 0

    def entropies(self) -> list[float]:
        return [r.entropy_bits for r in self.records]

    def p_marked_series(self) -> list[float]:
        return [r.p_marked for r in self.records]

    @property
    def final(self) -> TraceRecord:
        return self.records[-1]
