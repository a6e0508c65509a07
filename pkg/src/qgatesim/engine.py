"""Dense state-vector execution of assembled circuits.

The run protocol is fixed: prepare |0...01> (all computational qubits 0,
ancilla 1), apply the superposition operator once, then apply the pair
(entanglement, interference) `iterations` times.  A trace record is kept
after superposition (iteration 0) and after every pair.

Scalar trace fields are always computed; full probability and amplitude
vectors are kept only while n+m <= VECTOR_RECORD_MAX_QUBITS unless the
caller overrides the gate.  Entropy is taken over the marginal of the n
computational qubits, with the ancilla traced out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TYPE_CHECKING

import numpy as np

from . import linalg
from .trace import SimulationTrace, TraceRecord

if TYPE_CHECKING:
    from .operators import GateAssembly

VECTOR_RECORD_MAX_QUBITS = 12
DEFAULT_ENTROPY_STOP_CAP = 256

# Identifier for the sampling generator, recorded alongside seeds so a
# trace states exactly how its random draws were produced.
RNG_ALGORITHM = "numpy-pcg64"

_SQRT2 = math.sqrt(2.0)


def initial_state(n: int, m: int = 1) -> np.ndarray:
    """|0...01>: computational register all zeros, ancilla set to 1."""
    if n < 1 or m < 1:
        raise ValueError(f"need n >= 1 and m >= 1, got n={n} m={m}")
    return linalg.basis_state(1, 2 ** (n + m))


def marked_angle(n: int, M: int) -> float:
    """theta = arcsin(sqrt(M / 2**n)), computed without forming 2**n."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not 1 <= M < 2**n:
        raise ValueError(f"need 1 <= M < 2^{n}, got M={M}")
    sin_theta = math.ldexp(math.sqrt(M), -(n // 2))
    if n % 2:
        sin_theta /= _SQRT2
    return math.asin(sin_theta)


def optimal_iterations(n: int, M: int) -> int:
    """Iteration count maximising the marked probability sin^2((2k+1) theta).

    The continuous maximiser of the first oscillation is
    k* = (pi / (2 theta) - 1) / 2; the better of its two integer
    neighbours (clamped to k >= 1) is returned, ties toward smaller k.
    Later oscillations can approach probability 1 arbitrarily closely when
    theta is incommensurate with pi, so "the" unbounded argmax is not well
    defined; the first peak is the quantity a search run wants.
    """
    theta = marked_angle(n, M)
    k_star = (math.pi / (2.0 * theta) - 1.0) / 2.0
    candidates = sorted({max(1, math.floor(k_star)), max(1, math.ceil(k_star))})
    best_k, best_v = None, -1.0
    for k in candidates:
        v = math.sin((2 * k + 1) * theta) ** 2
        if v > best_v:
            best_k, best_v = k, v
    return int(best_k)


def shannon_entropy(probs) -> float:
    """Entropy in bits of a probability vector (0 log 0 taken as 0)."""
    p = np.asarray(probs, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError("probability vector must be 1-D")
    if np.any(p < -1e-12):
        raise ValueError("probabilities must be nonnegative")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-10:
        raise ValueError(f"probabilities sum to {total}, not 1")
    p = p[p > 0.0]
    return float(-(p * np.log2(p)).sum())


def _register_marginal(state: np.ndarray, n: int, m: int) -> np.ndarray:
    """Probability distribution of the computational register alone."""
    p = np.abs(state) ** 2
    return p.reshape(2**n, 2**m).sum(axis=1)


def _record(state, n, m, marked_idx, keep_vectors, iteration) -> TraceRecord:
    marginal = _register_marginal(state, n, m)
    if marked_idx is None:
        p_marked = float("nan")
    else:
        p_marked = float(marginal[marked_idx].sum()) if len(marked_idx) else 0.0
    return TraceRecord(
        iteration=iteration,
        p_marked=p_marked,
        entropy_bits=shannon_entropy(marginal),
        probabilities=np.abs(state) ** 2 if keep_vectors else None,
        amplitudes=state.copy() if keep_vectors else None,
    )


def _marked_indices(assembly, marked) -> np.ndarray | None:
    if marked is None:
        marked = assembly.marked
    if marked is None:
        return None
    labels = sorted(frozenset(marked))
    for x in labels:
        if len(x) != assembly.n or set(x) - {"0", "1"}:
            raise ValueError(f"marked label {x!r} is not an {assembly.n}-bit string")
    return np.array([int(x, 2) for x in labels], dtype=np.int64)


def run(
    assembly: "GateAssembly",
    iterations: int | None = None,
    *,
    marked: Iterable[str] | None = None,
    record_vectors: bool | None = None,
) -> SimulationTrace:
    """Execute an assembly and return its full trace.

    iterations defaults to assembly.h + 1.  marked overrides the tracked
    subspace (default: the marked set recovered from the oracle, if any).
    """
    if iterations is None:
        iterations = assembly.h + 1
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    n, m = assembly.n, assembly.m
    marked_idx = _marked_indices(assembly, marked)
    if record_vectors is None:
        record_vectors = n + m <= VECTOR_RECORD_MAX_QUBITS

    state = linalg.apply(assembly.superposition, initial_state(n, m))
    records = [_record(state, n, m, marked_idx, record_vectors, 0)]
    for k in range(1, iterations + 1):
        state = linalg.apply(assembly.entanglement, state)
        state = linalg.apply(assembly.interference, state)
        drift = abs(linalg.norm(state) - 1.0)
        if drift > linalg.NORM_ATOL:
            raise RuntimeError(f"norm drifted by {drift:.3e} at iteration {k}")
        records.append(_record(state, n, m, marked_idx, record_vectors, k))

    return SimulationTrace(
        backend="dense",
        algorithm=assembly.algorithm.value,
        n=n,
        m=m,
        marked=tuple(format(i, f"0{n}b") for i in marked_idx) if marked_idx is not None else None,
        records=tuple(records),
    )


def entropy_stop(trace: SimulationTrace | Sequence[float], window: int = 1) -> int | None:
    """First iteration k >= 1 whose entropy is a local minimum.

    Fires at the smallest k with entropy(k) < entropy(k + j) for all
    j = 1..window; returns None when the recorded entropies never turn
    upward.  Needs records through at least iteration 2.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    ents = trace.entropies() if isinstance(trace, SimulationTrace) else list(trace)
    if len(ents) < 3:
        raise ValueError("entropy stop needs records for at least 2 iterations")
    for k in range(1, len(ents) - window):
        if all(ents[k] < ents[k + j] for j in range(1, window + 1)):
            return k
    return None


def run_entropy_stop(
    assembly: "GateAssembly",
    *,
    marked: Iterable[str] | None = None,
    window: int = 1,
    max_iterations: int = DEFAULT_ENTROPY_STOP_CAP,
    record_vectors: bool | None = None,
) -> tuple[SimulationTrace, int | None]:
    """Iterate until the entropy rule fires (or the cap is hit).

    The returned trace includes the overshoot records that witnessed the
    minimum; the second element is the stop iteration, None if the rule
    never fired within max_iterations.
    """
    if max_iterations < window + 1:
        raise ValueError("max_iterations too small for the requested window")
    n, m = assembly.n, assembly.m
    marked_idx = _marked_indices(assembly, marked)
    if record_vectors is None:
        record_vectors = n + m <= VECTOR_RECORD_MAX_QUBITS

    state = linalg.apply(assembly.superposition, initial_state(n, m))
    records = [_record(state, n, m, marked_idx, record_vectors, 0)]
    stop: int | None = None
    for k in range(1, max_iterations + 1):
        state = linalg.apply(assembly.entanglement, state)
        state = linalg.apply(assembly.interference, state)
        records.append(_record(state, n, m, marked_idx, record_vectors, k))
        j = k - window
        if j >= 1 and all(
            records[j].entropy_bits < records[j + i].entropy_bits for i in range(1, window + 1)
        ):
            stop = j
            break

    trace = SimulationTrace(
        backend="dense",
        algorithm=assembly.algorithm.value,
        n=n,
        m=m,
        marked=tuple(format(i, f"0{n}b") for i in marked_idx) if marked_idx is not None else None,
        records=tuple(records),
        metadata={"stop_rule": "entropy-local-min", "stop_iteration": stop},
    )
    return trace, stop


@dataclass(frozen=True)
class MeasurementOutcome:
    """One projective measurement of the full register.

    raw_bits covers all n+m qubits MSB-first; answer_bits is its first n
    characters (the computational register) and ancilla_bit the last.
    """

    raw_bits: str
    answer_bits: str
    ancilla_bit: int


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _outcome_probs(state: np.ndarray) -> np.ndarray:
    p = np.abs(np.asarray(state, dtype=np.complex128)) ** 2
    total = p.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"state norm^2 is {total}, not 1")
    return p / total


def measure(state, rng=None) -> MeasurementOutcome:
    """Sample one basis outcome; split answer/ancilla on the last qubit."""
    p = _outcome_probs(state)
    qubits = int(math.log2(len(p)))
    if 2**qubits != len(p) or qubits < 2:
        raise ValueError("state must cover at least 2 qubits")
    idx = int(_as_generator(rng).choice(len(p), p=p))
    raw = format(idx, f"0{qubits}b")
    return MeasurementOutcome(raw_bits=raw, answer_bits=raw[:-1], ancilla_bit=int(raw[-1]))


def interpret(outcome: MeasurementOutcome) -> str:
    """Answer read off a measurement: the computational-register bits."""
    return outcome.answer_bits


def sample_counts(state, shots: int, rng=None) -> dict[str, int]:
    """Sample many outcomes at once; returns raw bit string -> count."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    p = _outcome_probs(state)
    qubits = int(math.log2(len(p)))
    draws = _as_generator(rng).choice(len(p), size=shots, p=p)
    counts = np.bincount(draws, minlength=len(p))
    return {
        format(i, f"0{qubits}b"): int(c) for i, c in enumerate(counts) if c > 0
    }
