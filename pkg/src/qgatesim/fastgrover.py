"""Matrix-free Grover backend in the collapsed two-amplitude subspace.

Throughout a Grover run every marked basis label carries one common
amplitude a and every unmarked label one common amplitude b, so the state
is a point in a 2-D real subspace and one iteration costs O(1) regardless
of n.  This backend tracks (a, b) directly and is exact for any n the
dense engine could handle, while remaining usable far beyond it (n = 64
routinely; larger n degrade gracefully, see below).

Precision notes:
  * The ratio M / 2**n is formed from exact integers (Fraction) before the
    single rounding to double.
  * Powers 2**(n/2) never materialise; amplitudes are rescaled with ldexp,
    so quantities stay in range even when 2**n overflows a double.
  * The closed form a_k = sin((2k+1) theta) / sqrt(M) is evaluated per
    point, which keeps jump-to-k cheap for k in the billions.  For n
    beyond a few hundred the per-step recurrence updates fall below double
    resolution; the closed form remains the accurate route there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .engine import marked_angle, optimal_iterations
from .trace import SimulationTrace, TraceRecord

_SQRT2 = math.sqrt(2.0)

# Recurrence drift beyond this triggers a renormalisation (counted in the
# trace metadata); in practice drift stays orders of magnitude smaller.
RENORM_THRESHOLD = 1e-8

# collapsed_trace defaults: recurrence stepping and per-iteration records
# up to these sizes, closed-form jumps with logarithmic sampling beyond.
MAX_FULL_RECORD_ITERATIONS = 1 << 16
MAX_RECURRENCE_ITERATIONS = 1 << 20


def _half_pow2(x: float, e: int) -> float:
    """x * 2**(e/2) for integer e, without forming 2**e."""
    out = math.ldexp(x, e // 2)
    if e % 2:
        out *= _SQRT2
    return out


@lru_cache(maxsize=None)
def _ratio(n: int, M: int) -> float:
    return float(Fraction(M, 1 << n))


@dataclass(frozen=True)
class CollapsedState:
    """Amplitudes (a on each marked label, b on each unmarked label)."""

    n: int
    M: int
    a: float
    b: float

    def p_marked(self) -> float:
        return self.M * self.a * self.a

    def p_unmarked(self) -> float:
        # (2**n - M) b^2, computed as (1 - M/2**n) * (b 2**(n/2))^2
        scaled = _half_pow2(self.b, self.n)
        return (1.0 - _ratio(self.n, self.M)) * scaled * scaled

    def entropy_bits(self) -> float:
        """Entropy of the register distribution: M labels at a^2, rest at b^2."""
        ent = 0.0
        if self.a != 0.0:
            ent -= self.p_marked() * 2.0 * math.log2(abs(self.a))
        if self.b != 0.0:
            ent -= self.p_unmarked() * 2.0 * math.log2(abs(self.b))
        return ent

    def norm_squared(self) -> float:
        return self.p_marked() + self.p_unmarked()


def collapsed_init(n: int, M: int) -> CollapsedState:
    """Uniform superposition: a = b = 2**(-n/2)."""
    marked_angle(n, M)  # validates 1 <= M < 2**n
    amp = _half_pow2(1.0, -n)
    return CollapsedState(n=n, M=M, a=amp, b=amp)


def collapsed_iterate(state: CollapsedState) -> CollapsedState:
    """One Grover iteration: phase flip on a, then inversion about the mean.

    With r = M / 2**n the post-flip mean is <alpha> = -r a + (1 - r) b and
    the update is a' = 2<alpha> + a, b' = 2<alpha> - b.
    """
    r = _ratio(state.n, state.M)
    mean = (1.0 - r) * state.b - r * state.a
    return CollapsedState(
        n=state.n, M=state.M, a=2.0 * mean + state.a, b=2.0 * mean - state.b
    )


def collapsed_state_at(n: int, M: int, k: int) -> CollapsedState:
    """Closed form after k iterations: the rotation by (2k+1) theta.

    a_k = sin((2k+1) theta) / sqrt(M),  b_k = cos((2k+1) theta) / sqrt(2**n - M).
    """
    if k < 0:
        raise ValueError(f"need k >= 0, got {k}")
    theta = marked_angle(n, M)
    phase = (2 * k + 1) * theta
    r = _ratio(n, M)
    a = math.sin(phase) / math.sqrt(M)
    b = _half_pow2(math.cos(phase) / math.sqrt(1.0 - r), -n)
    return CollapsedState(n=n, M=M, a=a, b=b)


def _renormalized(state: CollapsedState) -> CollapsedState:
    scale = 1.0 / math.sqrt(state.norm_squared())
    return CollapsedState(n=state.n, M=state.M, a=state.a * scale, b=state.b * scale)


def _record(state: CollapsedState, k: int) -> TraceRecord:
    return TraceRecord(
        iteration=k, p_marked=state.p_marked(), entropy_bits=state.entropy_bits()
    )


def _log_sampled(iterations: int) -> list[int]:
    """0, 1, 2, 4, ... plus the final iteration."""
    ks = {0, iterations}
    j = 1
    while j < iterations:
        ks.add(j)
        j <<= 1
    return sorted(ks)


def _make_trace(records, n, M, marked_labels, meta) -> SimulationTrace:
    if marked_labels is not None:
        marked_labels = tuple(sorted(marked_labels))
        if len(marked_labels) != M:
            raise ValueError(f"got {len(marked_labels)} marked labels for M = {M}")
    return SimulationTrace(
        backend="collapsed",
        algorithm="grover",
        n=n,
        m=1,
        marked=marked_labels,
        records=tuple(records),
        metadata=meta,
    )


def collapsed_trace(
    n: int,
    M: int,
    iterations: int,
    *,
    method: str | None = None,
    record: str | None = None,
    marked_labels=None,
) -> SimulationTrace:
    """Trace of a collapsed run, schema-compatible with the dense engine.

    method: "recurrence" steps the 2-D update; "closed" jumps to each
    recorded point with the closed form.  record: "all" keeps every
    iteration, "log" keeps 0, 1, 2, 4, ... and the final point.  Defaults
    pick the recurrence with full records while that stays cheap and the
    closed form with log sampling for very large counts.
    """
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    if record is None:
        record = "all" if iterations <= MAX_FULL_RECORD_ITERATIONS else "log"
    if record not in ("all", "log"):
        raise ValueError(f"record must be 'all' or 'log', got {record!r}")
    if method is None:
        method = "recurrence" if iterations <= MAX_RECURRENCE_ITERATIONS else "closed"
    if method not in ("recurrence", "closed"):
        raise ValueError(f"method must be 'recurrence' or 'closed', got {method!r}")
    if record == "all" and iterations > MAX_FULL_RECORD_ITERATIONS:
        raise ValueError(
            f"refusing to record {iterations} rows; use record='log' beyond "
            f"{MAX_FULL_RECORD_ITERATIONS} iterations"
        )

    meta = {"method": method, "record": record, "renormalizations": 0}
    if method == "closed":
        points = range(iterations + 1) if record == "all" else _log_sampled(iterations)
        records = [_record(collapsed_state_at(n, M, k), k) for k in points]
        return _make_trace(records, n, M, marked_labels, meta)

    wanted = None if record == "all" else set(_log_sampled(iterations))
    state = collapsed_init(n, M)
    records = [_record(state, 0)]
    renorms = 0
    for k in range(1, iterations + 1):
        state = collapsed_iterate(state)
        if abs(state.norm_squared() - 1.0) > RENORM_THRESHOLD:
            state = _renormalized(state)
            renorms += 1
        if wanted is None or k in wanted:
            records.append(_record(state, k))
    meta["renormalizations"] = renorms
    return _make_trace(records, n, M, marked_labels, meta)


def collapsed_entropy_stop(
    n: int,
    M: int,
    *,
    window: int = 1,
    max_iterations: int = 256,
    marked_labels=None,
) -> tuple[SimulationTrace, int | None]:
    """Recurrence run that halts once entropy turns upward (same rule as
    the dense engine); returns the trace with its overshoot records and
    the stop iteration, None if the rule never fired."""
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if max_iterations < window + 1:
        raise ValueError("max_iterations too small for the requested window")
    state = collapsed_init(n, M)
    records = [_record(state, 0)]
    stop: int | None = None
    for k in range(1, max_iterations + 1):
        state = collapsed_iterate(state)
        records.append(_record(state, k))
        j = k - window
        if j >= 1 and all(
            records[j].entropy_bits < records[j + i].entropy_bits
            for i in range(1, window + 1)
        ):
            stop = j
            break
    meta = {
        "method": "recurrence",
        "record": "all",
        "renormalizations": 0,
        "stop_rule": "entropy-local-min",
        "stop_iteration": stop,
    }
    return _make_trace(records, n, M, marked_labels, meta), stop


def jump_summary(n: int, M: int) -> dict:
    """Optimal iteration count and the closed-form state there."""
    k = optimal_iterations(n, M)
    state = collapsed_state_at(n, M, k)
    return {
        "optimal_iterations": k,
        "p_marked": state.p_marked(),
        "entropy_bits": state.entropy_bits(),
    }
