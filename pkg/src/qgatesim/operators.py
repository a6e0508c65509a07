"""Gate construction for quantum search circuits.

A run is assembled from three operators on n computational qubits plus one
ancilla (dimension 2**(n+1)):

  superposition   H tensored over all n+1 qubits, applied once
  entanglement    the oracle permutation U for the extended function F
  interference    Grover: diffusion(n) (x) I; Deutsch-Jozsa: H^(x)n (x) I

The assembled circuit applies superposition once and then the pair
(entanglement, interference) a total of h+1 times; h is stored on the
assembly and the engine exposes the count as iterations = h + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import reduce

import numpy as np

from . import linalg
from .encoder import MarkedSet
from .linalg import DEFAULT_MAX_DIM, PermutationOperator, check_capacity

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)

# Unitarity of a caller-supplied dense oracle is verified up to this size;
# above it the O(dim^3) check would dominate assembly time.
_UNITARY_CHECK_MAX_DIM = 1 << 9


class Algorithm(Enum):
    GROVER = "grover"
    DEUTSCH_JOZSA = "deutsch-jozsa"


def hadamard_word(k: int, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
    """H (x) H (x) ... (x) H over k qubits; every entry is +-2**(-k/2)."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    check_capacity(2**k, max_dim)
    return reduce(np.kron, [HADAMARD] * k)


def diffusion(n: int, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
    """Inversion about the mean on n qubits.

    Off-diagonal entries are 1/2**(n-1), diagonal entries -1 + 1/2**(n-1);
    the operator is real, symmetric and self-inverse, and sends amplitudes
    alpha_x to -alpha_x + 2 * mean(alpha).
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    dim = 2**n
    check_capacity(dim, max_dim)
    out = np.full((dim, dim), 1.0 / 2 ** (n - 1), dtype=np.complex128)
    np.fill_diagonal(out, -1.0 + 1.0 / 2 ** (n - 1))
    return out


def phase_oracle(marked: MarkedSet, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
    """Diagonal +-1 operator on n qubits flipping the sign of marked labels."""
    dim = 2**marked.n
    check_capacity(dim, max_dim)
    diag = np.ones(dim, dtype=np.complex128)
    for i in marked.indices():
        diag[i] = -1.0
    return np.diag(diag)


def diffusion_composed(n: int, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
    """Diffusion built compositionally: -(H^(x)n) . flip|0...0> . (H^(x)n).

    Cross-check for the closed-form table in diffusion(); the two agree
    entrywise within 1e-12.
    """
    h = hadamard_word(n, max_dim)
    flip_zero = phase_oracle(MarkedSet(n=n, elements=frozenset([format(0, f"0{n}b")])), max_dim)
    return -(h @ flip_zero @ h)


@dataclass(frozen=True)
class GateAssembly:
    """Operators and iteration exponent for one circuit run."""

    algorithm: Algorithm
    n: int
    m: int
    superposition: np.ndarray
    entanglement: np.ndarray | PermutationOperator
    interference: np.ndarray
    h: int
    marked: frozenset[str] | None = None

    @property
    def dim(self) -> int:
        return 2 ** (self.n + self.m)

    def entanglement_dense(self, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
        if isinstance(self.entanglement, PermutationOperator):
            return self.entanglement.to_dense(max_dim)
        return self.entanglement

    def gate(self, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
        """Single composed matrix: [interference . entanglement]^(h+1) . superposition."""
        step = self.interference @ self.entanglement_dense(max_dim)
        return np.linalg.matrix_power(step, self.h + 1) @ self.superposition


def marked_from_oracle(oracle: np.ndarray | PermutationOperator, n: int) -> frozenset[str] | None:
    """Recover {x : f(x) = 1} from an XOR-extension oracle on n+1 qubits.

    Probes each column |x, 0>: it must land on |x, 0> or |x, 1>.  Returns
    None when the operator does not have that structure.
    """
    if isinstance(oracle, PermutationOperator):
        lookup = oracle.targets.__getitem__
    else:
        dense = np.abs(np.asarray(oracle))
        cols = np.argmax(dense, axis=0)

        def lookup(j):
            # column must be (numerically) a basis vector for the probe to count
            if dense[cols[j], j] < 1.0 - 1e-9:
                return -1
            return int(cols[j])

    marked = set()
    for x in range(2**n):
        j = x << 1
        i = lookup(j)
        if i == j | 1:
            marked.add(format(x, f"0{n}b"))
        elif i != j:
            return None
    return frozenset(marked)


def assemble(
    algorithm: Algorithm,
    n: int,
    oracle: np.ndarray | PermutationOperator,
    iterations: int | None = None,
    max_dim: int = DEFAULT_MAX_DIM,
) -> GateAssembly:
    """Build the full gate assembly around an oracle on n+1 qubits.

    iterations is the number of (entanglement, interference) applications;
    when omitted it defaults to the optimal Grover count for the oracle's
    marked set, or to the single application Deutsch-Jozsa needs.  Only the
    two supported single-ancilla algorithms are accepted.
    """
    if not isinstance(algorithm, Algorithm):
        raise ValueError(f"unsupported algorithm: {algorithm!r}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    dim = 2 ** (n + 1)
    check_capacity(dim, max_dim)

    if isinstance(oracle, PermutationOperator):
        if oracle.dim != dim:
            raise ValueError(f"oracle dimension {oracle.dim} does not match 2^{n + 1}")
    else:
        oracle = np.asarray(oracle, dtype=np.complex128)
        if oracle.shape != (dim, dim):
            raise ValueError(f"oracle shape {oracle.shape} does not match 2^{n + 1}")
        if dim <= _UNITARY_CHECK_MAX_DIM:
            linalg.require_unitary(oracle, what="oracle")

    marked = marked_from_oracle(oracle, n)

    if algorithm is Algorithm.GROVER:
        interference = linalg.tensor(diffusion(n, max_dim), np.eye(2), max_dim)
        if iterations is None:
            if marked is None or not marked or len(marked) == 2**n:
                raise ValueError(
                    "cannot derive an optimal iteration count from this oracle; "
                    "pass iterations explicitly"
                )
            from .engine import optimal_iterations  # deferred to avoid a module cycle

            iterations = optimal_iterations(n, len(marked))
    else:
        interference = linalg.tensor(hadamard_word(n, max_dim), np.eye(2), max_dim)
        if iterations is None:
            iterations = 1

    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")

    return GateAssembly(
        algorithm=algorithm,
        n=n,
        m=1,
        superposition=hadamard_word(n + 1, max_dim),
        entanglement=oracle,
        interference=interference,
        h=iterations - 1,
        marked=marked if marked else None,
    )
