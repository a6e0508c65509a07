"""Dense complex linear algebra kernel.

Conventions used across the package:

* A state over k qubits is a 1-D complex128 array of length 2**k.
* An operator over k qubits is a square complex128 array of dimension 2**k.
* Basis labels are bit strings read left to right, most significant bit
  first: |x0 x1 ... x_{k-1}> lives at index int(x, 2).  The last qubit in
  the label is therefore the least significant index bit.

Dense sizes are capped (default 2**14 rows) so an impossible allocation
fails fast with CapacityError instead of thrashing; callers that need
larger systems should switch to the matrix-free backend in `fastgrover`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Entrywise absolute tolerance for operator identities (unitarity, equality
# of two constructions).  States preserve norm to the looser 1e-10.
ATOL = 1e-12
NORM_ATOL = 1e-10

DEFAULT_MAX_DIM = 1 << 14


class CapacityError(RuntimeError):
    """Requested dense dimension exceeds the configured cap."""


def check_capacity(dim: int, max_dim: int = DEFAULT_MAX_DIM) -> None:
    if dim > max_dim:
        raise CapacityError(
            f"dense dimension {dim} exceeds cap {max_dim}; "
            "use the matrix-free collapsed backend for systems this large"
        )


def _as_operator(op) -> np.ndarray:
    op = np.asarray(op, dtype=np.complex128)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"operator must be square, got shape {op.shape}")
    dim = op.shape[0]
    if dim < 1 or dim & (dim - 1):
        raise ValueError(f"operator dimension {dim} is not a power of two")
    return op


def _as_state(state) -> np.ndarray:
    state = np.asarray(state, dtype=np.complex128)
    if state.ndim != 1:
        raise ValueError(f"state must be 1-D, got shape {state.shape}")
    dim = state.shape[0]
    if dim < 1 or dim & (dim - 1):
        raise ValueError(f"state dimension {dim} is not a power of two")
    return state


def tensor(a, b, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
    """Kronecker product a (x) b of two operators.

    The left factor acts on the more significant qubits, matching the
    MSB-first index convention.
    """
    a, b = _as_operator(a), _as_operator(b)
    check_capacity(a.shape[0] * b.shape[0], max_dim)
    return np.kron(a, b)


def dot(a, b) -> np.ndarray:
    """Operator composition a . b (b applied first)."""
    a, b = _as_operator(a), _as_operator(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} . {b.shape}")
    return a @ b


def apply(op, state) -> np.ndarray:
    """Apply an operator (dense array or PermutationOperator) to a state."""
    if isinstance(op, PermutationOperator):
        return op.apply(state)
    op, state = _as_operator(op), _as_state(state)
    if op.shape[1] != state.shape[0]:
        raise ValueError(f"dimension mismatch: {op.shape} on {state.shape}")
    return op @ state


def conjugate_transpose(op) -> np.ndarray:
    return _as_operator(op).conj().T.copy()


def is_unitary(op, atol: float = ATOL) -> bool:
    """Entrywise check of U . U^dagger == identity."""
    op = _as_operator(op)
    eye = np.eye(op.shape[0], dtype=np.complex128)
    return bool(np.max(np.abs(op @ op.conj().T - eye)) <= atol)


def require_unitary(op, atol: float = ATOL, what: str = "operator") -> np.ndarray:
    op = _as_operator(op)
    if not is_unitary(op, atol):
        raise ValueError(f"{what} is not unitary within {atol}")
    return op


def norm(state) -> float:
    return float(np.linalg.norm(_as_state(state)))


def basis_state(index: int, dim: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dimension {dim}")
    out = np.zeros(dim, dtype=np.complex128)
    out[index] = 1.0
    return out


@dataclass(frozen=True)
class PermutationOperator:
    """Unitary permutation stored as an index map.

    targets[j] = i means the operator sends basis column j to basis row i,
    i.e. U|j> = |i>.  Application is O(dim); the dense form is materialised
    only on request.
    """

    targets: np.ndarray

    def __post_init__(self):
        targets = np.asarray(self.targets, dtype=np.int64)
        dim = targets.shape[0]
        if targets.ndim != 1 or dim < 1 or dim & (dim - 1):
            raise ValueError("targets must be a 1-D array of power-of-two length")
        if sorted(targets.tolist()) != list(range(dim)):
            raise ValueError("targets is not a permutation of 0..dim-1")
        object.__setattr__(self, "targets", targets)

    @property
    def dim(self) -> int:
        return int(self.targets.shape[0])

    def apply(self, state) -> np.ndarray:
        state = _as_state(state)
        if state.shape[0] != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} on {state.shape}")
        out = np.empty_like(state)
        out[self.targets] = state
        return out

    def to_dense(self, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
        """Exact 0/1 matrix with entry [i, j] = 1 iff U|j> = |i>."""
        check_capacity(self.dim, max_dim)
        dense = np.zeros((self.dim, self.dim), dtype=np.complex128)
        dense[self.targets, np.arange(self.dim)] = 1.0
        return dense

    @classmethod
    def from_dense(cls, op) -> "PermutationOperator":
        """Exact inverse of to_dense; rejects anything but a 0/1 permutation."""
        op = _as_operator(op)
        rows, cols = np.nonzero(op)
        dim = op.shape[0]
        if len(rows) != dim or not np.all(op[rows, cols] == 1.0):
            raise ValueError("matrix is not an exact permutation matrix")
        targets = np.empty(dim, dtype=np.int64)
        targets[cols] = rows
        return cls(targets)

    def inverse(self) -> "PermutationOperator":
        inv = np.empty_like(self.targets)
        inv[self.targets] = np.arange(self.dim)
        return PermutationOperator(inv)
