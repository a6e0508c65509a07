"""
The three operators of a search circuit
=======================================

A run is built from exactly three dense pieces: a Hadamard word that
spreads the start state uniformly, the oracle permutation from demo 01,
and the inversion-about-the-mean operator that turns phase information
into amplitude.  This script builds each one and checks the identities
they must satisfy.
"""

import numpy as np

from qgatesim import (
    Algorithm,
    MarkedSet,
    assemble,
    diffusion,
    diffusion_composed,
    hadamard_word,
    is_unitary,
    oracle_from_marked,
)

n = 3

# H on every wire: entries are +-1/sqrt(2^k), the matrix is its own
# inverse, and column 0 is the uniform superposition
H = hadamard_word(n)
print(f"hadamard word, n = {n}: first column = {H[:, 0][0]:.6f} everywhere")
assert np.allclose(H @ H, np.eye(2**n), atol=1e-12)

# the mean-inversion operator has a two-value structure: every
# off-diagonal entry is 1/2^(n-1) and the diagonal sits 1 below that
D = diffusion(n)
off = 1.0 / 2 ** (n - 1)
print(f"diffusion entries: off-diagonal {off}, diagonal {off - 1.0}")
assert np.allclose(D @ D, np.eye(2**n), atol=1e-12)  # self-inverse

# the same operator falls out of conjugating a phase flip on |0..0> by
# Hadamards, which is how a gate-model device would compile it
assert np.allclose(D, diffusion_composed(n), atol=1e-12)
print("diffusion == -(H^n) flip0 (H^n) to 1e-12, and D^2 = I")

# what the name means: acting on any amplitude vector sends each entry
# alpha to 2*mean - alpha, reflecting it through the average
v = np.array([0.9, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.3])
reflected = D @ v
print("alpha -> 2<alpha> - alpha check:", np.allclose(reflected, 2 * v.mean() - v))

# the full assembly wires these together over n + 1 qubits; the gate it
# exposes is (interference . entanglement)^(h+1) . superposition and
# stays unitary because each factor is
oracle = oracle_from_marked(MarkedSet(n=n, elements=frozenset(["011"])))
asm = assemble(Algorithm.GROVER, n, oracle)
print(f"\nassembled search, n = {n}: h = {asm.h}, so {asm.h + 1} iterations")
print("composite gate unitary:", is_unitary(asm.gate()))
