"""
From a truth table to a reversible oracle matrix
================================================

A boolean function f destroys information: you cannot recover x from
f(x).  The trick that makes it usable inside a unitary circuit is to
carry the input along and XOR the output onto an ancilla bit,

    F(x, y) = (x, f(x) XOR y)

which is a bijection on (n+1)-bit strings, and in fact its own inverse.
This script walks that pipeline for the worked two-qubit example with
f(01) = 1 and prints every intermediate object.
"""

import numpy as np

from qgatesim import (
    MarkedSet,
    code_map,
    injective_extension,
    permutation_operator,
    truth_table_from_marked,
)

# the function: n = 2 inputs, one bit out, only "01" maps to 1
marked = MarkedSet(n=2, elements=frozenset(["01"]))
table = truth_table_from_marked(marked)
print("truth table rows:")
for x, fx in sorted(table.rows.items()):
    print(f"  f({x}) = {fx}")

# the injective extension doubles the string width: input bits stay put,
# the last bit picks up f(x).  Only the two rows with x = 01 swap.
ext = injective_extension(table)
print("\ninjective extension F(x, y) = (x, f(x) xor y):")
for s, t in sorted(ext.rows.items()):
    mark = "  <- swapped" if s != t else ""
    print(f"  {s} -> {t}{mark}")

# every output appears exactly once, so F is invertible; applying it
# twice undoes it
assert all(ext.rows[t] == s for s, t in ext.rows.items())
print("\nF is an involution: F(F(s)) = s on all 8 strings")

# the matrix: one 1 per column, [U]_ij = 1 exactly when F maps j to i.
# For this f it is block diagonal: identity except an X on the 01 block.
op = permutation_operator(ext)
dense = op.to_dense().real.astype(int)
print("\npermutation matrix (rows/cols ordered 000..111):")
print(dense)

# and it does what the table says: U applied to the basis vector of a
# string lands exactly on the basis vector of its image
for s in ("010", "011", "100"):
    image = np.argmax(dense @ code_map(s))
    print(f"U |{s}> = |{format(image, '03b')}>")
