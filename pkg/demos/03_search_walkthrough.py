"""
Watching a search run: probability, entropy, stop rule
======================================================

Three qubits, one marked label.  We record the state after every
iteration and watch two numbers evolve: the probability of reading the
marked label, and the Shannon entropy of the computational register.
The entropy bottoms out exactly where the probability peaks, which
gives a stopping rule that needs no knowledge of how many labels are
marked.  Finally we measure the finished state a few thousand times.
"""

import numpy as np

from qgatesim import (
    Algorithm,
    MarkedSet,
    assemble,
    entropy_stop,
    optimal_iterations,
    oracle_from_marked,
    run,
    run_entropy_stop,
    sample_counts,
)

n, target = 3, "011"
oracle = oracle_from_marked(MarkedSet(n=n, elements=frozenset([target])))
asm = assemble(Algorithm.GROVER, n, oracle)

best = optimal_iterations(n, 1)
print(f"n = {n}, one marked label: predicted best iteration = {best}")

# run past the peak on purpose so the overshoot is visible
trace = run(asm, best + 2)
print("\niter   p_marked      entropy_bits")
for rec in trace.records:
    print(f"  {rec.iteration}    {rec.p_marked:.10f}  {rec.entropy_bits:.10f}")

# iteration 2 carries 121/128, an exact dyadic rational for this size
print(f"\np at iteration {best} = {trace.records[best].p_marked} (121/128 = {121 / 128})")

# the stop rule reads only the entropy column: stop at the first k whose
# entropy is below the next one.  It lands on the same iteration.
stop = entropy_stop(trace)
print(f"entropy rule stops at k = {stop}, optimal count is {best}")

# the online variant runs one iteration at a time and halts by itself,
# keeping the one overshoot record that witnessed the minimum
online_trace, online_stop = run_entropy_stop(asm)
print(f"online stop: k = {online_stop} after recording {online_trace.iterations} iterations")

# measuring: answers concentrate on the target; the ancilla stays a fair
# coin because the phase trick leaves it in an even mixture
state = run(asm, best).final.amplitudes
counts = sample_counts(state, 4000, rng=7)
print("\n4000 shots (raw 4-bit outcomes, first 3 bits = answer):")
for raw, c in sorted(counts.items(), key=lambda kv: -kv[1]):
    print(f"  {raw}: {c}")
hits = sum(c for raw, c in counts.items() if raw[:n] == target)
print(f"answer = {target} in {hits / 4000:.4f} of shots (expect about {121 / 128:.4f})")
