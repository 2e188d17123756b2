"""Minimizing an operator over product states.

Alternating descent replaces one party's vector at a time by the lowest
eigenvector of the operator contracted with the others, so the objective
never goes up. The brute-force grid oracle gives an independent upper bound
for three qubits.
"""

import numpy as np

from tracerule import HermitianOperator, grid_oracle_3qubit, minimize_over_products
from tracerule.hilbert import random_unit_trace_hermitian
from tracerule.witness import descend, random_product_state

rng = np.random.default_rng(5)
a = HermitianOperator(random_unit_trace_hermitian(8, rng), (2, 2, 2))

value, state, cycles, converged, history = descend(a, random_product_state(a.local_dims, rng), record=True)
print(f"single start: {cycles} cycles, converged={converged}")
print("  first objective values:", np.round(history[:7], 5))

res = minimize_over_products(a, restarts=64, seed=0)
print("best of 64 restarts:", res.value)
for g in (20, 40, 80):
    print(f"grid oracle {g:3d} pts:  ", grid_oracle_3qubit(a, g))
print("lowest eigenvalue (entangled states allowed):", np.linalg.eigvalsh(a.matrix)[0])
