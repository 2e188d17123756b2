"""Bipartite witness correlations are quantum.

If W = (I ⊗ Λ)(Ψ) with Λ positive and trace preserving, then
tr(W M1 ⊗ M2) = tr(Ψ M1 ⊗ Λ*(M2)) and Λ* maps POVMs to POVMs. The transpose
map on Φ+ gives the (indefinite) swap/2 operator, yet its correlations are
those of Φ+ with transposed measurements on the second party.
"""

import numpy as np

from tracerule.cj import choi, random_cptp, run_trials, transpose_map, verify_gleason_identity
from tracerule.operators import maximally_entangled, random_measurement_model

print("Choi operator of the transpose (the swap):")
print(np.round(choi(transpose_map(2)).matrix.real, 3))

phi = maximally_entangled(2)
rng = np.random.default_rng(0)
mm = random_measurement_model((2, 2), 3, 2, rng)
check = verify_gleason_identity(np.outer(phi, phi.conj()), transpose_map(2), mm)
print("transpose / Φ+: discrepancy", check.max_discrepancy,
      " W min eigenvalue", round(check.witness_min_eigenvalue, 3),
      " transported POVMs valid", check.dual_povms_valid)

lam = random_cptp(2, 2, 3, rng)
print("random channel trace-preservation error:", lam.trace_preservation_error())
print("100 random trials:", run_trials(100, seed=1))
