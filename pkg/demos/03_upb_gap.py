"""Witness correlations beyond the classical bound for three qubits.

The projector Π onto the UPB {|000>, |1 e⊥ e>, |e 1 e⊥>, |e⊥ e 1>} has a
strictly positive product-state minimum ε. W = (Π - ε)/(4 - 8ε) is then a
unit-trace entanglement witness; measured in the UPB's own bases it scores
(1 - ε)/(1 - 2ε) on a Bell functional whose classical (and quantum) maximum
is 1.
"""

import numpy as np

from tracerule import UpbModel, bell_beta, classical_max_beta, gleason_box, grid_oracle_3qubit

model = UpbModel.build()
print("epsilon (alternating descent):", model.epsilon)
print("epsilon (grid oracle, 80 pts):", grid_oracle_3qubit(model.pi_upb, 80))

box = gleason_box(model)
print("beta from the box:     ", bell_beta(box))
print("beta from the formula: ", model.beta)
print("classical maximum:     ", classical_max_beta())
print("tr(W rho_UPB):         ", model.witness_trace_on_rho())

print("\nsweep over |e> = cos t|0> + sin t|1>")
for t in np.linspace(0.1, np.pi / 2 - 0.1, 7):
    m = UpbModel.from_theta(t, restarts=32)
    print(f"  t = {t:.3f}  eps = {m.epsilon:.6f}  beta = {bell_beta(gleason_box(m)):.6f}")
