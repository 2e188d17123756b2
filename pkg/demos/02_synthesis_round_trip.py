"""Operator + measurement models for random nonsignalling boxes.

Every nonsignalling box, in any (parties, settings, outcomes) scenario, can
be written as tr(O M_{a_1}^{x_1} ⊗ ... ⊗ M_{a_N}^{x_N}) with one fixed
family of local POVMs. Here we draw random boxes, synthesize (O, POVMs),
and evaluate the trace rule again.
"""

import numpy as np

from tracerule import Scenario, classify, evaluate_box, random_ns_box, synthesize

for scenario in [Scenario(2, 2, 2), Scenario(2, 3, 3), Scenario(3, 2, 2), Scenario(4, 2, 2)]:
    box = random_ns_box(scenario, seed=1)
    model = synthesize(box, seed=1)
    back = evaluate_box(model.operator, model.povms)
    eigs = np.linalg.eigvalsh(model.operator.matrix)
    print(f"{tuple(scenario)}: local dim {model.local_dim}, operator side {model.operator.dim}, "
          f"round trip {back.max_abs_diff(box):.1e}, duality {model.duality_error():.1e}, "
          f"min eigenvalue {eigs[0]:.3f}")

# the synthesized operator is generically not positive even for quantum boxes
model = synthesize(random_ns_box(Scenario(2, 2, 2), seed=3), seed=0)
print(classify(model.operator, samples=16).as_dict())
