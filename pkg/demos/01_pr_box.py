"""The PR box from a Bell-diagonal operator.

The operator a+ Φ+ + a- Φ- with a± = (1 ± √2)/2 has unit trace but one
negative eigenvalue. Measured with σx, σy on one side and (σx ∓ σy)/√2 on
the other it gives P(a,b|x,y) = 1/2 exactly when a XOR b = x AND y.
"""

import numpy as np

from tracerule import classify, evaluate_box, pr_box, pr_measurements, pr_operator

op = pr_operator()
box = evaluate_box(op, pr_measurements())

print("eigenvalues of O:", np.round(np.linalg.eigvalsh(op.matrix), 6))
print("max |P - P_PR|:", box.max_abs_diff(pr_box()))

for x in range(2):
    for y in range(2):
        row = [box((a, b), (x, y)) for a in range(2) for b in range(2)]
        print(f"x={x} y={y}  P(00,01,10,11) = {np.round(row, 6)}")

cls = classify(op, samples=32)
print("positive:", cls.positive, " product minimum:", round(cls.product_min, 6),
      " verdict:", cls.witness_flag.value)
