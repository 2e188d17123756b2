"""Operator-plus-measurements models for arbitrary nonsignalling boxes.

Every party uses the same measurement family on ``C^d`` with ``d = max(r, m)``:
for setting ``x`` the first ``r - 1`` elements are ``z |α_a^x><α_a^x|`` with
``z = 1/r`` and the last element is the identity minus their sum. Together
with the identity these ``m(r-1) + 1`` matrices are linearly independent and
have a dual family ``{Ĩ, M̃_a^x}``. The operator

    O = sum over subsets S of parties,
        sum over a_i < r-1, x_i (i in S) of
        P_S(a_S | x_S) * (tensor of M̃_{a_i}^{x_i} on S and Ĩ elsewhere)

with ``P_S`` the marginal on ``S`` (``P_∅ = 1``) reproduces the box under the
trace rule, including the last outcomes, which are fixed by normalization
and no-signalling.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass

import numpy as np

from .boxes import CorrelationBox, Scenario, is_nonsignalling, marginal
from .errors import GramSingular, IndependenceFailure, SignallingInput
from .hilbert import HermitianOperator, duality_error, random_unit_vector, solve_dual
from .operators import MeasurementModel, Povm, evaluate_box

MAX_REDRAWS = 100


@dataclass
class SynthesisModel:
    scenario: Scenario
    local_dim: int
    seed: int
    vectors: np.ndarray  # (m, r-1, d)
    weights: np.ndarray  # (m, r-1)
    povms: MeasurementModel
    basis: list  # [I, M_0^0, ..., M_{r-2}^{m-1}]
    duals: list  # same order as basis
    operator: HermitianOperator

    @property
    def identity_dual(self) -> np.ndarray:
        return self.duals[0]

    def element_duals(self) -> np.ndarray:
        """Duals of the weighted rank-one elements, shape ``(m, r-1, d, d)``."""
        m, r1 = self.weights.shape
        d = self.local_dim
        return np.array(self.duals[1:]).reshape(m, r1, d, d)

    def duality_error(self) -> float:
        return duality_error(self.basis, self.duals)

    def round_trip_error(self, box: CorrelationBox) -> float:
        return evaluate_box(self.operator, self.povms).max_abs_diff(box)


def _local_family(vectors: np.ndarray, weights: np.ndarray, d: int):
    """Per-setting POVMs and the ``[I, M_a^x]`` basis from vectors and weights."""
    eye = np.eye(d, dtype=complex)
    povms, basis = [], [eye]
    for x in range(vectors.shape[0]):
        elems = [w * np.outer(v, v.conj()) for v, w in zip(vectors[x], weights[x])]
        basis += elems
        povms.append(Povm(elems + [eye - sum(elems, np.zeros((d, d), dtype=complex))]))
    return povms, basis


def build_measurements(scenario: Scenario, seed: int):
    """Draw the shared local measurement family.

    Returns ``(vectors, weights, povms, basis, duals)``; ``povms`` is the list
    of per-setting POVMs used by every party.

    Raises
    ------
    IndependenceFailure
        If no linearly independent family is found in ``MAX_REDRAWS`` draws.
    """
    scenario = scenario if isinstance(scenario, Scenario) else Scenario(*scenario)
    _, m, r = scenario
    d = max(r, m)
    rng = np.random.default_rng(seed)
    weights = np.full((m, r - 1), 1.0 / r)
    for _ in range(MAX_REDRAWS):
        vectors = np.array(
            [[random_unit_vector(d, rng) for _ in range(r - 1)] for _ in range(m)]
        ).reshape(m, r - 1, d)
        povms, basis = _local_family(vectors, weights, d)
        try:
            duals = solve_dual(basis)
        except GramSingular:
            continue
        return vectors, weights, povms, basis, duals
    raise IndependenceFailure(f"no independent family in dimension {d} after {MAX_REDRAWS} draws")


def build_operator(box: CorrelationBox, identity_dual: np.ndarray,
                   element_duals: np.ndarray) -> HermitianOperator:
    """Assemble the unit-trace Hermitian operator for a nonsignalling box.

    ``element_duals`` has shape ``(m, r-1, d, d)``.

    Raises
    ------
    SignallingInput
        If the box fails the no-signalling check.
    """
    ok, violation = is_nonsignalling(box)
    if not ok:
        raise SignallingInput(f"box is signalling (max violation {violation:.3e})")
    n, m, r = box.scenario
    d = identity_dual.shape[0]
    letters = iter(string.ascii_letters)
    rows = [next(letters) for _ in range(n)]
    cols = [next(letters) for _ in range(n)]
    xs = [next(letters) for _ in range(n)]
    outs = [next(letters) for _ in range(n)]
    out_spec = "".join(rows) + "".join(cols)
    total = np.zeros((d,) * (2 * n), dtype=complex)
    for size in range(n + 1):
        for subset in itertools.combinations(range(n), size):
            if subset:
                sub = marginal(box, subset)
                coeff = sub.probs[(slice(None),) * size + (slice(0, r - 1),) * size]
                terms = ["".join(xs[k] for k in subset) + "".join(outs[k] for k in subset)]
                args = [coeff]
            else:
                terms, args = [], []
            for k in range(n):
                if k in subset:
                    terms.append(xs[k] + outs[k] + rows[k] + cols[k])
                    args.append(element_duals)
                else:
                    terms.append(rows[k] + cols[k])
                    args.append(identity_dual)
            total += np.einsum(",".join(terms) + "->" + out_spec, *args, optimize=True)
    return HermitianOperator(total.reshape(d ** n, d ** n), (d,) * n, tol=1e-10)


def synthesize(box: CorrelationBox, seed: int = 0) -> SynthesisModel:
    """Build local POVMs and an operator that reproduce ``box`` under the trace rule."""
    ok, violation = is_nonsignalling(box)
    if not ok:
        raise SignallingInput(f"box is signalling (max violation {violation:.3e})")
    vectors, weights, povms, basis, duals = build_measurements(box.scenario, seed)
    n, m, r = box.scenario
    d = basis[0].shape[0]
    element_duals = np.array(duals[1:]).reshape(m, r - 1, d, d)
    operator = build_operator(box, duals[0], element_duals)
    mm = MeasurementModel([povms] * n)
    return SynthesisModel(box.scenario, d, seed, vectors, weights, mm, basis, duals, operator)
