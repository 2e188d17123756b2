import numpy as np
import pytest

from tracerule.boxes import (
    CorrelationBox,
    Scenario,
    deterministic_box,
    marginal,
    pr_box,
    random_ns_box,
)
from tracerule.errors import SignallingInput
from tracerule.hilbert import HermitianOperator, random_density_matrix
from tracerule.operators import MeasurementModel, evaluate_box, random_measurement_model
from tracerule.synthesis import build_measurements, build_operator, synthesize


def test_measurements_222():
    vectors, weights, povms, basis, duals = build_measurements(Scenario(2, 2, 2), seed=0)
    assert vectors.shape == (2, 1, 2)
    assert np.all(weights == 0.5)
    assert len(povms) == 2 and all(p.n_outcomes == 2 and p.dim == 2 for p in povms)
    for x, p in enumerate(povms):
        v = vectors[x, 0]
        assert np.abs(p[0] - 0.5 * np.outer(v, v.conj())).max() < 1e-15
        # last element is strictly positive: eigenvalues 1 and 1 - z
        assert np.linalg.eigvalsh(p[1]).min() > 0.5 - 1e-12
    assert len(basis) == len(duals) == 3


def test_measurements_single_setting():
    vectors, weights, povms, basis, duals = build_measurements(Scenario(1, 1, 2), seed=0)
    assert len(povms) == 1 and povms[0].n_outcomes == 2


@pytest.mark.parametrize("scenario", [(1, 3, 3), (2, 3, 4), (2, 4, 2)])
def test_last_element_positive_definite(scenario):
    _, m, r = scenario
    _, _, povms, _, _ = build_measurements(Scenario(*scenario), seed=1)
    for p in povms:
        # ||sum_a z |a><a| || <= (r-1)/r, so the remainder has eigenvalues >= 1/r
        assert np.linalg.eigvalsh(p[r - 1]).min() >= 1 / r - 1e-12


def test_single_party_reconstruction():
    box = random_ns_box(Scenario(1, 3, 3), seed=2)
    _, _, povms, basis, duals = build_measurements(box.scenario, seed=0)
    op = build_operator(box, duals[0], np.array(duals[1:]).reshape(3, 2, 3, 3))
    # explicit single-party formula
    expected = duals[0] + sum(box.probs[x, a] * duals[1 + 2 * x + a] for x in range(3) for a in range(2))
    assert np.abs(op.matrix - expected).max() < 1e-12
    out = evaluate_box(op, MeasurementModel([povms]))
    assert out.max_abs_diff(box) < 1e-9


def test_pr_round_trip():
    model = synthesize(pr_box(), seed=3)
    assert model.round_trip_error(pr_box()) < 1e-9
    assert model.duality_error() < 1e-10
    assert abs(model.operator.trace() - 1) < 1e-9


@pytest.mark.parametrize("scenario", [(3, 2, 2), (3, 2, 3), (4, 2, 2), (2, 3, 3)])
def test_round_trip_random(scenario):
    box = random_ns_box(Scenario(*scenario), seed=7)
    model = synthesize(box, seed=7)
    assert model.round_trip_error(box) < 1e-9
    assert model.duality_error() < 1e-10
    m = model.operator.matrix
    assert np.abs(m - m.conj().T).max() < 1e-12


def test_deterministic_round_trip():
    box = deterministic_box([[0, 1], [1, 1], [1, 0]], 2)
    assert synthesize(box, seed=0).round_trip_error(box) < 1e-10


@pytest.mark.parametrize("seed", range(5))
def test_quantum_box_round_trip(seed):
    rng = np.random.default_rng(seed)
    rho = HermitianOperator(random_density_matrix(4, rng), (2, 2))
    box = evaluate_box(rho, random_measurement_model((2, 2), 2, 3, rng))
    box = CorrelationBox(box.scenario, box.probs)
    assert synthesize(box, seed=seed).round_trip_error(box) < 1e-9


def test_operator_reproduces_marginals():
    box = random_ns_box(Scenario(3, 2, 3), seed=9)
    model = synthesize(box, seed=9)
    full = evaluate_box(model.operator, model.povms)
    # summing the full trace-rule table over party 3's outcomes at setting 0
    for keep in ([0, 1], [0, 2], [1]):
        assert np.abs(marginal(full, keep).probs - marginal(box, keep).probs).max() < 1e-9


def test_signalling_rejected():
    p = np.array(deterministic_box([[0, 0], [0, 0]], 2).probs)
    # move 0.1 of weight within setting (0, 1) so Alice's marginal depends on y
    p[0, 1, 0, 0] -= 0.1
    p[0, 1, 1, 0] += 0.1
    box = CorrelationBox(Scenario(2, 2, 2), p)
    with pytest.raises(SignallingInput):
        synthesize(box)


def test_operator_not_unique():
    a = synthesize(pr_box(), seed=1).operator.matrix
    b = synthesize(pr_box(), seed=2).operator.matrix
    assert np.abs(a - b).max() > 1e-3
