import itertools

import numpy as np
import pytest

from tracerule.boxes import BELL_TERMS, bell_beta, classical_max_beta, is_nonsignalling
from tracerule.errors import DegenerateBasis, RangeViolation
from tracerule.hilbert import kron
from tracerule.operators import WitnessVerdict, classify
from tracerule.upb import (
    DEFAULT_E,
    UpbModel,
    beta_formula,
    build_upb,
    build_witness,
    check_e,
    compute_epsilon,
    e_from_theta,
    gleason_box,
    orthogonal_complement,
    upb_measurements,
    upb_report,
)
from tracerule.witness import grid_oracle_3qubit, minimize_over_products

# product-state minimum of the UPB projector for |e> = (|0> - |1>)/sqrt 2, from the
# alternating optimizer (64 restarts) and confirmed by the 120-point grid oracle (0.0814430)
EPSILON_DEFAULT = 0.0814413464563


@pytest.fixture(scope="module")
def model():
    return UpbModel.build()


def test_upb_states_orthonormal_products(model):
    states = np.array(model.upb_states)
    assert np.abs(states.conj() @ states.T - np.eye(4)).max() < 1e-12
    for s in states:
        # product vector: every bipartition cut has Schmidt rank 1
        t = s.reshape(2, 2, 2)
        for k in range(3):
            assert np.linalg.matrix_rank(np.moveaxis(t, k, 0).reshape(2, 4), tol=1e-12) == 1


def test_projector_and_state(model):
    pi = model.pi_upb.matrix
    assert np.abs(pi @ pi - pi).max() < 1e-10
    assert abs(np.trace(pi).real - 4) < 1e-12
    assert abs(pi[0, 0] - 1) < 1e-15
    w = np.linalg.eigvalsh(model.rho_upb.matrix)
    assert np.abs(w - [0, 0, 0, 0, 0.25, 0.25, 0.25, 0.25]).max() < 1e-12


def test_degenerate_e():
    for e in ([1, 0], [0, 1j], [1, 1e-9]):
        with pytest.raises(DegenerateBasis):
            build_upb(e)


def test_complement_phase_convention():
    ep = orthogonal_complement(DEFAULT_E)
    assert np.abs(ep - np.array([1, 1]) / np.sqrt(2)).max() < 1e-15
    ep = orthogonal_complement(e_from_theta(np.pi / 4))
    assert ep[0].real > 0 and ep[0].imag == 0


def test_no_product_state_orthogonal_on_grid(model):
    # unextendibility: the minimum of <Π> on a grid stays well above zero
    assert grid_oracle_3qubit(model.pi_upb, 24) > 0.05


def test_epsilon_regression(model):
    assert 0 < model.epsilon < 0.5
    assert abs(model.epsilon - EPSILON_DEFAULT) < 1e-9


def test_epsilon_phase_invariance():
    a = compute_epsilon(build_upb(DEFAULT_E)[1], restarts=32)
    b = compute_epsilon(build_upb(-1j * DEFAULT_E)[1], restarts=32)
    assert abs(a - b) < 1e-9


def test_witness_normalization_and_detection(model):
    eps = model.epsilon
    assert abs(model.w_prime.trace() - 1) < 1e-10
    assert abs(model.witness_trace_on_rho() + eps / (4 * (1 - 2 * eps))) < 1e-10
    assert model.witness_trace_on_rho() < 0


def test_witness_saturates_on_products(model):
    res = minimize_over_products(model.w_prime, restarts=64, seed=11)
    assert abs(res.value) < 1e-8


def test_witness_range_checks(model):
    for bad in (0.0, 0.5, -0.1, 0.7):
        with pytest.raises(RangeViolation):
            build_witness(model.pi_upb, bad)
        with pytest.raises(RangeViolation):
            beta_formula(bad)


def test_measurement_terms_hit_upb_states(model):
    mm = upb_measurements()
    for (xs, outs), state in zip(BELL_TERMS, model.upb_states):
        elem = kron(*[mm.element(k, xs[k], outs[k]) for k in range(3)])
        assert np.abs(elem - np.outer(state, state.conj())).max() < 1e-12


def test_gleason_box(model):
    box = gleason_box(model)
    assert box.valid_probabilities
    assert box.probs.min() >= -1e-9
    norms = box.probs.sum(axis=(3, 4, 5))
    assert np.abs(norms - 1).max() < 1e-9
    ok, v = is_nonsignalling(box)
    assert ok and v < 1e-9
    beta = bell_beta(box)
    assert abs(beta - beta_formula(model.epsilon)) < 1e-9
    assert beta > 1
    assert beta - classical_max_beta() >= model.epsilon / (1 - 2 * model.epsilon) - 1e-9


def test_beta_formula_examples():
    assert abs(beta_formula(1e-12) - 1) < 1e-11
    assert beta_formula(0.25) == 1.5


def test_witness_classification(model):
    cls = classify(model.w_prime, samples=64, seed=3)
    assert not cls.positive
    assert cls.witness_flag is WitnessVerdict.CERTIFIED


def test_theta_sweep_continuity():
    eps = [UpbModel.from_theta(t, restarts=32).epsilon for t in np.pi / 8 * np.arange(1, 4)]
    assert all(0 < e < 0.5 for e in eps)
    assert all(abs(a - b) < 0.2 for a, b in zip(eps, eps[1:]))


def test_report_checks_pass():
    report = upb_report(theta=np.pi / 4, restarts=32, grid=40)
    assert all(c[1] for c in report["checks"]), report["checks"]
    assert report["results"]["classical_max"] == 1.0


def test_check_e_normalizes():
    assert abs(np.linalg.norm(check_e([3, -3])) - 1) < 1e-15
