import numpy as np
import pytest

from tracerule.cj import (
    LinearMap,
    apply_map,
    apply_second,
    choi,
    compose,
    depolarizing_map,
    dual_map,
    identity_map,
    random_cptp,
    random_pure_projector,
    run_trials,
    transpose_map,
    verify_gleason_identity,
)
from tracerule.errors import DimensionMismatch
from tracerule.hilbert import PAULI_Z, random_density_matrix, random_unit_trace_hermitian
from tracerule.operators import (
    MeasurementModel,
    evaluate_box,
    is_valid_povm,
    maximally_entangled,
    projective_from_bases,
    random_measurement_model,
    random_povm,
)
from tracerule.hilbert import HermitianOperator

SWAP = np.eye(4)[[0, 2, 1, 3]]


def phi_plus():
    v = maximally_entangled(2)
    return np.outer(v, v.conj())


def test_apply_examples():
    assert np.array_equal(apply_map(identity_map(2), PAULI_Z), PAULI_Z)
    ket01 = np.array([[0, 1], [0, 0]])
    assert np.array_equal(apply_map(transpose_map(2), ket01), ket01.T)
    rho = random_density_matrix(3, np.random.default_rng(0))
    assert np.abs(apply_map(depolarizing_map(3), rho) - np.eye(3) / 3).max() < 1e-15
    with pytest.raises(DimensionMismatch):
        apply_map(identity_map(2), np.eye(3))


def test_choi_examples():
    c = choi(identity_map(2)).matrix
    assert np.abs(c - 2 * phi_plus()).max() < 1e-15
    assert np.linalg.matrix_rank(c) == 1
    t = choi(transpose_map(2)).matrix
    assert np.abs(t - SWAP).max() < 1e-15
    assert np.allclose(np.linalg.eigvalsh(t), [-1, 1, 1, 1])
    assert np.abs(choi(depolarizing_map(2)).matrix - np.eye(4) / 2).max() < 1e-15


def test_choi_matches_apply_second():
    lam = random_cptp(2, 3, 2, np.random.default_rng(1))
    assert np.abs(choi(lam).matrix - apply_second(lam, 2 * phi_plus(), 2)).max() < 1e-12


def test_dual_examples(rng):
    ident = dual_map(identity_map(3))
    x = random_unit_trace_hermitian(3, rng)
    assert np.abs(apply_map(ident, x) - x).max() < 1e-15
    t = dual_map(transpose_map(3))
    for _ in range(10):
        a = random_unit_trace_hermitian(3, rng)
        b = random_unit_trace_hermitian(3, rng)
        assert abs(np.trace(a.T @ b) - np.trace(a @ b.T)) < 1e-12
        assert np.abs(apply_map(t, b) - b.T).max() < 1e-15


@pytest.mark.parametrize("seed", range(5))
def test_adjoint_identity(seed):
    rng = np.random.default_rng(seed)
    for lam in (random_cptp(2, 3, 3, rng), compose(transpose_map(3), random_cptp(2, 3, 2, rng))):
        dual = dual_map(lam)
        for _ in range(100):
            a = random_unit_trace_hermitian(2, rng)
            b = random_unit_trace_hermitian(3, rng)
            lhs = np.trace(apply_map(lam, a) @ b)
            rhs = np.trace(a @ apply_map(dual, b))
            assert abs(lhs - rhs) < 1e-10


@pytest.mark.parametrize("seed", range(5))
def test_dual_of_channel_is_unital(seed):
    rng = np.random.default_rng(seed)
    lam = random_cptp(3, 2, 4, rng)
    assert lam.is_trace_preserving()
    assert np.abs(apply_map(dual_map(lam), np.eye(2)) - np.eye(3)).max() < 1e-10


def test_transpose_is_trace_preserving_not_kraus():
    t = transpose_map(2)
    assert t.is_trace_preserving() and not t.is_kraus


@pytest.mark.parametrize("seed", range(5))
def test_dual_transports_povms(seed):
    rng = np.random.default_rng(seed)
    for lam in (random_cptp(3, 2, 3, rng), transpose_map(2)):
        povm = random_povm(2, 3, rng)
        assert is_valid_povm([apply_map(dual_map(lam), e) for e in povm])


def test_identity_fixture():
    mm = random_measurement_model((2, 2), 2, 2, np.random.default_rng(3))
    psi = phi_plus()
    check = verify_gleason_identity(psi, identity_map(2), mm)
    assert check.max_discrepancy < 1e-14
    quantum = evaluate_box(HermitianOperator(psi, (2, 2)), mm)
    w = HermitianOperator(apply_second(identity_map(2), psi, 2), (2, 2))
    assert evaluate_box(w, mm).max_abs_diff(quantum) < 1e-14


def test_transpose_fixture():
    mm = MeasurementModel([
        projective_from_bases([np.eye(2), np.array([[1, 1], [1, -1]]) / np.sqrt(2)]),
        projective_from_bases([np.eye(2), np.array([[1, 1j], [1, -1j]]) / np.sqrt(2)]),
    ])
    check = verify_gleason_identity(phi_plus(), transpose_map(2), mm)
    assert check.max_discrepancy < 1e-10
    assert check.dual_povms_valid
    assert check.witness_min_eigenvalue < -0.4


def test_random_trials():
    out = run_trials(100, seed=0)
    assert out["max_discrepancy"] < 1e-10
    assert out["dual_povms_valid"]


def test_mixed_dimensions():
    rng = np.random.default_rng(4)
    lam = random_cptp(2, 3, 2, rng)
    psi = random_pure_projector((3, 2), rng)
    mm = random_measurement_model((3, 3), 2, 3, rng)
    check = verify_gleason_identity(psi, lam, mm)
    assert check.max_discrepancy < 1e-10 and check.dual_povms_valid


def test_linear_map_shape_check():
    with pytest.raises(DimensionMismatch):
        LinearMap([(np.eye(2), np.eye(3))], 2, 2)
