import numpy as np
import pytest

from tracerule.errors import DimensionMismatch, GramSingular, NotHermitian
from tracerule.hilbert import (
    PAULI_I,
    PAULI_X,
    PAULI_Z,
    HermitianOperator,
    duality_error,
    eig_hermitian,
    hs_inner,
    kron,
    partial_trace,
    projector,
    random_density_matrix,
    random_unit_trace_hermitian,
    solve_dual,
)


def test_kron_examples():
    assert np.array_equal(kron(PAULI_I, PAULI_I), np.eye(4))
    assert np.array_equal(kron(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))
    ket00 = np.array([1, 0, 0, 0])
    assert np.array_equal(kron(PAULI_X, PAULI_X) @ ket00, np.array([0, 0, 0, 1]))


def test_kron_associative_and_trace_multiplicative(rng):
    a, b, c = (random_unit_trace_hermitian(d, rng) * 3 for d in (2, 3, 2))
    assert np.abs(kron(kron(a, b), c) - kron(a, kron(b, c))).max() < 1e-12
    assert abs(np.trace(kron(a, b)) - np.trace(a) * np.trace(b)) < 1e-12


def test_hs_inner_examples():
    assert hs_inner(PAULI_I, PAULI_I) == 2
    assert hs_inner(PAULI_Z, PAULI_Z) == 2
    assert hs_inner(PAULI_Z, PAULI_X) == 0
    with pytest.raises(DimensionMismatch):
        hs_inner(np.eye(2), np.eye(3))


def test_eig_examples():
    w, _ = eig_hermitian(np.diag([3.0, 1.0]))
    assert np.allclose(w, [1, 3])
    w, _ = eig_hermitian(PAULI_X)
    assert np.allclose(w, [-1, 1])
    phi = projector([1, 0, 0, 1])
    w, _ = eig_hermitian(phi)
    assert np.abs(w - [0, 0, 0, 1]).max() < 1e-12


def test_eig_reconstruction(rng):
    a = random_unit_trace_hermitian(6, rng)
    w, v = eig_hermitian(a)
    assert np.all(np.diff(w) >= 0)
    assert np.abs(a @ v - v * w).max() < 1e-10
    assert np.abs((v * w) @ v.conj().T - a).max() < 1e-10


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


def test_hermitian_operator_checks_dims():
    with pytest.raises(DimensionMismatch):
        HermitianOperator(np.eye(4), (2, 3))
    op = HermitianOperator(np.eye(6) / 6, (2, 3))
    assert op.n_parties == 2 and op.dim == 6
    assert abs(op.trace() - 1) < 1e-15


def test_solve_dual_projectors():
    # direct 2x2 Gram inversion: G = diag(1, 1) for the two computational projectors
    basis = [PAULI_I / 2 + PAULI_Z / 2, PAULI_I / 2 - PAULI_Z / 2]
    gram = np.array([[hs_inner(a, b) for b in basis] for a in basis])
    expected = [sum(np.linalg.inv(gram)[j, i] * basis[i] for i in range(2)) for j in range(2)]
    duals = solve_dual(basis)
    for d, e in zip(duals, expected):
        assert np.abs(d - e).max() < 1e-12
    assert duality_error(basis, duals) < 1e-10


def test_solve_dual_trivial_cases():
    (d,) = solve_dual([PAULI_I])
    assert np.abs(d - PAULI_I / 2).max() < 1e-15
    d_i, d_z = solve_dual([PAULI_I, PAULI_Z])
    assert np.abs(d_i - PAULI_I / 2).max() < 1e-15
    assert np.abs(d_z - PAULI_Z / 2).max() < 1e-15


def test_solve_dual_random_family(rng):
    basis = [random_density_matrix(3, rng) for _ in range(7)]
    duals = solve_dual(basis)
    assert duality_error(basis, duals) < 1e-10
    for d in duals:
        assert np.abs(d - d.conj().T).max() < 1e-14


def test_solve_dual_singular():
    with pytest.raises(GramSingular):
        solve_dual([PAULI_I, PAULI_Z, PAULI_I + PAULI_Z])


def test_partial_trace(rng):
    a = random_density_matrix(2, rng)
    b = random_density_matrix(3, rng)
    ab = kron(a, b)
    assert np.abs(partial_trace(ab, (2, 3), [0]) - a).max() < 1e-12
    assert np.abs(partial_trace(ab, (2, 3), [1]) - b).max() < 1e-12
