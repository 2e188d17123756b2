"""Dense complex-matrix kernel: Hermitian operators on tensor-product spaces.

Everything here is small-dimensional linear algebra on top of numpy. The one
non-trivial routine is :func:`solve_dual`, which returns the dual family of a
set of linearly independent Hermitian matrices with respect to the
Hilbert-Schmidt pairing ``tr(A B)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence, Union

import numpy as np

from .errors import DimensionMismatch, GramSingular, NotHermitian

HERMITIAN_TOL = 1e-12
GRAM_RCOND = 1e-10

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A Hermitian matrix acting on ``C^{d_1} ⊗ ... ⊗ C^{d_N}``.

    The matrix is checked against its conjugate transpose (max absolute entry
    deviation, scaled by the largest entry when that exceeds one) and then
    symmetrized, so the stored matrix is exactly Hermitian.
    """

    matrix: np.ndarray
    local_dims: tuple

    def __init__(self, matrix, local_dims=None, tol: float = HERMITIAN_TOL):
        mat = np.array(matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {mat.shape}")
        if local_dims is None:
            local_dims = (mat.shape[0],)
        dims = tuple(int(d) for d in local_dims)
        if any(d < 1 for d in dims) or int(np.prod(dims)) != mat.shape[0]:
            raise DimensionMismatch(
                f"local dims {dims} do not multiply to matrix side {mat.shape[0]}"
            )
        scale = max(1.0, float(np.abs(mat).max(initial=0.0)))
        dev = float(np.abs(mat - mat.conj().T).max(initial=0.0))
        if dev > tol * scale:
            raise NotHermitian(f"matrix deviates from its adjoint by {dev:.3e}")
        mat = 0.5 * (mat + mat.conj().T)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "local_dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_parties(self) -> int:
        return len(self.local_dims)

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def tensor(self) -> np.ndarray:
        """View the matrix as a tensor with axes ``(i_1..i_N, j_1..j_N)``."""
        return self.matrix.reshape(self.local_dims + self.local_dims)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self):
        return f"HermitianOperator(local_dims={self.local_dims})"


OperatorLike = Union[HermitianOperator, np.ndarray]


def as_matrix(a: OperatorLike) -> np.ndarray:
    if isinstance(a, HermitianOperator):
        return a.matrix
    return np.asarray(a, dtype=complex)


def kron(*mats: OperatorLike) -> np.ndarray:
    """Kronecker product of any number of matrices (or vectors)."""
    if not mats:
        return np.ones((1, 1), dtype=complex)
    return reduce(np.kron, [as_matrix(m) for m in mats])


def tensor_operator(*ops: HermitianOperator) -> HermitianOperator:
    """Tensor product that keeps track of the local dimensions."""
    dims = sum((op.local_dims for op in ops), ())
    return HermitianOperator(kron(*ops), dims)


def hs_inner(a: OperatorLike, b: OperatorLike) -> float:
    """Hilbert-Schmidt pairing ``tr(a b)``; real for Hermitian arguments."""
    ma, mb = as_matrix(a), as_matrix(b)
    if ma.shape != mb.shape:
        raise DimensionMismatch(f"shapes {ma.shape} and {mb.shape} differ")
    # tr(AB) = sum_ij A_ij B_ji
    return float(np.sum(ma * mb.T).real)


def eig_hermitian(a: OperatorLike):
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns)."""
    if not isinstance(a, HermitianOperator):
        a = HermitianOperator(a)
    return np.linalg.eigh(a.matrix)


def min_eigenvalue(a: OperatorLike) -> float:
    m = as_matrix(a)
    return float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])


def is_psd(a: OperatorLike, tol: float = 1e-10) -> bool:
    return min_eigenvalue(a) >= -tol


def projector(vec) -> np.ndarray:
    """Rank-one projector ``|v><v|`` onto a (not necessarily normalized) vector."""
    v = np.asarray(vec, dtype=complex).ravel()
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def gram_matrix(basis: Sequence[OperatorLike]) -> np.ndarray:
    mats = np.array([as_matrix(m) for m in basis])
    flat = mats.reshape(len(mats), -1)
    # G_ij = tr(M_i M_j) = sum_kl (M_i)_kl (M_j)_lk
    flat_t = mats.transpose(0, 2, 1).reshape(len(mats), -1)
    return (flat @ flat_t.T).real


def solve_dual(basis: Sequence[OperatorLike], rcond: float = GRAM_RCOND) -> list[np.ndarray]:
    """Dual family of linearly independent Hermitian matrices.

    Returns matrices ``D_j = sum_i (G^{-1})_{ji} M_i`` with ``G_ij = tr(M_i M_j)``,
    so that ``tr(M_i D_j) = delta_ij`` and every ``D_j`` lies in the real span
    of the inputs.

    Raises
    ------
    GramSingular
        If the smallest singular value of ``G`` is below ``rcond`` times the
        largest one.
    """
    if len(basis) == 0:
        return []
    mats = np.array([as_matrix(m) for m in basis])
    gram = gram_matrix(mats)
    sv = np.linalg.svd(gram, compute_uv=False)
    if sv[-1] < rcond * sv[0]:
        raise GramSingular(
            f"Gram matrix is singular (condition {sv[0] / max(sv[-1], 1e-300):.3e})"
        )
    coeffs = np.linalg.inv(gram)
    duals = np.einsum("ji,ikl->jkl", coeffs, mats)
    duals = 0.5 * (duals + duals.conj().transpose(0, 2, 1))
    return list(duals)


def duality_error(basis: Sequence[OperatorLike], duals: Sequence[OperatorLike]) -> float:
    """``max_ij |tr(M_i D_j) - delta_ij|``."""
    mats = np.array([as_matrix(m) for m in basis])
    dmats = np.array([as_matrix(m) for m in duals])
    pair = np.einsum("ikl,jlk->ij", mats, dmats).real
    return float(np.abs(pair - np.eye(len(mats))).max(initial=0.0))


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector in ``C^dim``."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unit_trace_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Gaussian Hermitian matrix shifted along the identity to have unit trace."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = 0.5 * (g + g.conj().T)
    return h + (1.0 - np.trace(h).real) / dim * np.eye(dim)


def partial_trace(mat: OperatorLike, local_dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every party not listed in ``keep`` (kept parties stay in order)."""
    dims = tuple(local_dims)
    n = len(dims)
    keep = sorted(keep)
    t = as_matrix(mat).reshape(dims + dims)
    rows = list(range(n))
    cols = [k + n if k in keep else k for k in range(n)]
    out = [k for k in keep] + [k + n for k in keep]
    t = np.einsum(t, rows + cols, out)
    side = int(np.prod([dims[k] for k in keep]))
    return t.reshape(side, side)
