"""Linear maps, Choi operators and the bipartite witness/state trace identity.

For a witness written as ``W = (I ⊗ Λ)(Ψ)`` with ``Λ`` positive and
trace-preserving, ``tr(W M_1 ⊗ M_2) = tr(Ψ M_1 ⊗ Λ*(M_2))``, and ``Λ*`` maps
POVMs to POVMs. Bipartite witness correlations are therefore quantum
correlations of the pure state ``Ψ``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch
from .hilbert import HermitianOperator, as_matrix, kron, projector, random_unit_vector
from .operators import (
    MeasurementModel,
    Povm,
    evaluate_box,
    is_valid_povm,
    random_measurement_model,
    trace_rule_tensor,
)

TP_TOL = 1e-10


@dataclass
class LinearMap:
    """``X -> sum_k L_k X R_k^†`` from ``C^{input_dim}`` to ``C^{output_dim}`` operators."""

    pairs: list
    input_dim: int
    output_dim: int

    def __post_init__(self):
        pairs = [(np.asarray(l, dtype=complex), np.asarray(r, dtype=complex)) for l, r in self.pairs]
        for l, r in pairs:
            if l.shape != (self.output_dim, self.input_dim) or r.shape != l.shape:
                raise DimensionMismatch(
                    f"pair of shapes {l.shape}, {r.shape} does not map "
                    f"{self.input_dim} -> {self.output_dim}"
                )
        self.pairs = pairs

    @classmethod
    def from_kraus(cls, kraus: Sequence) -> "LinearMap":
        ks = [np.asarray(k, dtype=complex) for k in kraus]
        out_dim, in_dim = ks[0].shape
        return cls([(k, k) for k in ks], in_dim, out_dim)

    def __call__(self, x) -> np.ndarray:
        return apply_map(self, x)

    @property
    def is_kraus(self) -> bool:
        return all(np.array_equal(l, r) for l, r in self.pairs)

    def trace_preservation_error(self) -> float:
        total = sum(r.conj().T @ l for l, r in self.pairs)
        return float(np.abs(total - np.eye(self.input_dim)).max())

    def is_trace_preserving(self, tol: float = TP_TOL) -> bool:
        return self.trace_preservation_error() < tol


def apply_map(lam: LinearMap, x) -> np.ndarray:
    x = as_matrix(x)
    if x.shape != (lam.input_dim, lam.input_dim):
        raise DimensionMismatch(f"input of shape {x.shape}, map expects side {lam.input_dim}")
    out = np.zeros((lam.output_dim, lam.output_dim), dtype=complex)
    for l, r in lam.pairs:
        out += l @ x @ r.conj().T
    return out


def dual_map(lam: LinearMap) -> LinearMap:
    """Adjoint ``X -> sum_k L_k^† X R_k``.

    For Hermiticity-preserving maps (all maps built here) this satisfies
    ``tr(Λ(A) B) = tr(A Λ*(B))``.
    """
    return LinearMap([(l.conj().T, r.conj().T) for l, r in lam.pairs], lam.output_dim, lam.input_dim)


def compose(outer: LinearMap, inner: LinearMap) -> LinearMap:
    """``outer ∘ inner``."""
    if inner.output_dim != outer.input_dim:
        raise DimensionMismatch("maps cannot be composed")
    pairs = [(lo @ li, ro @ ri) for lo, ro in outer.pairs for li, ri in inner.pairs]
    return LinearMap(pairs, inner.input_dim, outer.output_dim)


def identity_map(d: int) -> LinearMap:
    return LinearMap.from_kraus([np.eye(d)])


def transpose_map(d: int) -> LinearMap:
    """``X -> X^T`` as ``sum_ij E_ij X E_ij`` with ``E_ij = |i><j|``."""
    pairs = []
    for i in range(d):
        for j in range(d):
            e_ij = np.zeros((d, d), dtype=complex)
            e_ij[i, j] = 1.0
            pairs.append((e_ij, e_ij.T.copy()))
    return LinearMap(pairs, d, d)


def depolarizing_map(d: int) -> LinearMap:
    """Completely depolarizing channel ``X -> tr(X) I/d``."""
    kraus = []
    for i in range(d):
        for j in range(d):
            k = np.zeros((d, d), dtype=complex)
            k[i, j] = 1.0 / np.sqrt(d)
            kraus.append(k)
    return LinearMap.from_kraus(kraus)


def random_cptp(input_dim: int, output_dim: int, n_kraus: int, rng: np.random.Generator) -> LinearMap:
    """Kraus operators cut from a random isometry ``C^{d_in} -> C^{n_kraus d_out}``."""
    g = rng.standard_normal((n_kraus * output_dim, input_dim)) + 1j * rng.standard_normal(
        (n_kraus * output_dim, input_dim)
    )
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return LinearMap.from_kraus([q[k * output_dim:(k + 1) * output_dim] for k in range(n_kraus)])


def choi(lam: LinearMap) -> HermitianOperator:
    """``(I ⊗ Λ)(sum_ij |ii><jj|)`` on ``input ⊗ output``."""
    d = lam.input_dim
    blocks = np.zeros((d, d, lam.output_dim, lam.output_dim), dtype=complex)
    for i in range(d):
        for j in range(d):
            e_ij = np.zeros((d, d), dtype=complex)
            e_ij[i, j] = 1.0
            blocks[i, j] = apply_map(lam, e_ij)
    mat = blocks.transpose(0, 2, 1, 3).reshape(d * lam.output_dim, d * lam.output_dim)
    return HermitianOperator(mat, (d, lam.output_dim), tol=1e-10)


def apply_second(lam: LinearMap, op, first_dim: int) -> np.ndarray:
    """``(I ⊗ Λ)`` applied to an operator on ``C^{first_dim} ⊗ C^{input_dim}``."""
    mat = as_matrix(op)
    eye = np.eye(first_dim)
    out = np.zeros((first_dim * lam.output_dim,) * 2, dtype=complex)
    for l, r in lam.pairs:
        out += kron(eye, l) @ mat @ kron(eye, r).conj().T
    return out


def transport_povm(lam_dual: LinearMap, povm: Povm) -> list:
    return [apply_map(lam_dual, e) for e in povm]


class GleasonIdentityCheck(NamedTuple):
    max_discrepancy: float
    dual_povms_valid: bool
    witness_min_eigenvalue: float


def verify_gleason_identity(psi, lam: LinearMap, mm: MeasurementModel) -> GleasonIdentityCheck:
    """Compare ``tr((I⊗Λ)(Ψ) M_1⊗M_2)`` with ``tr(Ψ M_1⊗Λ*(M_2))`` entrywise.

    ``psi`` is the projector onto a pure state of ``C^{d_1} ⊗ C^{d_in}``;
    ``mm`` measures party 2 on the output space of ``Λ``. Also reports
    whether every transported POVM ``{Λ*(M_a)}`` is a valid POVM.
    """
    psi = as_matrix(psi)
    d1 = mm.local_dims[0]
    if mm.n_parties != 2:
        raise DimensionMismatch("the identity is bipartite")
    if mm.local_dims[1] != lam.output_dim or psi.shape[0] != d1 * lam.input_dim:
        raise DimensionMismatch("state, map and measurements have inconsistent dimensions")
    w = HermitianOperator(apply_second(lam, psi, d1), (d1, lam.output_dim), tol=1e-10)
    lhs = evaluate_box(w, mm)
    lam_dual = dual_map(lam)
    transported = [transport_povm(lam_dual, p) for p in mm.parties[1]]
    valid = all(is_valid_povm(t) for t in transported)
    # no POVM validation on this side, so invalid transports still get compared
    stacks = [mm.stacked(0), np.array(transported)]
    rhs = trace_rule_tensor(psi, (d1, lam.input_dim), stacks).real
    discrepancy = float(np.abs(lhs.probs - rhs).max())
    w_min = float(np.linalg.eigvalsh(w.matrix)[0])
    return GleasonIdentityCheck(discrepancy, valid, w_min)


def random_pure_projector(dims: Sequence[int], rng: np.random.Generator) -> np.ndarray:
    return projector(random_unit_vector(int(np.prod(dims)), rng))


def run_trials(trials: int = 100, seed: int = 0, dim: int = 2, n_settings: int = 2,
               n_outcomes: int = 2) -> dict:
    """Random CPTP maps, random pure states and random POVMs; worst discrepancy."""
    worst = 0.0
    all_valid = True
    for t in range(trials):
        rng = np.random.default_rng([int(seed), t])
        lam = random_cptp(dim, dim, n_kraus=int(rng.integers(1, dim * dim + 1)), rng=rng)
        psi = random_pure_projector((dim, dim), rng)
        mm = random_measurement_model((dim, dim), n_settings, n_outcomes, rng)
        check = verify_gleason_identity(psi, lam, mm)
        worst = max(worst, check.max_discrepancy)
        all_valid &= check.dual_povms_valid
    return {"trials": trials, "max_discrepancy": worst, "dual_povms_valid": all_valid}
