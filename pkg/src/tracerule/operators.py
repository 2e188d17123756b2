"""Local measurements and the trace rule ``P(a|x) = tr(O M_{a_1}^{x_1} ⊗ ... ⊗ M_{a_N}^{x_N})``."""

from __future__ import annotations

import enum
import string
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .boxes import NS_TOL, CorrelationBox, Scenario
from .errors import DimensionMismatch, InvalidPovm, NonOrthonormal, NotUnitTrace
from .hilbert import PAULI_X, PAULI_Y, HermitianOperator, as_matrix, min_eigenvalue, projector

POVM_TOL = 1e-10
TRACE_TOL = 1e-9
WITNESS_TOL = 1e-8


class Povm:
    """Positive operators on one local space that sum to the identity."""

    def __init__(self, elements: Sequence, tol: float = POVM_TOL):
        mats = np.array([as_matrix(e) for e in elements], dtype=complex)
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2] or len(mats) == 0:
            raise InvalidPovm("POVM elements must be square matrices of one size")
        dev = np.abs(mats - mats.conj().transpose(0, 2, 1)).max()
        if dev > tol:
            raise InvalidPovm(f"non-Hermitian POVM element (deviation {dev:.3e})")
        mats = 0.5 * (mats + mats.conj().transpose(0, 2, 1))
        worst = min(min_eigenvalue(m) for m in mats)
        if worst < -tol:
            raise InvalidPovm(f"POVM element with eigenvalue {worst:.3e}")
        completeness = np.abs(mats.sum(axis=0) - np.eye(mats.shape[1])).max()
        if completeness > tol:
            raise InvalidPovm(f"elements do not sum to the identity ({completeness:.3e})")
        mats.setflags(write=False)
        self.elements = mats

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    @property
    def n_outcomes(self) -> int:
        return len(self.elements)

    def __getitem__(self, a):
        return self.elements[a]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def is_valid_povm(elements, tol: float = POVM_TOL) -> bool:
    try:
        Povm(elements, tol=tol)
    except InvalidPovm:
        return False
    return True


class MeasurementModel:
    """For each party, a list of POVMs (one per setting).

    All parties must share the same number of settings and outcomes so that
    the model induces a box for a uniform :class:`Scenario`.
    """

    def __init__(self, parties: Sequence[Sequence]):
        parties = [[p if isinstance(p, Povm) else Povm(p) for p in settings] for settings in parties]
        if not parties or any(len(s) == 0 for s in parties):
            raise DimensionMismatch("every party needs at least one setting")
        m = len(parties[0])
        r = parties[0][0].n_outcomes
        for i, settings in enumerate(parties):
            if len(settings) != m:
                raise DimensionMismatch(f"party {i} has {len(settings)} settings, expected {m}")
            dims = {p.dim for p in settings}
            if len(dims) != 1:
                raise DimensionMismatch(f"party {i} mixes local dimensions {sorted(dims)}")
            if any(p.n_outcomes != r for p in settings):
                raise DimensionMismatch(f"party {i} has POVMs with differing outcome counts")
        self.parties = parties

    @property
    def local_dims(self) -> tuple:
        return tuple(s[0].dim for s in self.parties)

    @property
    def n_parties(self) -> int:
        return len(self.parties)

    @property
    def scenario(self) -> Scenario:
        return Scenario(len(self.parties), len(self.parties[0]), self.parties[0][0].n_outcomes)

    def stacked(self, party: int) -> np.ndarray:
        """Elements of one party as an array ``(settings, outcomes, d, d)``."""
        return np.array([p.elements for p in self.parties[party]])

    def element(self, party: int, setting: int, outcome: int) -> np.ndarray:
        return self.parties[party][setting][outcome]


def projective_povm(basis) -> Povm:
    """Rank-one projectors onto the vectors of an orthonormal basis (outcome ``k`` for vector ``k``)."""
    vecs = np.array([np.asarray(v, dtype=complex).ravel() for v in basis])
    overlap = vecs.conj() @ vecs.T
    dev = np.abs(overlap - np.eye(len(vecs))).max()
    if dev > POVM_TOL or vecs.shape[0] != vecs.shape[1]:
        raise NonOrthonormal(f"basis is not orthonormal (deviation {dev:.3e})")
    return Povm([np.outer(v, v.conj()) for v in vecs])


def projective_from_bases(bases) -> list[Povm]:
    """One projective POVM per setting, from per-setting orthonormal bases."""
    return [projective_povm(b) for b in bases]


def povm_from_observable(obs) -> Povm:
    """Two-outcome POVM of a ±1-valued observable: outcome 0 is the +1 eigenspace."""
    a = as_matrix(obs)
    eye = np.eye(a.shape[0])
    if np.abs(a @ a - eye).max() > POVM_TOL:
        raise InvalidPovm("observable does not square to the identity")
    return Povm([(eye + a) / 2, (eye - a) / 2])


def random_povm(dim: int, n_outcomes: int, rng: np.random.Generator) -> Povm:
    """Full-rank random POVM: ``S^{-1/2} A_k S^{-1/2}`` with ``A_k = G_k^† G_k`` Gaussian."""
    g = rng.standard_normal((n_outcomes, dim, dim)) + 1j * rng.standard_normal((n_outcomes, dim, dim))
    pos = g.conj().transpose(0, 2, 1) @ g
    total = pos.sum(axis=0)
    w, v = np.linalg.eigh(total)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    return Povm([inv_sqrt @ p @ inv_sqrt for p in pos])


def random_measurement_model(local_dims: Sequence[int], n_settings: int, n_outcomes: int,
                             rng: np.random.Generator) -> MeasurementModel:
    return MeasurementModel(
        [[random_povm(d, n_outcomes, rng) for _ in range(n_settings)] for d in local_dims]
    )


def trace_rule_tensor(mat: np.ndarray, dims: tuple, stacks: Sequence[np.ndarray]) -> np.ndarray:
    """Raw trace-rule table, axes ``(x_1..x_N, a_1..a_N)``; ``stacks[k]`` is ``(m, r, d_k, d_k)``."""
    n = len(dims)
    letters = iter(string.ascii_letters)
    rows = [next(letters) for _ in range(n)]
    cols = [next(letters) for _ in range(n)]
    xs = [next(letters) for _ in range(n)]
    outs = [next(letters) for _ in range(n)]
    # tr(O ⊗_k M_k) = sum O[i_1..i_N, j_1..j_N] prod_k M_k[j_k, i_k]
    terms = ["".join(rows) + "".join(cols)]
    terms += [xs[k] + outs[k] + cols[k] + rows[k] for k in range(n)]
    spec = ",".join(terms) + "->" + "".join(xs) + "".join(outs)
    return np.einsum(spec, mat.reshape(dims + dims), *stacks, optimize=True)


def evaluate_box(o: HermitianOperator, mm: MeasurementModel) -> CorrelationBox:
    """Apply the trace rule to every outcome/setting combination.

    Entries within ``1e-9`` of ``[0, 1]`` are clamped into it; anything further
    out is kept and shows up as ``valid_probabilities == False`` on the result
    (indefinite operators may legitimately produce such values).
    """
    if not isinstance(o, HermitianOperator):
        o = HermitianOperator(o, mm.local_dims)
    if o.local_dims != mm.local_dims:
        raise DimensionMismatch(f"operator dims {o.local_dims} vs measurement dims {mm.local_dims}")
    if abs(o.trace() - 1.0) > TRACE_TOL:
        raise NotUnitTrace(f"operator trace is {o.trace():.12g}")
    stacks = [mm.stacked(k) for k in range(o.n_parties)]
    p = trace_rule_tensor(o.matrix, o.local_dims, stacks).real
    near_low = (p < 0) & (p >= -NS_TOL)
    near_high = (p > 1) & (p <= 1 + NS_TOL)
    p = np.where(near_low, 0.0, np.where(near_high, 1.0, p))
    return CorrelationBox(mm.scenario, p, strict=False)


class WitnessVerdict(str, enum.Enum):
    CERTIFIED = "certified-nonnegative-on-products"
    VIOLATED = "violated"
    UNKNOWN = "unknown"


def witness_verdict(value: float, converged: bool) -> WitnessVerdict:
    # a negative value comes with a product state, so it is a proof regardless of convergence
    if value < -WITNESS_TOL:
        return WitnessVerdict.VIOLATED
    return WitnessVerdict.CERTIFIED if converged else WitnessVerdict.UNKNOWN


@dataclass
class OperatorClass:
    hermitian_unit_trace: bool
    positive: bool
    min_eigenvalue: float
    product_min: float
    witness_flag: WitnessVerdict

    def as_dict(self) -> dict:
        return {
            "hermitian_unit_trace": self.hermitian_unit_trace,
            "positive": self.positive,
            "min_eigenvalue": self.min_eigenvalue,
            "product_min": self.product_min,
            "witness_flag": self.witness_flag.value,
        }


def classify(o: HermitianOperator, samples: int = 64, seed: int = 0) -> OperatorClass:
    """Place an operator in the hierarchy unit-trace Hermitian / block-positive / positive.

    Block positivity is probed with multi-start alternating minimization over
    product states, so ``CERTIFIED`` is an empirical statement only; a
    ``VIOLATED`` verdict is rigorous.
    """
    from .witness import minimize_over_products

    lam = min_eigenvalue(o)
    res = minimize_over_products(o, restarts=samples, seed=seed)
    return OperatorClass(
        hermitian_unit_trace=abs(o.trace() - 1.0) <= TRACE_TOL,
        positive=lam >= -POVM_TOL,
        min_eigenvalue=lam,
        product_min=res.value,
        witness_flag=witness_verdict(res.value, res.converged),
    )


def maximally_entangled(d: int = 2) -> np.ndarray:
    """``|Φ⁺> = sum_i |ii> / sqrt(d)``."""
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0
    return v / np.sqrt(d)


def bell_projectors():
    """Projectors onto ``|Φ^±> = (|00> ± |11>)/sqrt 2``."""
    plus = np.array([1, 0, 0, 1], dtype=complex)
    minus = np.array([1, 0, 0, -1], dtype=complex)
    return projector(plus), projector(minus)


def pr_operator() -> HermitianOperator:
    """``α⁺Φ⁺ + α⁻Φ⁻`` with ``α± = (1 ± sqrt 2)/2``; unit trace, one negative eigenvalue."""
    plus, minus = bell_projectors()
    a_plus = (1 + np.sqrt(2)) / 2
    a_minus = (1 - np.sqrt(2)) / 2
    return HermitianOperator(a_plus * plus + a_minus * minus, (2, 2))


def pr_measurements() -> MeasurementModel:
    """Alice measures σx, σy; Bob (σx - σy)/√2, (σx + σy)/√2. Outcome 0 is the +1 eigenspace."""
    alice = [PAULI_X, PAULI_Y]
    bob = [(PAULI_X - PAULI_Y) / np.sqrt(2), (PAULI_X + PAULI_Y) / np.sqrt(2)]
    return MeasurementModel([[povm_from_observable(o) for o in alice],
                             [povm_from_observable(o) for o in bob]])
