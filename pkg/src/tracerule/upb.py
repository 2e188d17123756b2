"""Three-qubit unextendible product basis, its witness and the Bell gap.

The UPB is ``|000>, |1 e⊥ e>, |e 1 e⊥>, |e⊥ e 1>`` for a qubit basis
``{|e>, |e⊥>}`` different from the computational one. With ``Π`` the
projector onto its span and ``ε`` the minimum of ``<αβγ|Π|αβγ>`` over
product states, ``W = (Π - ε I) / (4 - 8ε)`` is a unit-trace witness. Measured
in the UPB's own local bases it scores ``(1 - ε)/(1 - 2ε) > 1`` on the
tripartite Bell functional, whose classical bound is 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boxes import CorrelationBox, bell_beta, classical_max_beta, is_nonsignalling
from .errors import DegenerateBasis, RangeViolation
from .hilbert import HermitianOperator, hs_inner, kron
from .operators import MeasurementModel, evaluate_box, projective_povm
from .witness import DEFAULT_RESTARTS, grid_oracle_3qubit, minimize_over_products

DEFAULT_E = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)
DEFAULT_THETA = -np.pi / 4
EDGE_TOL = 1e-6

KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)


def e_from_theta(theta: float) -> np.ndarray:
    """``cos θ |0> + sin θ |1>``."""
    return np.array([np.cos(theta), np.sin(theta)], dtype=complex)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.flatnonzero(np.abs(v) > 1e-12)[0])
    return v * (abs(v[k]) / v[k])


def check_e(e_vector) -> np.ndarray:
    e = np.asarray(e_vector, dtype=complex).ravel()
    if e.shape != (2,):
        raise DegenerateBasis("|e> must be a qubit vector")
    e = e / np.linalg.norm(e)
    for amp in np.abs(e):
        if not EDGE_TOL < amp < 1 - EDGE_TOL:
            raise DegenerateBasis(f"|e> = {e} is (nearly) a computational basis vector")
    return e


def orthogonal_complement(e_vector) -> np.ndarray:
    """Unit vector orthogonal to ``|e>``, first nonzero component real positive."""
    e = check_e(e_vector)
    return _fix_phase(np.array([-np.conj(e[1]), np.conj(e[0])]))


def build_upb(e_vector=DEFAULT_E):
    """Return ``(states, Π, ρ)``: the four product vectors (as ``(8,)`` kets),
    the rank-4 projector on their span and ``ρ = (I - Π)/4``."""
    e = check_e(e_vector)
    ep = orthogonal_complement(e)
    states = [
        kron(KET0, KET0, KET0),
        kron(KET1, ep, e),
        kron(e, KET1, ep),
        kron(ep, e, KET1),
    ]
    pi = sum(np.outer(s, s.conj()) for s in states)
    pi_op = HermitianOperator(pi, (2, 2, 2))
    rho = HermitianOperator((np.eye(8) - pi) / 4, (2, 2, 2))
    return states, pi_op, rho


def compute_epsilon(pi_upb: HermitianOperator, restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> float:
    """Product-state minimum of ``Π``; must fall strictly inside ``(0, 1/2)``."""
    eps = minimize_over_products(pi_upb, restarts=restarts, seed=seed).value
    if not 0.0 < eps < 0.5:
        raise RangeViolation(f"epsilon = {eps} outside (0, 1/2)")
    return eps


def build_witness(pi_upb: HermitianOperator, epsilon: float) -> HermitianOperator:
    """``W = (Π - ε I) / (4 - 8ε)``."""
    if not 0.0 < epsilon < 0.5:
        raise RangeViolation(f"epsilon = {epsilon} outside (0, 1/2)")
    dim = pi_upb.dim
    return HermitianOperator((pi_upb.matrix - epsilon * np.eye(dim)) / (4 - 8 * epsilon),
                             pi_upb.local_dims)


def upb_measurements(e_vector=DEFAULT_E) -> MeasurementModel:
    """Setting 0: computational basis. Setting 1: ``{|e>, |e⊥>}`` (outcome 0 is ``|e>``).

    With this labelling the Bell terms p(000|000), p(110|011), p(011|101),
    p(101|110) are the projectors onto the four UPB states, in order.
    """
    e = check_e(e_vector)
    ep = orthogonal_complement(e)
    local = [projective_povm([KET0, KET1]), projective_povm([e, ep])]
    return MeasurementModel([local, local, local])


def beta_formula(epsilon: float) -> float:
    if not 0.0 < epsilon < 0.5:
        raise RangeViolation(f"epsilon = {epsilon} outside (0, 1/2)")
    return (1 - epsilon) / (1 - 2 * epsilon)


@dataclass
class UpbModel:
    e_vector: np.ndarray
    upb_states: list
    pi_upb: HermitianOperator
    rho_upb: HermitianOperator
    epsilon: float
    w_prime: HermitianOperator
    beta: float

    @classmethod
    def build(cls, e_vector=DEFAULT_E, restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> "UpbModel":
        e = check_e(e_vector)
        states, pi, rho = build_upb(e)
        eps = compute_epsilon(pi, restarts=restarts, seed=seed)
        w = build_witness(pi, eps)
        return cls(e, states, pi, rho, eps, w, beta_formula(eps))

    @classmethod
    def from_theta(cls, theta: float, **kwargs) -> "UpbModel":
        return cls.build(e_from_theta(theta), **kwargs)

    def measurements(self) -> MeasurementModel:
        return upb_measurements(self.e_vector)

    def witness_trace_on_rho(self) -> float:
        return hs_inner(self.w_prime, self.rho_upb)


def gleason_box(model: UpbModel) -> CorrelationBox:
    """Correlations of ``W`` under the UPB-aligned projective measurements."""
    return evaluate_box(model.w_prime, model.measurements())


def upb_report(theta: float | None = None, restarts: int = DEFAULT_RESTARTS, seed: int = 0,
               grid: int | None = None) -> dict:
    """Numbers and checks for the gap construction at one basis angle.

    ``theta=None`` uses ``|e> = (|0> - |1>)/sqrt 2``.
    """
    e = DEFAULT_E if theta is None else e_from_theta(theta)
    model = UpbModel.build(e, restarts=restarts, seed=seed)
    box = gleason_box(model)
    beta_direct = bell_beta(box)
    ns_ok, ns_violation = is_nonsignalling(box)
    eps = model.epsilon
    trace_rho = model.witness_trace_on_rho()
    expected_trace = -eps / (4 * (1 - 2 * eps))
    cmax = classical_max_beta()
    results = {
        "theta": DEFAULT_THETA if theta is None else float(theta),
        "epsilon": eps,
        "beta_formula": model.beta,
        "beta_direct": beta_direct,
        "witness_trace_on_rho": trace_rho,
        "classical_max": cmax,
        "gap": beta_direct - cmax,
        "box_min_entry": float(box.probs.min()),
        "box_max_entry": float(box.probs.max()),
        "ns_max_violation": ns_violation,
    }
    checks = [
        ("epsilon_in_open_interval", 0 < eps < 0.5, eps, "(0, 0.5)"),
        ("beta_formula_matches_direct", abs(model.beta - beta_direct) < 1e-9,
         abs(model.beta - beta_direct), 1e-9),
        ("beta_exceeds_classical", beta_direct - cmax > 1e-3, beta_direct - cmax, 1e-3),
        ("witness_detects_rho", abs(trace_rho - expected_trace) < 1e-10,
         abs(trace_rho - expected_trace), 1e-10),
        ("box_entries_in_unit_interval", box.valid_probabilities,
         float(min(box.probs.min(), 1 - box.probs.max())), 1e-9),
        ("box_nonsignalling", ns_ok, ns_violation, 1e-9),
    ]
    if grid:
        eps_grid = grid_oracle_3qubit(model.pi_upb, grid)
        results["epsilon_grid"] = eps_grid
        checks.append(("epsilon_matches_grid", abs(eps - eps_grid) < 1e-3, abs(eps - eps_grid), 1e-3))
    return {"results": results, "checks": checks}
