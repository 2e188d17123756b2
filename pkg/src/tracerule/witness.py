"""Minimization of ``<ψ_1...ψ_N| A |ψ_1...ψ_N>`` over product states.

The optimizer is alternating minimum-eigenvector descent: with all but one
party frozen, the objective is a Rayleigh quotient of a small Hermitian
matrix, which is minimized exactly by its lowest eigenvector. Each update
therefore never increases the objective. Several Haar-random starts are run
and the best stationary point is kept.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NotUnitTrace
from .hilbert import HermitianOperator, random_unit_vector
from .operators import TRACE_TOL, WitnessVerdict, witness_verdict

CYCLE_TOL = 1e-12
MAX_CYCLES = 10_000
DEFAULT_RESTARTS = 64


@dataclass
class ProductState:
    locals: list

    def __post_init__(self):
        vecs = [np.asarray(v, dtype=complex).ravel() for v in self.locals]
        for v in vecs:
            if abs(np.linalg.norm(v) - 1.0) > 1e-12:
                raise ValueError("local vectors of a product state must be unit vectors")
        self.locals = vecs

    @property
    def dims(self) -> tuple:
        return tuple(len(v) for v in self.locals)

    def vector(self) -> np.ndarray:
        out = np.ones(1, dtype=complex)
        for v in self.locals:
            out = np.kron(out, v)
        return out


@dataclass
class MinimizationResult:
    value: float
    argmin: ProductState
    restarts_used: int
    converged: bool
    iterations: int
    history: list = field(default_factory=list, repr=False)


def expectation(a: HermitianOperator, state: ProductState) -> float:
    """``<ψ|A|ψ>`` for a product state."""
    if state.dims != a.local_dims:
        raise DimensionMismatch(f"state dims {state.dims} vs operator dims {a.local_dims}")
    psi = state.vector()
    return float(np.vdot(psi, a.matrix @ psi).real)


def _local_spec(n: int, party: int) -> str:
    letters = string.ascii_letters
    rows, cols = letters[:n], letters[n:2 * n]
    operands = [rows + cols]
    for k in range(n):
        if k != party:
            operands += [rows[k], cols[k]]
    return ",".join(operands) + "->" + rows[party] + cols[party]


def _local_matrix(tensor: np.ndarray, vecs: list, party: int, spec: str) -> np.ndarray:
    args = []
    for k, v in enumerate(vecs):
        if k != party:
            args += [v.conj(), v]
    h = np.einsum(spec, tensor, *args)
    return 0.5 * (h + h.conj().T)


def lowest_eigenvector(h: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest eigenpair with a fixed phase.

    The phase is chosen so that the largest-magnitude component (first one on
    ties) is real and positive, which makes the iteration reproducible.
    """
    w, v = np.linalg.eigh(h)
    vec = v[:, 0]
    mags = np.abs(vec)
    k = int(np.flatnonzero(mags >= mags.max() - 1e-14)[0])
    vec = vec * (abs(vec[k]) / vec[k])
    return float(w[0]), vec / np.linalg.norm(vec)


def descend(a: HermitianOperator, start: ProductState, tol: float = CYCLE_TOL,
            max_cycles: int = MAX_CYCLES, record: bool = False):
    """Run alternating descent from one starting product state.

    Returns ``(value, state, cycles, converged, history)`` where ``history``
    (only filled when ``record`` is set) holds the objective before the first
    update and after every single-party update.
    """
    tensor = a.tensor()
    n = a.n_parties
    specs = [_local_spec(n, k) for k in range(n)]
    vecs = [v.copy() for v in start.locals]
    value = expectation(a, ProductState(vecs))
    history = [value] if record else []
    converged = False
    cycles = 0
    while cycles < max_cycles:
        cycles += 1
        before = value
        for k in range(n):
            value, vecs[k] = lowest_eigenvector(_local_matrix(tensor, vecs, k, specs[k]))
            if record:
                history.append(value)
        if before - value < tol:
            converged = True
            break
    state = ProductState(vecs)
    return expectation(a, state), state, cycles, converged, history


def random_product_state(dims, rng: np.random.Generator) -> ProductState:
    return ProductState([random_unit_vector(d, rng) for d in dims])


def minimize_over_products(a: HermitianOperator, restarts: int = DEFAULT_RESTARTS, seed: int = 0,
                           record: bool = False) -> MinimizationResult:
    """Best value of alternating descent over ``restarts`` random starts.

    Restart ``k`` draws its starting state from ``default_rng([seed, k])``, so
    every restart is reproducible on its own and the result does not depend
    on the order in which restarts are evaluated.
    """
    if not isinstance(a, HermitianOperator):
        raise TypeError("minimize_over_products expects a HermitianOperator")
    if restarts < 1:
        raise ValueError("need at least one restart")
    best = None
    total = 0
    for k in range(restarts):
        rng = np.random.default_rng([int(seed), k])
        start = random_product_state(a.local_dims, rng)
        value, state, cycles, converged, history = descend(a, start, record=record)
        total += cycles
        if best is None or value < best[0]:
            best = (value, state, converged, history)
    value, state, converged, history = best
    return MinimizationResult(value, state, restarts, converged, total, history)


def bloch_vectors(grid_points: int) -> np.ndarray:
    """Qubit states ``cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`` on a θ×φ grid.

    θ runs over ``[0, π]`` including both poles, φ over ``[0, 2π)``.
    """
    theta = np.linspace(0.0, np.pi, grid_points)
    phi = np.linspace(0.0, 2 * np.pi, grid_points, endpoint=False)
    t, p = np.meshgrid(theta, phi, indexing="ij")
    vecs = np.stack([np.cos(t / 2), np.exp(1j * p) * np.sin(t / 2)], axis=-1)
    return vecs.reshape(-1, 2)


def grid_oracle_3qubit(a: HermitianOperator, grid_points: int = 80) -> float:
    """Brute-force product minimum for three qubits.

    Parties 1 and 2 scan a Bloch-sphere grid; for every pair the third
    party's minimum is the exact lowest eigenvalue of the contracted 2x2
    matrix. The result is an upper bound on the true minimum.
    """
    if a.local_dims != (2, 2, 2):
        raise DimensionMismatch(f"grid oracle needs three qubits, got dims {a.local_dims}")
    vecs = bloch_vectors(grid_points)
    t = a.tensor()  # (i, j, k, i', j', l)
    # contract party 1 for every grid vector u: A1[u, j, k, j', l]
    a1 = np.einsum("ui,ijkmnl,um->ujknl", vecs.conj(), t, vecs, optimize=True)
    # second party as a 4-vector of conj(v_j) v_j' per grid point
    vv = np.einsum("vj,vn->jnv", vecs.conj(), vecs).reshape(4, -1)
    # only the (k,l) = (0,0), (1,1), (0,1) blocks are needed
    a1 = a1.transpose(0, 2, 4, 1, 3)  # u, k, l, j, j'
    chunk = max(1, 2_000_000 // vv.shape[1])
    best = np.inf
    for start in range(0, len(vecs), chunk):
        block = a1[start:start + chunk]
        p = block[:, 0, 0].reshape(len(block), 4) @ vv
        q = block[:, 1, 1].reshape(len(block), 4) @ vv
        b = block[:, 0, 1].reshape(len(block), 4) @ vv
        p, q = p.real, q.real
        half_gap = 0.5 * (p - q)
        lam = 0.5 * (p + q) - np.sqrt(half_gap * half_gap + (b.real ** 2 + b.imag ** 2))
        best = min(best, float(lam.min()))
    return best


def certify_witness(w: HermitianOperator, restarts: int = DEFAULT_RESTARTS, seed: int = 0):
    """Heuristic block-positivity test of a unit-trace operator.

    Returns ``(verdict, result)``. ``VIOLATED`` carries the offending product
    state in ``result.argmin`` and is a rigorous disproof.
    """
    if abs(w.trace() - 1.0) > TRACE_TOL:
        raise NotUnitTrace(f"operator trace is {w.trace():.12g}")
    res = minimize_over_products(w, restarts=restarts, seed=seed)
    return witness_verdict(res.value, res.converged), res


__all__ = [
    "ProductState",
    "MinimizationResult",
    "WitnessVerdict",
    "expectation",
    "descend",
    "minimize_over_products",
    "grid_oracle_3qubit",
    "certify_witness",
    "lowest_eigenvector",
]
