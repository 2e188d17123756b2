"""Correlation boxes ``P(a_1..a_N | x_1..x_N)`` and the tripartite Bell functional.

Probabilities are stored as a real tensor with axes
``(x_1, ..., x_N, a_1, ..., a_N)``: settings first, then outcomes, all
indices 0-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidBox, SignallingInput

NS_TOL = 1e-9
NORM_TOL = 1e-9
RANGE_TOL = 1e-10
MIN_RANDOM_ENTRY = 1e-6


@dataclass(frozen=True)
class Scenario:
    n_parties: int
    n_settings: int
    n_outcomes: int

    def __post_init__(self):
        if min(self.n_parties, self.n_settings, self.n_outcomes) < 1:
            raise ValueError(f"all scenario counts must be >= 1, got {self}")

    @property
    def shape(self) -> tuple:
        n = self.n_parties
        return (self.n_settings,) * n + (self.n_outcomes,) * n

    def __iter__(self):
        return iter((self.n_parties, self.n_settings, self.n_outcomes))


class CorrelationBox:
    """A table of conditional probabilities for one scenario.

    With ``strict=True`` (default) entries must lie in ``[-1e-10, 1 + 1e-10]``
    (and are clamped into ``[0, 1]``) and every setting tuple must be
    normalized within ``1e-9``. Trace-rule outputs of indefinite operators are
    built with ``strict=False``; they keep out-of-range values and report
    them through :attr:`valid_probabilities`.
    """

    def __init__(self, scenario: Scenario, probs, strict: bool = True):
        if not isinstance(scenario, Scenario):
            scenario = Scenario(*scenario)
        p = np.array(probs, dtype=float)
        if p.size != int(np.prod(scenario.shape)):
            raise InvalidBox(f"{p.size} entries do not fit scenario {tuple(scenario)}")
        p = p.reshape(scenario.shape)
        if not np.all(np.isfinite(p)):
            raise InvalidBox("probabilities must be finite")
        if strict:
            lo, hi = p.min(), p.max()
            if lo < -RANGE_TOL or hi > 1 + RANGE_TOL:
                raise InvalidBox(f"entries outside [0, 1]: min {lo:.3e}, max {hi:.3e}")
            p = np.clip(p, 0.0, 1.0)
        n = scenario.n_parties
        norms = p.sum(axis=tuple(range(n, 2 * n)))
        err = float(np.abs(norms - 1.0).max())
        if err > NORM_TOL:
            raise InvalidBox(f"normalization violated by {err:.3e}")
        p.setflags(write=False)
        self.scenario = scenario
        self.probs = p

    @property
    def n_parties(self) -> int:
        return self.scenario.n_parties

    @property
    def valid_probabilities(self) -> bool:
        return bool(self.probs.min() >= -NS_TOL and self.probs.max() <= 1 + NS_TOL)

    def __call__(self, outcomes: Sequence[int], settings: Sequence[int]) -> float:
        """``P(outcomes | settings)``."""
        return float(self.probs[tuple(settings) + tuple(outcomes)])

    def flat(self) -> np.ndarray:
        return self.probs.ravel()

    def max_abs_diff(self, other: "CorrelationBox") -> float:
        if self.scenario != other.scenario:
            raise InvalidBox("boxes belong to different scenarios")
        return float(np.abs(self.probs - other.probs).max())

    def __repr__(self):
        return f"CorrelationBox{tuple(self.scenario)}"


def _outcome_axis(box: CorrelationBox, party: int) -> int:
    return box.n_parties + party


def is_nonsignalling(box: CorrelationBox, tol: float = NS_TOL) -> tuple[bool, float]:
    """Check single-party no-signalling for every party.

    For party ``i`` the outcome ``a_i`` is summed out and the remaining table
    must not depend on ``x_i``. These conditions for all parties imply the
    marginal condition for every bipartition of the parties.
    """
    n = box.n_parties
    worst = 0.0
    for i in range(n):
        reduced = box.probs.sum(axis=_outcome_axis(box, i))
        spread = np.ptp(reduced, axis=i)
        worst = max(worst, float(spread.max()))
    return worst < tol, worst


def marginal(box: CorrelationBox, parties: Sequence[int]) -> CorrelationBox:
    """Marginal box of the listed parties (0-based, kept in ascending order).

    The complement outcomes are summed at complement setting all-zeros and
    cross-checked against all-last settings.

    Raises
    ------
    SignallingInput
        If the two evaluations differ by more than ``1e-9``.
    """
    n = box.n_parties
    keep = sorted(set(int(p) for p in parties))
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"invalid party subset {parties} for {n} parties")
    drop = [k for k in range(n) if k not in keep]
    if not drop:
        return box
    m = box.scenario.n_settings
    summed = box.probs.sum(axis=tuple(n + k for k in drop))
    # summed axes: x_1..x_N, then the kept outcomes
    first = [slice(None)] * summed.ndim
    last = [slice(None)] * summed.ndim
    for k in drop:
        first[k] = 0
        last[k] = m - 1
    p0 = summed[tuple(first)]
    p1 = summed[tuple(last)]
    dev = float(np.abs(p0 - p1).max())
    if dev > NS_TOL:
        raise SignallingInput(f"marginal on parties {keep} depends on remote settings ({dev:.3e})")
    sub = Scenario(len(keep), m, box.scenario.n_outcomes)
    return CorrelationBox(sub, p0, strict=box.valid_probabilities)


def pr_box() -> CorrelationBox:
    """Popescu-Rohrlich box: ``P(a,b|x,y) = 1/2`` iff ``a XOR b = x AND y``."""
    p = np.zeros((2, 2, 2, 2))
    for x, y, a, b in itertools.product(range(2), repeat=4):
        if (a ^ b) == (x & y):
            p[x, y, a, b] = 0.5
    return CorrelationBox(Scenario(2, 2, 2), p)


def uniform_box(scenario: Scenario) -> CorrelationBox:
    scenario = scenario if isinstance(scenario, Scenario) else Scenario(*scenario)
    r, n = scenario.n_outcomes, scenario.n_parties
    return CorrelationBox(scenario, np.full(scenario.shape, float(r) ** -n))


def deterministic_box(assignments: Sequence[Sequence[int]], n_outcomes: int) -> CorrelationBox:
    """Product of deterministic local response functions.

    ``assignments[i][x]`` is the outcome party ``i`` produces for setting ``x``.
    """
    table = np.asarray(assignments, dtype=int)
    if table.ndim != 2:
        raise InvalidBox("assignments must be a (parties x settings) table")
    n, m = table.shape
    if table.min() < 0 or table.max() >= n_outcomes:
        raise InvalidBox(f"outcomes must lie in 0..{n_outcomes - 1}")
    scenario = Scenario(n, m, n_outcomes)
    p = np.zeros(scenario.shape)
    for xs in itertools.product(range(m), repeat=n):
        outs = tuple(table[i, x] for i, x in enumerate(xs))
        p[xs + outs] = 1.0
    return CorrelationBox(scenario, p)


def mixture(boxes: Sequence[CorrelationBox], weights: Sequence[float]) -> CorrelationBox:
    """Convex combination of boxes of one scenario."""
    w = np.asarray(weights, dtype=float)
    if len(boxes) != len(w) or len(w) == 0:
        raise ValueError("need one weight per box")
    if w.min() < 0 or abs(w.sum() - 1) > 1e-12:
        raise ValueError("weights must form a probability vector")
    scenario = boxes[0].scenario
    if any(b.scenario != scenario for b in boxes):
        raise InvalidBox("cannot mix boxes of different scenarios")
    p = sum(wi * b.probs for wi, b in zip(w, boxes))
    return CorrelationBox(scenario, p)


# Terms p(abc|xyz) of the tripartite inequality, as (settings, outcomes).
BELL_TERMS = (
    ((0, 0, 0), (0, 0, 0)),
    ((0, 1, 1), (1, 1, 0)),
    ((1, 0, 1), (0, 1, 1)),
    ((1, 1, 0), (1, 0, 1)),
)


class BellVerdict(NamedTuple):
    beta: float
    classical_max: float
    violates_classical: bool


def bell_beta(box: CorrelationBox) -> float:
    """``p(000|000) + p(110|011) + p(011|101) + p(101|110)``."""
    if tuple(box.scenario) != (3, 2, 2):
        raise InvalidBox(f"the Bell functional needs scenario (3, 2, 2), got {tuple(box.scenario)}")
    return float(sum(box.probs[xs + outs] for xs, outs in BELL_TERMS))


def classical_beta_values() -> dict:
    """Bell value of each of the 64 tripartite deterministic strategies.

    Keys are ``((a_0, a_1), (b_0, b_1), (c_0, c_1))`` response tables. Values are
    exact integers: a deterministic box is 0/1 valued, so the functional just
    counts the satisfied terms.
    """
    local = list(itertools.product(range(2), repeat=2))
    values = {}
    for strategy in itertools.product(local, repeat=3):
        hits = sum(
            all(strategy[i][xs[i]] == outs[i] for i in range(3)) for xs, outs in BELL_TERMS
        )
        values[strategy] = hits
    return values


def classical_max_beta() -> float:
    return float(max(classical_beta_values().values()))


def bell_verdict(box: CorrelationBox) -> BellVerdict:
    beta = bell_beta(box)
    cmax = classical_max_beta()
    return BellVerdict(beta, cmax, beta > cmax + 1e-9)


@lru_cache(maxsize=None)
def _ns_projector(scenario: Scenario):
    """Pseudo-inverse data for the normalization + no-signalling equalities."""
    n, m, r = scenario
    shape = scenario.shape
    size = int(np.prod(shape))
    index = np.arange(size).reshape(shape)
    rows, rhs = [], []
    for xs in itertools.product(range(m), repeat=n):
        row = np.zeros(size)
        row[index[xs].ravel()] = 1.0
        rows.append(row)
        rhs.append(1.0)
    for i in range(n):
        # sum over a_i at x_i equals the same sum at x_i = 0
        moved = np.moveaxis(index, [i, n + i], [0, 1])
        rest = moved.shape[2:]
        for x in range(1, m):
            for pos in itertools.product(*(range(s) for s in rest)):
                row = np.zeros(size)
                row[moved[(x, slice(None)) + pos]] += 1.0
                row[moved[(0, slice(None)) + pos]] -= 1.0
                rows.append(row)
                rhs.append(0.0)
    a = np.array(rows)
    b = np.array(rhs)
    return a, b, np.linalg.pinv(a)


def project_nonsignalling(scenario: Scenario, values) -> np.ndarray:
    """Orthogonal projection of a raw tensor onto the normalized NS affine space."""
    a, b, a_pinv = _ns_projector(scenario)
    v = np.asarray(values, dtype=float).ravel()
    for _ in range(2):
        v = v - a_pinv @ (a @ v - b)
    return v.reshape(scenario.shape)


def random_ns_box(scenario: Scenario, seed: int, mixing: float | None = None) -> CorrelationBox:
    """Seeded random nonsignalling box with full support.

    A uniform random tensor is projected onto the normalization and
    no-signalling equalities and then mixed toward the uniform box. With
    ``mixing=None`` the largest weight on the projected point that keeps all
    entries at least ``1e-6`` is used; an explicit ``mixing`` weight overrides it.
    """
    scenario = scenario if isinstance(scenario, Scenario) else Scenario(*scenario)
    rng = np.random.default_rng(seed)
    raw = rng.uniform(size=scenario.shape)
    proj = project_nonsignalling(scenario, raw)
    u = float(scenario.n_outcomes) ** -scenario.n_parties
    if mixing is None:
        below = proj < u
        if np.any(below):
            lam = float(np.min((u - MIN_RANDOM_ENTRY) / (u - proj[below])))
            mixing = min(1.0, lam)
        else:
            mixing = 1.0
    p = mixing * proj + (1.0 - mixing) * u
    return CorrelationBox(scenario, p)
