"""Measurement-feedback protocols: conditional states, strategy evaluation,
and exhaustive search over strategy trees at desk scale."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channel import induced_probs
from .core import DensityMatrix, Povm
from .errors import DomainError, ResourceError, StructuralError

MAX_TREE_DEPTH = 4
MAX_CANDIDATES = 4


@dataclass(frozen=True)
class AdaptiveStrategy:
    """Depth-n preparation tree over a finite candidate-state set.

    choices maps each outcome history (0-based tuple, length < depth) to a pair
    of candidate indices: the state sent next under H0 and under H1.  The final
    decision is maximum-likelihood unless an explicit accept-H0 grouping over
    full-length histories is given.
    """

    depth: int
    candidates: tuple
    choices: dict
    grouping: frozenset | None = None

    def __post_init__(self):
        if self.depth < 1:
            raise StructuralError("strategy depth must be at least 1")
        cands = tuple(self.candidates)
        if not cands:
            raise StructuralError("strategy needs at least one candidate state")
        nc = len(cands)
        for hist, (i, j) in self.choices.items():
            if len(hist) >= self.depth:
                raise StructuralError(f"choice at history {hist} is beyond the tree depth")
            if not (0 <= i < nc and 0 <= j < nc):
                raise StructuralError(f"candidate index out of range at history {hist}")
        object.__setattr__(self, "candidates", cands)
        object.__setattr__(self, "choices", dict(self.choices))


@dataclass(frozen=True)
class JointState:
    """Density matrix on the n-fold product space."""

    mat: np.ndarray
    local_dim: int
    n: int

    def __post_init__(self):
        dm = DensityMatrix(self.mat)  # validates hermiticity/PSD/trace
        if dm.dim != self.local_dim**self.n:
            raise StructuralError(
                f"joint dimension {dm.dim} is not {self.local_dim}^{self.n}"
            )
        object.__setattr__(self, "mat", dm.mat)


def conditional_state(joint: JointState, p: Povm, history):
    """Alice's step-s preparation given the outcomes so far.

    Returns (state, weight) where weight is the probability of the history and
    state is the normalized conditional reduced state on slot s = len(history)+1.
    Zero-weight histories return (None, 0.0).
    """
    history = tuple(int(k) for k in history)
    d, n = joint.local_dim, joint.n
    if p.dim != d:
        raise StructuralError("POVM dimension does not match the joint state")
    s = len(history)
    if s >= n:
        raise StructuralError("history is already complete")
    op = np.array([1.0 + 0.0j])
    for k in history:
        if not 0 <= k < p.n_outcomes:
            raise StructuralError(f"outcome {k} out of range")
        op = np.kron(op, p.elements[k])
    op = np.kron(op, np.eye(d ** (n - s), dtype=complex))
    t = op @ joint.mat
    # partial trace onto slot s+1 (0-based index s)
    t = t.reshape((d,) * n + (d,) * n)
    keep = s
    row_labels = [i if i != keep else 2 * n for i in range(n)]
    col_labels = [i if i != keep else 2 * n + 1 for i in range(n)]
    cond = np.einsum(t, row_labels + col_labels, [2 * n, 2 * n + 1])
    weight = float(np.trace(cond).real)
    if weight <= 1e-15:
        return None, 0.0
    cond = cond / weight
    cond = (cond + cond.conj().T) / 2
    return DensityMatrix(cond), weight


def _history_weights(p: Povm, strat: AdaptiveStrategy):
    """Forward recursion: unnormalized history probabilities under H0 and H1."""
    m = p.n_outcomes
    singles = [induced_probs(p, c.mat) for c in strat.candidates]
    layer = {(): (1.0, 1.0)}
    for _ in range(strat.depth):
        nxt = {}
        for hist, (w0, w1) in layer.items():
            if w0 == 0.0 and w1 == 0.0:
                for k in range(m):
                    nxt[hist + (k,)] = (0.0, 0.0)
                continue
            if hist not in strat.choices:
                raise StructuralError(f"strategy tree has no choice at history {hist}")
            i, j = strat.choices[hist]
            for k in range(m):
                nxt[hist + (k,)] = (w0 * singles[i][k], w1 * singles[j][k])
        layer = nxt
    return layer


def evaluate_strategy(p: Povm, strat: AdaptiveStrategy) -> float:
    """Average error probability of the protocol under equal priors."""
    leaves = _history_weights(p, strat)
    if strat.grouping is not None:
        alpha = sum(w0 for h, (w0, w1) in leaves.items() if h not in strat.grouping)
        beta = sum(w1 for h, (w0, w1) in leaves.items() if h in strat.grouping)
        return 0.5 * (alpha + beta)
    return 0.5 * sum(min(w0, w1) for w0, w1 in leaves.values())


def optimal_adaptive(p: Povm, candidates, n: int):
    """Exact minimum error over all depth-n strategy trees with ML decision.

    Exhaustive over per-history candidate-pair choices; refuses instances
    beyond m = 2, n <= 4, |candidates| <= 4 rather than approximating.
    """
    cands = tuple(candidates)
    if p.n_outcomes != 2 or n > MAX_TREE_DEPTH or len(cands) > MAX_CANDIDATES:
        raise ResourceError(
            "exhaustive strategy search is limited to 2-outcome POVMs, depth <= 4 "
            "and at most 4 candidate states"
        )
    if n < 1:
        raise DomainError("depth must be positive")
    if not cands:
        raise DomainError("need at least one candidate state")
    m = p.n_outcomes
    singles = [induced_probs(p, c.mat) for c in cands]
    pairs = list(itertools.product(range(len(cands)), repeat=2))

    def search(depth: int, w0: float, w1: float, choices: dict, hist: tuple) -> float:
        if depth == n:
            return min(w0, w1)
        if w0 == 0.0 and w1 == 0.0:
            # unreachable branch: canonical first-pair choice throughout
            choices[hist] = (0, 0)
            for k in range(m):
                search(depth + 1, 0.0, 0.0, choices, hist + (k,))
            return 0.0
        best = math.inf
        best_sub = None
        best_pair = None
        for (i, j) in pairs:
            sub: dict = {}
            total = 0.0
            for k in range(m):
                total += search(depth + 1, w0 * singles[i][k], w1 * singles[j][k], sub, hist + (k,))
            if total < best:
                best = total
                best_sub = sub
                best_pair = (i, j)
        choices[hist] = best_pair
        choices.update(best_sub)
        return best

    choices: dict = {}
    p_err = 0.5 * search(0, 1.0, 1.0, choices, ())
    return p_err, AdaptiveStrategy(depth=n, candidates=cands, choices=choices)
