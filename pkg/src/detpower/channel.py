"""Classical distributions induced by a measurement and their error exponents.

The scalar functionals (phi, Chernoff, relative entropy, Hoeffding) act on a
pair of outcome distributions; the quantum side enters only through
induced_distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DensityMatrix, Povm
from .errors import DomainError, StructuralError

NEG_CLAMP = 1e-12
SUM_TOL = 1e-9

_INVPHI = (math.sqrt(5) - 1) / 2  # 1/golden ratio


@dataclass(frozen=True)
class ClassicalDistribution:
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).ravel()
        if not np.all(np.isfinite(p)):
            raise DomainError("distribution has non-finite entries")
        if p.min(initial=0.0) < -NEG_CLAMP:
            raise DomainError(f"negative probability {p.min():.3e}")
        p = np.clip(p, 0.0, None)
        if abs(p.sum() - 1.0) > SUM_TOL:
            raise DomainError(f"probabilities sum to {p.sum()}, not 1")
        object.__setattr__(self, "probs", p)
        self.probs.setflags(write=False)

    def __len__(self):
        return len(self.probs)


@dataclass(frozen=True)
class ExponentValue:
    """A nonnegative error exponent (nats), possibly infinite, with its optimal s."""

    value: float
    optimizer_s: float | None = None

    @property
    def infinite(self) -> bool:
        return math.isinf(self.value)


def _probs(dist) -> np.ndarray:
    if isinstance(dist, ClassicalDistribution):
        return dist.probs
    return ClassicalDistribution(np.asarray(dist, dtype=float)).probs


def induced_probs(p: Povm, rho_mat: np.ndarray) -> np.ndarray:
    """tr(E_k rho) for every outcome, clamped at 0.  Raw-array fast path."""
    out = np.einsum("kij,ji->k", p.stacked(), rho_mat).real
    return np.clip(out, 0.0, None)


def induced_distribution(p: Povm, rho: DensityMatrix) -> ClassicalDistribution:
    if p.dim != rho.dim:
        raise StructuralError(f"POVM dimension {p.dim} != state dimension {rho.dim}")
    return ClassicalDistribution(induced_probs(p, rho.mat))


def phi(s: float, p_dist, q_dist) -> float:
    """log sum_k P_k^s Q_k^(1-s), the log of the Chernoff overlap.

    Terms with P_k = 0 or Q_k = 0 drop out (endpoint convention x^0 = 1 for
    x > 0, 0^s = 0 for s > 0).  Returns -inf when the supports are disjoint.
    """
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s must lie in [0, 1], got {s}")
    p = _probs(p_dist)
    q = _probs(q_dist)
    if len(p) != len(q):
        raise StructuralError("distributions have different lengths")
    mask = (p > 0) & (q > 0)
    if not np.any(mask):
        return -math.inf
    terms = np.exp(s * np.log(p[mask]) + (1.0 - s) * np.log(q[mask]))
    return min(float(np.log(terms.sum())), 0.0)


def golden_section_min(f, a: float, b: float, xtol: float = 1e-12):
    """Minimize a unimodal scalar function on [a, b]; returns (x, f(x))."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while abs(d - c) > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def _disjoint_supports(p: np.ndarray, q: np.ndarray) -> bool:
    return not np.any((p > 0) & (q > 0))


def _phi_evaluator(p: np.ndarray, q: np.ndarray):
    """Fast phi(s) closure with logs precomputed on the common support."""
    mask = (p > 0) & (q > 0)
    lp = np.log(p[mask])
    lq = np.log(q[mask])

    def f(s: float) -> float:
        return min(float(np.log(np.exp(s * lp + (1.0 - s) * lq).sum())), 0.0)

    return f


def chernoff_exponent(p_dist, q_dist) -> ExponentValue:
    """-min_s phi(s), the best symmetric error-probability decay rate."""
    p, q = _probs(p_dist), _probs(q_dist)
    if len(p) != len(q):
        raise StructuralError("distributions have different lengths")
    if _disjoint_supports(p, q):
        return ExponentValue(math.inf, None)
    obj = _phi_evaluator(p, q)
    # phi is convex in s, so golden section on [0, 1] is reliable
    s_star, f_star = golden_section_min(obj, 0.0, 1.0, xtol=1e-12)
    f_star = min(f_star, obj(0.0), obj(1.0))
    return ExponentValue(float(max(-f_star, 0.0) + 0.0), float(np.clip(s_star, 0.0, 1.0)))


def relative_entropy(p_dist, q_dist) -> float:
    """D(P||Q) in nats; +inf when supp(P) is not contained in supp(Q)."""
    p, q = _probs(p_dist), _probs(q_dist)
    if len(p) != len(q):
        raise StructuralError("distributions have different lengths")
    sup = p > 0
    if np.any(sup & (q == 0)):
        return math.inf
    return max(float(np.sum(p[sup] * (np.log(p[sup]) - np.log(q[sup])))), 0.0)


def hoeffding_exponent(p_dist, q_dist, r: float) -> ExponentValue:
    """sup_s [-s r - phi(s)] / (1 - s), the type-II exponent under an
    exponential type-I constraint at rate r."""
    if r < 0:
        raise DomainError("constraint rate r must be nonnegative")
    p, q = _probs(p_dist), _probs(q_dist)
    if len(p) != len(q):
        raise StructuralError("distributions have different lengths")
    if _disjoint_supports(p, q):
        return ExponentValue(math.inf, None)
    if r == 0.0:
        # the supremum is the s -> 1 limit, phi'(1) = D(P||Q)
        return ExponentValue(relative_entropy(p, q), 1.0)

    phi_f = _phi_evaluator(p, q)

    def neg_obj(s):
        return -(-s * r - phi_f(s)) / (1.0 - s)

    grid = np.linspace(0.0, 1.0 - 1e-9, 201)
    vals = [neg_obj(s) for s in grid]
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, 200)]
    s_star, f_star = golden_section_min(neg_obj, lo, hi, xtol=1e-12)
    best = max(-min(f_star, min(vals)), 0.0) + 0.0  # +0.0 normalizes -0.0
    return ExponentValue(float(best), float(np.clip(s_star, 0.0, 1.0)))
