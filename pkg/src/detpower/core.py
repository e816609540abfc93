"""States, POVMs and the small dense Hermitian eigensolver.

Everything here is plain double-precision numpy.  Objects are validated on
construction and treated as immutable afterwards; all functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResourceError, StructuralError

TOL_HERM = 1e-9
TOL_TRACE = 1e-9
TOL_PSD = 1e-10
TOL_COMPLETE = 1e-9

# Pauli matrices, used by the qubit helpers.
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _as_square_complex(mat, what: str) -> np.ndarray:
    m = np.asarray(mat, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StructuralError(f"{what} must be a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise DomainError(f"{what} has non-finite entries")
    return m


def herm_deviation(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix."""

    mat: np.ndarray

    def __post_init__(self):
        m = _as_square_complex(self.mat, "density matrix")
        if herm_deviation(m) > TOL_HERM:
            raise DomainError("density matrix is not Hermitian within tolerance")
        if abs(np.trace(m).real - 1.0) > TOL_TRACE or abs(np.trace(m).imag) > TOL_TRACE:
            raise DomainError("density matrix trace differs from 1")
        evals, _ = eig_hermitian((m + m.conj().T) / 2)
        if evals.min() < -TOL_PSD:
            raise DomainError(f"density matrix has negative eigenvalue {evals.min():.3e}")
        object.__setattr__(self, "mat", m)
        self.mat.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def pure(cls, vec) -> "DensityMatrix":
        v = np.asarray(vec, dtype=complex).ravel()
        n = np.linalg.norm(v)
        if n == 0:
            raise DomainError("cannot build a pure state from the zero vector")
        v = v / n
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.norm > 1 + 1e-12:
            raise DomainError(f"Bloch vector norm {self.norm} exceeds 1")

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.x**2 + self.y**2 + self.z**2))


def bloch_to_density(b: BlochVector) -> DensityMatrix:
    """Qubit state (I + b.sigma)/2; pure iff |b| = 1."""
    m = 0.5 * (np.eye(2, dtype=complex) + b.x * PAULI_X + b.y * PAULI_Y + b.z * PAULI_Z)
    # round-off can push the top eigenvalue of a pure state past 1 by ~1e-17
    return DensityMatrix((m + m.conj().T) / 2)


@dataclass(frozen=True)
class Povm:
    """Ordered list of outcome operators on a common d-dimensional space.

    The constructor enforces only structural consistency; physical validity
    (Hermiticity, positivity, completeness) is checked by validate_povm.
    """

    elements: tuple

    def __post_init__(self):
        elems = tuple(_as_square_complex(e, f"POVM element {k}") for k, e in enumerate(self.elements))
        if not elems:
            raise StructuralError("POVM needs at least one element")
        d = elems[0].shape[0]
        for k, e in enumerate(elems):
            if e.shape[0] != d:
                raise StructuralError(f"POVM element {k} has dimension {e.shape[0]}, expected {d}")
            e.setflags(write=False)
        object.__setattr__(self, "elements", elems)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return len(self.elements)

    def stacked(self) -> np.ndarray:
        """All elements as one (m, d, d) array, built once and cached."""
        cached = self.__dict__.get("_stacked")
        if cached is None:
            cached = np.stack(self.elements)
            cached.setflags(write=False)
            object.__setattr__(self, "_stacked", cached)
        return cached

    def grouped_element(self, indices) -> np.ndarray:
        """Sum of the elements selected by an outcome grouping."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for k in indices:
            out = out + self.elements[k]
        return out


@dataclass(frozen=True)
class GroupingMask:
    """Subset of outcome (or outcome-sequence) indices accepted as hypothesis H0."""

    indices: frozenset
    size: int

    def __post_init__(self):
        if any(k < 0 or k >= self.size for k in self.indices):
            raise StructuralError("grouping index out of range")

    @property
    def complement(self) -> frozenset:
        return frozenset(range(self.size)) - self.indices

    @property
    def is_trivial(self) -> bool:
        return len(self.indices) in (0, self.size)


@dataclass
class ValidationReport:
    valid: bool
    dim: int
    n_outcomes: int
    herm_deviations: list = field(default_factory=list)
    min_eigenvalues: list = field(default_factory=list)
    completeness_residual: float = 0.0
    problems: list = field(default_factory=list)
    warnings: list = field(default_factory=list)


def validate_povm(p: Povm) -> ValidationReport:
    """Check Hermiticity, positivity and completeness of every element."""
    rep = ValidationReport(valid=True, dim=p.dim, n_outcomes=p.n_outcomes)
    if p.n_outcomes < 2:
        rep.problems.append("POVM must have at least 2 outcomes")
    total = np.zeros((p.dim, p.dim), dtype=complex)
    for k, e in enumerate(p.elements):
        dev = herm_deviation(e)
        rep.herm_deviations.append(dev)
        if dev > TOL_HERM:
            rep.problems.append(f"element {k} deviates from Hermitian by {dev:.3e}")
        lam_min = float(eig_hermitian((e + e.conj().T) / 2)[0].min())
        rep.min_eigenvalues.append(lam_min)
        if lam_min < -TOL_PSD:
            rep.problems.append(f"element {k} has negative eigenvalue {lam_min:.3e}")
        if np.max(np.abs(e)) == 0.0:
            rep.warnings.append(f"element {k} is identically zero")
        total += e
    rep.completeness_residual = float(np.max(np.abs(total - np.eye(p.dim))))
    if rep.completeness_residual > TOL_COMPLETE:
        rep.problems.append(f"completeness residual {rep.completeness_residual:.3e}")
    rep.valid = not rep.problems
    return rep


def eig_hermitian(mat, tol: float = 1e-13, max_sweeps: int = 60):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors) with eigenvalues sorted descending and
    eigenvectors as orthonormal columns; degenerate eigenvalues keep the
    diagonal order in which they converged (stable sort).
    """
    a = _as_square_complex(mat, "matrix")
    scale = max(1.0, float(np.max(np.abs(a))))
    if herm_deviation(a) > TOL_HERM * scale:
        raise DomainError("eig_hermitian requires a Hermitian matrix")
    n = a.shape[0]
    a = (a + a.conj().T) / 2
    v = np.eye(n, dtype=complex)
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off = max(off, abs(a[p, q]))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                phase = apq / abs(apq)
                tau = (a[q, q].real - a[p, p].real) / (2 * abs(apq))
                if tau >= 0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # unitary rotation J with J[p,q] = s*phase, J[q,p] = -s*conj(phase)
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * np.conj(phase) * aq
                a[:, q] = s * phase * ap + c * aq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * phase * rq
                a[q, :] = s * np.conj(phase) * rp + c * rq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(phase) * vq
                v[:, q] = s * phase * vp + c * vq
    evals = np.real(np.diag(a))
    order = np.argsort(-evals, kind="stable")
    return evals[order], v[:, order]


def sequence_operator(p: Povm, seq, max_dim: int = 4096) -> np.ndarray:
    """Tensor product E_{k_1} x ... x E_{k_n} for an outcome sequence (0-based)."""
    seq = tuple(int(k) for k in seq)
    if not seq:
        raise StructuralError("outcome sequence must be non-empty")
    for k in seq:
        if k < 0 or k >= p.n_outcomes:
            raise StructuralError(f"outcome index {k} out of range 0..{p.n_outcomes - 1}")
    if p.dim ** len(seq) > max_dim:
        raise ResourceError(
            f"product dimension {p.dim}^{len(seq)} exceeds cap {max_dim}"
        )
    out = p.elements[seq[0]]
    for k in seq[1:]:
        out = np.kron(out, p.elements[k])
    return out
