import numpy as np
import pytest

from detpower import DensityMatrix, Povm


@pytest.fixture
def diag_povm():
    """The two-outcome commuting qubit detector used throughout the examples."""
    return Povm((np.diag([0.4, 0.2]).astype(complex), np.diag([0.6, 0.8]).astype(complex)))


@pytest.fixture
def basis_states():
    rho0 = DensityMatrix(np.diag([1.0, 0.0]).astype(complex))
    rho1 = DensityMatrix(np.diag([0.0, 1.0]).astype(complex))
    return rho0, rho1


def random_density(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_pure(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_povm(rng, d, m):
    """Random full-rank POVM: normalize random PSD operators by their sum."""
    mats = []
    for _ in range(m):
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        mats.append(g @ g.conj().T)
    total = sum(mats)
    evals, evecs = np.linalg.eigh(total)
    inv_sqrt = evecs @ np.diag(1.0 / np.sqrt(evals)) @ evecs.conj().T
    return Povm(tuple(inv_sqrt @ a @ inv_sqrt for a in mats))


def random_distribution(rng, m):
    p = rng.uniform(0.05, 1.0, size=m)
    return p / p.sum()
