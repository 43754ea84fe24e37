"""Seeded random generators for states, observables, and unitaries.

Every function takes an explicit ``numpy.random.Generator`` so that all
randomness in the package is reproducible from a single integer seed.
"""

from __future__ import annotations

import numpy as np

from .linalg import cluster_indices, dag
from .objects import Observable, State


def rng_from_seed(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def ginibre(dim: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Complex Gaussian matrix with unit-variance entries."""
    return (rng.standard_normal((dim, cols)) + 1j * rng.standard_normal((dim, cols))) / np.sqrt(2)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via phase-fixed QR of a Ginibre matrix."""
    q, r = np.linalg.qr(ginibre(dim, dim, rng))
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = ginibre(dim, dim, rng)
    return scale * (g + dag(g)) / 2


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int = None) -> State:
    """Full-rank (default) random state from the Ginibre ensemble."""
    g = ginibre(dim, rank or dim, rng)
    m = g @ dag(g)
    return State(m / np.trace(m).real)


def random_pure_state(dim: int, rng: np.random.Generator) -> State:
    v = ginibre(dim, 1, rng).reshape(-1)
    v /= np.linalg.norm(v)
    return State(np.outer(v, v.conj()))


def random_povm(dim: int, n_outcomes: int, rng: np.random.Generator) -> Observable:
    """Generic (noncommuting) POVM: Gram-normalized positive operators."""
    raw = []
    for _ in range(n_outcomes):
        g = ginibre(dim, dim, rng)
        raw.append(g @ dag(g))
    total = sum(raw)
    evals, vecs = np.linalg.eigh(total)
    inv_root = (vecs / np.sqrt(evals)) @ dag(vecs)
    effects = [inv_root @ a @ inv_root for a in raw]
    labels = [f"x{i}" for i in range(n_outcomes)]
    return Observable(labels, effects)


def random_commuting_povm(
    hamiltonian, n_outcomes: int, rng: np.random.Generator, cluster_tol: float = 1e-8
) -> Observable:
    """POVM commuting with a Hamiltonian: random post-processing of its spectral measure.

    For each (clustered) energy level a probability vector over outcomes is
    drawn uniformly from the simplex; effect ``E_x = sum_m p(x|m) P_m``.
    """
    h = np.asarray(hamiltonian, dtype=complex)
    evals, vecs = np.linalg.eigh((h + dag(h)) / 2)
    groups = cluster_indices(evals, cluster_tol)
    projectors = [vecs[:, idx] @ dag(vecs[:, idx]) for idx in groups]
    dim = h.shape[0]
    effects = [np.zeros((dim, dim), dtype=complex) for _ in range(n_outcomes)]
    for p in projectors:
        weights = rng.dirichlet(np.ones(n_outcomes))
        for x in range(n_outcomes):
            effects[x] = effects[x] + weights[x] * p
    labels = [f"x{i}" for i in range(n_outcomes)]
    return Observable(labels, effects)


def random_diagonal_hamiltonian(
    dim: int, rng: np.random.Generator, spread: float = 2.0
) -> np.ndarray:
    """Diagonal Hamiltonian with ascending energies drawn uniformly in [0, spread]."""
    return np.diag(np.sort(rng.uniform(0.0, spread, size=dim)).astype(complex))
