import numpy as np
import pytest

from thermomeas.linalg import commutator_defect
from thermomeas.sampling import (
    haar_unitary,
    random_commuting_povm,
    random_density_matrix,
    random_diagonal_hamiltonian,
    random_povm,
    random_pure_state,
    rng_from_seed,
)


def test_haar_unitary_is_unitary():
    u = haar_unitary(5, rng_from_seed(0))
    np.testing.assert_allclose(u @ u.conj().T, np.eye(5), atol=1e-12)


def test_random_density_matrix_is_full_rank_state():
    rho = random_density_matrix(4, rng_from_seed(1))
    assert np.linalg.eigvalsh(rho.matrix)[0] > 0


def test_random_pure_state_is_rank_one():
    rho = random_pure_state(3, rng_from_seed(2))
    evals = np.linalg.eigvalsh(rho.matrix)
    assert abs(evals[-1] - 1.0) < 1e-12


@pytest.mark.parametrize("dim,n", [(2, 2), (3, 4)])
def test_random_povm_is_valid(dim, n):
    obs = random_povm(dim, n, rng_from_seed(3))
    assert obs.n_outcomes == n  # Observable constructor validates the rest


def test_random_commuting_povm_commutes_with_hamiltonian():
    h = np.diag([0.0, 1.0, 1.0, 2.0]).astype(complex)  # degenerate block included
    obs = random_commuting_povm(h, 3, rng_from_seed(4))
    for e in obs.effects:
        assert commutator_defect(e, h) < 1e-12


def test_generators_are_deterministic():
    a = random_povm(3, 2, rng_from_seed(5))
    b = random_povm(3, 2, rng_from_seed(5))
    for x, y in zip(a.effects, b.effects):
        assert np.array_equal(x, y)


def test_random_diagonal_hamiltonian_sorted():
    h = random_diagonal_hamiltonian(4, rng_from_seed(6))
    d = np.diag(h).real
    assert np.all(np.diff(d) >= 0)
