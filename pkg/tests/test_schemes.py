import math

import numpy as np
import pytest

from oracles import direct_instrument_action, direct_probe_state
from thermomeas.errors import PreconditionError, ValidationError
from thermomeas.linalg import commutator_defect
from thermomeas.objects import (
    KrausChannel,
    Observable,
    gibbs_state,
    spectral_observable,
    time_evolution,
)
from thermomeas.sampling import (
    haar_unitary,
    random_commuting_povm,
    random_density_matrix,
    rng_from_seed,
)
from thermomeas.schemes import (
    MeasurementScheme,
    conjugate_channel,
    energy_moment_defect,
    induced_instrument,
    random_free_scheme,
    swap_channel,
    trivial_scheme,
    validate_free_scheme,
)

H2 = np.diag([0.0, 1.0]).astype(complex)
H3 = np.diag([0.0, 1.0, 2.0]).astype(complex)
PLUS = np.full((2, 2), 0.5, dtype=complex)
MINUS = np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=complex)


def sharp_z(dim=2):
    return spectral_observable(np.diag(np.arange(float(dim))))


def amplitude_damping_times_identity(gamma=0.3):
    a0 = np.array([[1, 0], [0, math.sqrt(1 - gamma)]], dtype=complex)
    a1 = np.array([[0, math.sqrt(gamma)], [0, 0]], dtype=complex)
    return KrausChannel([np.kron(a0, np.eye(2)), np.kron(a1, np.eye(2))])


def resonant_random_scheme(seed=7, beta=1.0, mixture_size=3, dim=2):
    h = np.diag(np.arange(float(dim))).astype(complex)
    return random_free_scheme(h, h, beta, sharp_z(dim), seed, mixture_size)


class TestValidateFreeScheme:
    def test_swap_scheme_passes_tightly(self):
        scheme = trivial_scheme(sharp_z(), H2, beta=1.0)
        report = validate_free_scheme(scheme)
        assert report.verdict
        assert report.worst_defect < 1e-12
        assert report.gibbs_probe_ok

    def test_yanase_violation_detected(self):
        pointer = Observable(["p", "m"], [PLUS, MINUS])
        scheme = MeasurementScheme(H2, H2, 1.0, swap_channel(2), pointer)
        report = validate_free_scheme(scheme)
        assert not report.verdict
        # defined metric: max_x ||[Z_x, H_probe]||_F = 1/sqrt(2) for the X basis
        assert abs(report.yanase_defect - 1 / math.sqrt(2)) < 1e-12
        assert report.bistochastic_defect < 1e-12

    def test_non_unital_interaction_detected(self):
        scheme = MeasurementScheme(H2, H2, 1.0, amplitude_damping_times_identity(), sharp_z())
        report = validate_free_scheme(scheme)
        assert not report.verdict
        assert report.bistochastic_defect > 0.1

    def test_non_conserving_unitary_detected(self):
        u = haar_unitary(4, rng_from_seed(99))
        scheme = MeasurementScheme(H2, H2, 1.0, KrausChannel([u]), sharp_z())
        report = validate_free_scheme(scheme)
        assert not report.verdict
        assert report.energy_conservation_defects[0] > 1e-3


class TestInducedInstrument:
    def test_swap_scheme_thermalises(self):
        rng = rng_from_seed(0)
        observable = random_commuting_povm(H2, 3, rng)
        scheme = trivial_scheme(observable, H2, beta=1.3)
        ins = induced_instrument(scheme)
        tau = gibbs_state(H2, 1.3)
        for _ in range(10):
            rho = random_density_matrix(2, rng)
            p = observable.probabilities(rho)
            for x, out in enumerate(ins.apply(rho)):
                assert np.linalg.norm(out - p[x] * tau.matrix) < 1e-12

    def test_identity_interaction_leaves_state_alone(self):
        scheme = MeasurementScheme(H2, H2, 1.0, KrausChannel([np.eye(4)]), sharp_z())
        assert validate_free_scheme(scheme).verdict
        ins = induced_instrument(scheme)
        xi = scheme.probe_state
        q = scheme.pointer.probabilities(xi)
        rho = random_density_matrix(2, rng_from_seed(1))
        for x, out in enumerate(ins.apply(rho)):
            assert np.linalg.norm(out - q[x] * rho.matrix) < 1e-12

    @pytest.mark.parametrize("dim,seed", [(2, 7), (2, 8), (3, 21)])
    def test_action_matches_direct_formula(self, dim, seed):
        scheme = resonant_random_scheme(seed=seed, dim=dim)
        ins = induced_instrument(scheme)
        rng = rng_from_seed(seed + 1)
        for _ in range(5):
            rho = random_density_matrix(dim, rng)
            direct = direct_instrument_action(scheme, rho)
            for out, ref in zip(ins.apply(rho), direct):
                assert np.linalg.norm(out - ref) < 1e-12

    def test_gibbs_input_reproduces_gibbs(self):
        scheme = resonant_random_scheme(seed=3)
        ins = induced_instrument(scheme)
        tau = scheme.system_gibbs()
        q = ins.induced_observable().probabilities(tau)
        for x, out in enumerate(ins.apply(tau)):
            assert np.linalg.norm(out - q[x] * tau.matrix) < 1e-9

    def test_phase_unitary_when_total_spectrum_nondegenerate(self):
        # detuned pair: total spectrum {0, 2.3, 1, 3.3} has no repeats
        h_probe = np.diag([0.0, 2.3]).astype(complex)
        scheme = random_free_scheme(H2, h_probe, 1.0, sharp_z(), seed=5, mixture_size=1)
        u = scheme.interaction.kraus[0]
        off_diag = u - np.diag(np.diag(u))
        assert np.linalg.norm(off_diag) < 1e-12
        ins = induced_instrument(scheme)
        xi = scheme.probe_state
        q = scheme.pointer.probabilities(xi)
        rho = random_density_matrix(2, rng_from_seed(6))
        for x, out in enumerate(ins.apply(rho)):
            # diagonal entries exactly q_x rho_mm; coherences only pick up phases
            np.testing.assert_allclose(np.diag(out), q[x] * np.diag(rho.matrix), atol=1e-12)
            assert np.all(np.abs(out) <= q[x] * np.abs(rho.matrix) + 1e-12)
            ref = direct_instrument_action(scheme, rho)[x]
            assert np.linalg.norm(out - ref) < 1e-12

    def test_bad_pointer_effect_rejected(self):
        bad = Observable.from_dict({"a": np.diag([1.0, -0.2]), "b": np.diag([0.0, 1.2])}, tol=0.5)
        scheme = MeasurementScheme(H2, H2, 1.0, swap_channel(2), bad)
        with pytest.raises(ValidationError, match="pointer effect"):
            induced_instrument(scheme)


class TestConjugateChannel:
    def test_swap_hands_system_state_to_probe(self):
        scheme = trivial_scheme(sharp_z(), H2, beta=1.0)
        lam = conjugate_channel(scheme)
        rho = random_density_matrix(2, rng_from_seed(2))
        np.testing.assert_allclose(lam.apply(rho), rho.matrix, atol=1e-12)

    def test_identity_interaction_leaves_probe_alone(self):
        scheme = MeasurementScheme(H2, H2, 1.0, KrausChannel([np.eye(4)]), sharp_z())
        lam = conjugate_channel(scheme)
        rho = random_density_matrix(2, rng_from_seed(3))
        np.testing.assert_allclose(lam.apply(rho), scheme.probe_state.matrix, atol=1e-12)

    def test_gibbs_is_fixed_point_pair(self):
        scheme = resonant_random_scheme(seed=11, beta=0.7)
        lam = conjugate_channel(scheme)
        tau = scheme.system_gibbs()
        assert np.linalg.norm(lam.apply(tau) - scheme.probe_state.matrix) < 1e-9

    def test_matches_direct_partial_trace(self):
        scheme = resonant_random_scheme(seed=13, dim=3)
        lam = conjugate_channel(scheme)
        rho = random_density_matrix(3, rng_from_seed(4))
        np.testing.assert_allclose(lam.apply(rho), direct_probe_state(scheme, rho), atol=1e-12)


class TestTrivialScheme:
    def test_spectral_measure_accepted(self):
        scheme = trivial_scheme(sharp_z(), H2, beta=2.0)
        assert validate_free_scheme(scheme).verdict

    def test_trivial_observable_accepted_for_any_hamiltonian(self):
        trivial_obs = Observable(["a", "b"], [np.eye(2) / 2, np.eye(2) / 2])
        scheme = trivial_scheme(trivial_obs, H2, beta=1.0)
        assert validate_free_scheme(scheme).worst_defect < 1e-12

    def test_noncommuting_observable_rejected(self):
        obs = Observable(["p", "m"], [PLUS, MINUS])
        with pytest.raises(PreconditionError, match="commute") as err:
            trivial_scheme(obs, H2, beta=1.0)
        assert f"{1 / math.sqrt(2):.3e}" in str(err.value)


class TestRandomFreeScheme:
    def test_resonant_qubits_verdict_and_nontrivial(self):
        scheme = resonant_random_scheme(seed=7, mixture_size=3)
        assert validate_free_scheme(scheme).verdict
        induced = induced_instrument(scheme).induced_observable()
        assert induced.triviality_defect() > 1e-3

    def test_determinism(self):
        a = resonant_random_scheme(seed=42)
        b = resonant_random_scheme(seed=42)
        for ka, kb in zip(a.interaction.kraus, b.interaction.kraus):
            assert np.array_equal(ka, kb)

    def test_yanase_precondition(self):
        pointer = Observable(["p", "m"], [PLUS, MINUS])
        with pytest.raises(PreconditionError, match="Yanase"):
            random_free_scheme(H2, H2, 1.0, pointer, seed=0)

    @pytest.mark.parametrize("seed", range(5))
    def test_gibbs_preservation_property(self, seed):
        scheme = resonant_random_scheme(seed=seed, beta=0.9)
        ins = induced_instrument(scheme)
        tau = scheme.system_gibbs()
        q = ins.induced_observable().probabilities(tau)
        for x, out in enumerate(ins.apply(tau)):
            assert np.linalg.norm(out - q[x] * tau.matrix) < 1e-8

    @pytest.mark.parametrize("seed", range(3))
    def test_covariance_property(self, seed):
        scheme = resonant_random_scheme(seed=seed + 50, dim=3)
        ins = induced_instrument(scheme)
        h = scheme.system_hamiltonian
        eye = np.eye(3)
        derivation = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
        rng = rng_from_seed(seed)
        for x in range(ins.n_outcomes):
            sup = ins.superoperator(x)
            assert np.linalg.norm(sup @ derivation - derivation @ sup) < 1e-8
        for t in (0.37, 1.0, 2.5):
            u = time_evolution(h, t)
            rho = random_density_matrix(3, rng)
            rotated = ins.apply(u @ rho.matrix @ u.conj().T)
            plain = ins.apply(rho)
            for a, b in zip(rotated, plain):
                assert np.linalg.norm(a - u @ b @ u.conj().T) < 1e-8

    @pytest.mark.parametrize("seed", range(3))
    def test_joint_gibbs_fixed_point(self, seed):
        scheme = resonant_random_scheme(seed=seed + 80, beta=1.4)
        joint = np.kron(scheme.system_gibbs().matrix, scheme.probe_state.matrix)
        assert np.linalg.norm(scheme.interaction.apply(joint) - joint) < 1e-8

    @pytest.mark.parametrize("seed", range(3))
    def test_heat_duality_property(self, seed):
        scheme = resonant_random_scheme(seed=seed + 60, beta=0.8)
        ins = induced_instrument(scheme)
        lam = conjugate_channel(scheme)
        xi = scheme.probe_state.matrix
        rng = rng_from_seed(seed)
        for _ in range(3):
            rho = random_density_matrix(2, rng).matrix
            probe_side = np.trace(scheme.probe_hamiltonian @ (xi - lam.apply(rho))).real
            system_side = np.trace(
                scheme.system_hamiltonian @ (sum(ins.apply(rho)) - rho)
            ).real
            assert abs(probe_side - system_side) < 1e-8

    @pytest.mark.parametrize("seed", range(3))
    def test_induced_observable_invariance(self, seed):
        scheme = resonant_random_scheme(seed=seed + 70, dim=3)
        induced = induced_instrument(scheme).induced_observable()
        for e in induced.effects:
            assert commutator_defect(e, scheme.system_hamiltonian) < 1e-8


class TestEnergyMoments:
    def test_swap_conserves_all_moments(self):
        h_total = np.kron(H2, np.eye(2)) + np.kron(np.eye(2), H2)
        ch = swap_channel(2)
        for k in range(1, 5):
            assert energy_moment_defect(ch, h_total, k) < 1e-12

    @pytest.mark.parametrize("seed", range(4))
    def test_random_free_interactions_conserve_moments(self, seed):
        scheme = resonant_random_scheme(seed=seed + 200, dim=3)
        h_total = scheme.total_hamiltonian()
        for k in range(1, 5):
            assert energy_moment_defect(scheme.interaction, h_total, k) < 1e-9

    def test_generic_unitary_breaks_first_moment(self):
        h_total = np.kron(H2, np.eye(2)) + np.kron(np.eye(2), H2)
        rng = rng_from_seed(123)
        ch = KrausChannel([haar_unitary(4, rng)])
        assert energy_moment_defect(ch, h_total, 1) > 1e-3

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError, match="match"):
            energy_moment_defect(swap_channel(2), H2, 1)
