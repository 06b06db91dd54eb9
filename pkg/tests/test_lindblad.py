"""Density-matrix ground truth: generator structure, steady states,
moments, and cross-validation of the amplitude route."""
import numpy as np
import pytest
import scipy.sparse as sp

import qnet
from qnet.errors import CapacityError, NonUniqueSteadyState, ValidationError

WEAK_DRIVE = 0.05 * np.exp(0.6j)  # |rabi| = 0.05 * gamma with a nontrivial phase


def _one_node(gamma=1.0, rabi=0.0 + 0.0j, omega_d=1000.0, gamma_load=0.0):
    return qnet.NetworkSpec(
        node_frequencies=np.array([1000.0]),
        intrinsic_decays=np.array([gamma]),
        couplings=np.zeros((1, 1)),
        drive=qnet.DriveSpec(node=0, omega_d=omega_d, rabi=rabi),
        load=qnet.LoadSpec(node=0, delta_omega=0.0, gamma_load=gamma_load),
    )


def _two_node(rabi=WEAK_DRIVE, delta_omega=0.3, gamma_load=0.4):
    """Weak coherent drive on a lossy pair; occupations stay far below the
    truncation so the Fock-space route converges quickly."""
    return qnet.NetworkSpec(
        node_frequencies=np.array([1000.0, 1000.0]),
        intrinsic_decays=np.array([1.0, 1.0]),
        couplings=np.array([[0.0, 2.5], [2.5, 0.0]]),
        drive=qnet.DriveSpec(node=0, omega_d=1002.5, rabi=rabi),
        load=qnet.LoadSpec(node=1, delta_omega=delta_omega, gamma_load=gamma_load),
    )


class TestFockConfig:
    def test_dimension(self):
        assert qnet.FockConfig(n_max=5, nodes=2).dim == 36

    def test_capacity_cap(self):
        with pytest.raises(CapacityError):
            qnet.FockConfig(n_max=64, nodes=2)  # 65^2 > 4096

    def test_cap_boundary_allowed(self):
        assert qnet.FockConfig(n_max=63, nodes=2).dim == 4096

    def test_cutoff_must_be_positive(self):
        with pytest.raises(ValidationError):
            qnet.FockConfig(n_max=0, nodes=1)


class TestGeneratorStructure:
    def test_amplitude_damping_spectrum(self):
        # resonant undriven two-level boson: rates 0, -g/2, -g/2, -g
        gamma = 0.8
        cfg = qnet.FockConfig(n_max=1, nodes=1)
        liou = qnet.build_liouvillian(_one_node(gamma=gamma), cfg)
        eigs = np.sort(np.linalg.eigvals(liou.toarray()).real)
        assert np.allclose(eigs, [-gamma, -gamma / 2, -gamma / 2, 0.0], atol=1e-12)

    def test_trace_preservation(self):
        cfg = qnet.FockConfig(n_max=2, nodes=2)
        liou = qnet.build_liouvillian(_two_node(), cfg)
        rng = np.random.default_rng(0)
        for _ in range(5):
            m = rng.normal(size=(cfg.dim, cfg.dim)) + 1j * rng.normal(size=(cfg.dim, cfg.dim))
            rho = m + m.conj().T
            drho = (liou @ rho.reshape(-1, order="F")).reshape((cfg.dim, cfg.dim), order="F")
            assert abs(np.trace(drho)) <= 1e-12 * np.abs(drho).max()

    def test_hermiticity_preservation(self):
        cfg = qnet.FockConfig(n_max=2, nodes=2)
        liou = qnet.build_liouvillian(_two_node(), cfg)
        rng = np.random.default_rng(1)
        m = rng.normal(size=(cfg.dim, cfg.dim)) + 1j * rng.normal(size=(cfg.dim, cfg.dim))
        rho = m + m.conj().T
        drho = (liou @ rho.reshape(-1, order="F")).reshape((cfg.dim, cfg.dim), order="F")
        assert np.abs(drho - drho.conj().T).max() <= 1e-12 * np.abs(drho).max()

    def test_node_count_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            qnet.build_liouvillian(_two_node(), qnet.FockConfig(n_max=2, nodes=3))

    def test_sparse_output(self):
        liou = qnet.build_liouvillian(_one_node(), qnet.FockConfig(n_max=2, nodes=1))
        assert sp.issparse(liou)


class TestSteadyStateDensity:
    def test_undriven_relaxes_to_vacuum(self):
        cfg = qnet.FockConfig(n_max=3, nodes=1)
        state = qnet.steady_state_density(qnet.build_liouvillian(_one_node(), cfg), cfg)
        expected = np.zeros((4, 4))
        expected[0, 0] = 1.0
        assert np.allclose(state.rho, expected, atol=1e-12)

    def test_invariants(self):
        cfg = qnet.FockConfig(n_max=4, nodes=2)
        spec = _two_node()
        state = qnet.steady_state_density(qnet.build_liouvillian(spec, cfg), cfg)
        assert abs(np.trace(state.rho) - 1.0) <= 1e-10
        assert np.abs(state.rho - state.rho.conj().T).max() <= 1e-10
        assert np.linalg.eigvalsh(0.5 * (state.rho + state.rho.conj().T)).min() >= -1e-8

    def test_one_node_weak_drive_matches_scalar_solve(self):
        gamma, rabi = 1.0, 0.05
        spec = _one_node(gamma=gamma, rabi=rabi)
        cfg = qnet.FockConfig(n_max=4, nodes=1)
        state = qnet.steady_state_density(qnet.build_liouvillian(spec, cfg), cfg)
        amp = qnet.expectation_amplitude(state, 0)
        assert abs(amp - (-2j * rabi / gamma)) / (2 * rabi / gamma) < 1e-4

    def test_two_node_weak_drive_matches_linear_solve(self):
        spec = _two_node()
        cfg = qnet.FockConfig(n_max=5, nodes=2)
        state = qnet.steady_state_density(qnet.build_liouvillian(spec, cfg), cfg)
        amps = np.array([qnet.expectation_amplitude(state, k) for k in range(2)])
        linear = qnet.solve_amplitudes(spec).amplitudes
        assert np.linalg.norm(amps - linear) / np.linalg.norm(linear) < 1e-4

    def test_amplitude_residual_shrinks_with_cutoff(self):
        spec = _two_node()
        linear = qnet.solve_amplitudes(spec).amplitudes
        residuals = []
        for n_max in (2, 3, 4, 5):
            cfg = qnet.FockConfig(n_max=n_max, nodes=2)
            state = qnet.steady_state_density(qnet.build_liouvillian(spec, cfg), cfg)
            amps = np.array([qnet.expectation_amplitude(state, k) for k in range(2)])
            residuals.append(np.linalg.norm(amps - linear) / np.linalg.norm(linear))
        assert all(a > b for a, b in zip(residuals, residuals[1:]))

    def test_degenerate_kernel_detected(self):
        # no dissipation at all: every diagonal state is stationary
        spec = qnet.NetworkSpec(
            node_frequencies=np.array([1000.0]),
            intrinsic_decays=np.array([0.0]),
            couplings=np.zeros((1, 1)),
            drive=qnet.DriveSpec(node=0, omega_d=1000.4, rabi=0.0),
            load=qnet.LoadSpec(node=0, gamma_load=0.0),
        )
        cfg = qnet.FockConfig(n_max=2, nodes=1)
        with pytest.raises(NonUniqueSteadyState):
            qnet.steady_state_density(qnet.build_liouvillian(spec, cfg), cfg)

    def test_sparse_path_matches_scalar_solve(self):
        # dimension above the dense least-squares limit takes the sparse route
        gamma, rabi = 1.0, 0.05
        spec = _one_node(gamma=gamma, rabi=rabi)
        cfg = qnet.FockConfig(n_max=70, nodes=1)
        assert cfg.dim**2 > 4096
        state = qnet.steady_state_density(qnet.build_liouvillian(spec, cfg), cfg)
        amp = qnet.expectation_amplitude(state, 0)
        assert abs(amp - (-2j * rabi / gamma)) / (2 * rabi / gamma) < 1e-4


class TestMoments:
    def test_vacuum_moments(self):
        cfg = qnet.FockConfig(n_max=2, nodes=1)
        state = qnet.steady_state_density(qnet.build_liouvillian(_one_node(), cfg), cfg)
        assert qnet.expectation_amplitude(state, 0) == pytest.approx(0.0, abs=1e-12)
        assert qnet.expectation_correlator(state, 0, 0) == pytest.approx(0.0, abs=1e-12)
        assert qnet.factorization_residual(state) == 0.0

    def test_occupation_bounds_amplitude(self):
        # Cauchy-Schwarz: <n> >= |<a>|^2
        spec = _two_node()
        cfg = qnet.FockConfig(n_max=4, nodes=2)
        state = qnet.steady_state_density(qnet.build_liouvillian(spec, cfg), cfg)
        for k in range(2):
            occupation = qnet.expectation_correlator(state, k, k).real
            assert occupation >= abs(qnet.expectation_amplitude(state, k)) ** 2 - 1e-12

    def test_node_index_out_of_range(self):
        cfg = qnet.FockConfig(n_max=2, nodes=1)
        state = qnet.steady_state_density(qnet.build_liouvillian(_one_node(), cfg), cfg)
        with pytest.raises(IndexError):
            qnet.expectation_amplitude(state, 3)

    def test_factorization_residual_small_and_shrinking(self):
        spec = _two_node()
        residuals = []
        for n_max in (2, 3, 4, 5):
            cfg = qnet.FockConfig(n_max=n_max, nodes=2)
            state = qnet.steady_state_density(qnet.build_liouvillian(spec, cfg), cfg)
            residuals.append(qnet.factorization_residual(state))
        assert residuals[-1] <= 1e-3
        assert all(a > b for a, b in zip(residuals, residuals[1:]))


class TestOracleReport:
    def test_two_node_report(self):
        report = qnet.oracle_report(_two_node(), n_max=5)
        assert report["dim"] == 36
        assert report["amplitude_rel_discrepancy"] < 1e-4
        assert report["factorization_residual"] < 1e-3
        assert report["p_r_rel_discrepancy"] < 1e-3
        assert report["p_l_rel_discrepancy"] < 1e-3
        assert report["balance_rel_residual"] < 1e-3

    def test_capacity_propagates(self):
        with pytest.raises(CapacityError):
            qnet.oracle_report(_two_node(), n_max=100)
