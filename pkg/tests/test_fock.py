"""Fock-space oracle: gates, channels, diagnostics, and cross-path locks."""

import math

import numpy as np
import pytest
from scipy.linalg import expm

from su11lso import fock
from su11lso.errors import InsufficientCutoffError
from su11lso.metrology import phase_sensitivity, qfi_ideal
from su11lso.moments import InterferometerParams, q_moment, quadrature_stats


def dense_ladder(d):
    return np.diag(np.sqrt(np.arange(1.0, d)), 1)


class TestBuildInput:
    def test_vacuum(self):
        st = fock.build_input(0.0, 6, 4)
        assert st.grid[0, 0] == 1.0
        assert np.count_nonzero(st.amplitudes) == 1

    def test_poisson_mean(self):
        st = fock.build_input(1.0, 20, 2)
        na, _, _ = fock.photon_number_stats(st)
        assert na == pytest.approx(1.0, abs=1e-10)

    def test_normalized(self):
        st = fock.build_input(1.5, 25, 2)
        assert st.norm() == pytest.approx(1.0, abs=1e-12)

    def test_leaky_cutoff_rejected(self):
        with pytest.raises(InsufficientCutoffError):
            fock.build_input(2.0, 8, 4)


class TestGatesAgainstDenseExpm:
    """The sector-eigendecomposition exponentials against scipy expm."""

    @pytest.mark.parametrize("g,theta", [(0.7, 0.0), (0.5, math.pi), (0.9, 1.3)])
    @pytest.mark.parametrize("d_a,d_b", [(9, 7), (10, 8)])
    def test_two_mode_squeezer(self, g, theta, d_a, d_b):
        a = np.kron(dense_ladder(d_a), np.eye(d_b))
        b = np.kron(np.eye(d_a), dense_ladder(d_b))
        xi = g * np.exp(1j * theta)
        u_ref = expm(np.conj(xi) * (a @ b) - xi * (a.conj().T @ b.conj().T))
        rng = np.random.default_rng(1)
        x = rng.normal(size=(d_a * d_b, 3)) + 1j * rng.normal(size=(d_a * d_b, 3))
        cache = {}
        got = fock.apply_two_mode_squeezer_batch(x.copy(), g, theta, d_a, d_b, cache=cache)
        assert np.abs(got - u_ref @ x).max() < 1e-12
        cached = fock.apply_two_mode_squeezer_batch(x.copy(), g, theta, d_a, d_b, cache=cache)
        assert np.abs(cached - u_ref @ x).max() < 1e-12

    def test_single_mode_squeezer(self):
        d = 12
        a = dense_ladder(d)
        gen = 0.5 * 0.8 * (a.T @ a.T - a @ a)
        assert np.abs(
            fock.single_mode_squeezer_matrix(0.8, d) - expm(gen)
        ).max() < 1e-12


class TestGatePhysics:
    def test_two_mode_identity_at_zero_gain(self):
        st = fock.build_input(0.7, 16, 4)
        out = fock.apply_two_mode_squeezer(st, 0.0)
        assert np.array_equal(out.amplitudes, st.amplitudes)

    def test_two_mode_vacuum_photon_number(self):
        st = fock.apply_two_mode_squeezer(fock.build_input(0.0, 30, 30), 1.0)
        na, _, nb = fock.photon_number_stats(st)
        assert na == pytest.approx(math.sinh(1.0) ** 2, abs=1e-6)
        assert nb == pytest.approx(na, abs=1e-12)

    def test_unitarity(self):
        st = fock.prepared_state(0.8, 0.9, 0.6, 120, 60)
        assert abs(st.norm() - 1.0) < 1e-9

    def test_single_mode_identity_and_photon_number(self):
        st = fock.build_input(0.0, 40, 2)
        assert np.array_equal(
            fock.apply_single_mode_squeezer(st, 0.0).amplitudes, st.amplitudes
        )
        sq = fock.apply_single_mode_squeezer(st, 0.6)
        na, _, _ = fock.photon_number_stats(sq)
        assert na == pytest.approx(math.sinh(0.6) ** 2, abs=1e-10)

    def test_squeezed_vacuum_pair_moment_sign(self):
        # <a^2> = +cosh(r) sinh(r) locks the squeezer phase convention to the
        # generating-function coefficients
        sq = fock.apply_single_mode_squeezer(fock.build_input(0.0, 40, 2), 0.6)
        got = fock.pure_moment(sq, (0, 2, 0, 0))
        assert got.real == pytest.approx(math.cosh(0.6) * math.sinh(0.6), abs=1e-9)
        assert abs(got.imag) < 1e-12

    def test_phase_gate(self):
        st = fock.build_input(1.0, 20, 2)
        assert np.array_equal(fock.apply_phase(st, 0.0).amplitudes, st.amplitudes)
        full_turn = fock.apply_phase(st, 2 * math.pi)
        assert np.abs(full_turn.amplitudes - st.amplitudes).max() < 1e-12
        rotated = fock.apply_phase(st, 0.7)
        assert fock.pure_moment(rotated, (0, 1, 0, 0)) == pytest.approx(
            np.exp(-1j * 0.7)
        )


class TestLossChannel:
    def test_identity_at_full_transmission(self):
        st = fock.prepared_state(0.5, 0.4, 0.3, 12, 8)
        rho = fock.apply_loss(st, fock.KrausChannel(1.0, "a"))
        expected = np.outer(st.amplitudes, st.amplitudes.conj())
        assert np.abs(rho.matrix - expected).max() < 1e-14

    def test_coherent_state_stays_coherent(self):
        st = fock.build_input(0.9, 20, 1)
        rho = fock.apply_loss(st, fock.KrausChannel(0.7, "a"))
        na = float((np.diag(rho.matrix).real * np.arange(20)).sum())
        assert na == pytest.approx(0.7 * 0.81, abs=1e-12)
        # purity of a coherent state survives loss
        assert np.trace(rho.matrix @ rho.matrix).real == pytest.approx(1.0, abs=1e-10)

    def test_complete_absorption(self):
        st = fock.prepared_state(0.5, 0.4, 0.3, 12, 8)
        rho = fock.apply_loss(st, fock.KrausChannel(0.0, "a"))
        pa = rho.marginal_a()
        assert pa[0] == pytest.approx(1.0, abs=1e-12)
        assert rho.trace() == pytest.approx(1.0, abs=1e-12)

    def test_trace_preserved(self):
        st = fock.prepared_state(0.6, 0.5, 0.4, 14, 10)
        rho = fock.apply_loss(st, fock.KrausChannel(0.63, "a"))
        assert rho.trace() == pytest.approx(1.0, abs=1e-10)
        rho2 = fock.apply_loss(rho, fock.KrausChannel(0.8, "b"))
        assert rho2.trace() == pytest.approx(1.0, abs=1e-10)

    def test_kraus_completeness_on_populated_subspace(self):
        st = fock.prepared_state(0.7, 0.6, 0.5, 16, 10)
        _, w = fock._loss_kraus_rows(st, 0.7, "a", weight_tol=1e-15)
        assert w.sum() == pytest.approx(st.norm() ** 2, abs=1e-12)

    def test_matches_explicit_beam_splitter_ancilla(self):
        # fictitious-BS picture with an explicit vacuum ancilla at d = 8
        d, t = 8, 0.7
        st = fock.apply_single_mode_squeezer(fock.build_input(0.3, d, 1), 0.3)
        vec = st.grid[:, 0]
        a = np.kron(dense_ladder(d), np.eye(d))
        v = np.kron(np.eye(d), dense_ladder(d))
        theta = math.acos(math.sqrt(t))
        u = expm(theta * (a.conj().T @ v - a @ v.conj().T))
        joint = u @ np.kron(vec, np.eye(d)[0])
        rho_ref = np.einsum(
            "iv,jv->ij", joint.reshape(d, d), joint.reshape(d, d).conj()
        )
        rho = fock.apply_loss(
            fock.FockStateVector(d, 1, vec.copy()), fock.KrausChannel(t, "a")
        )
        assert np.abs(rho.matrix - rho_ref).max() < 1e-12


class TestCutoffCheck:
    def test_vacuum_converges_at_tiny_cutoff(self):
        diag = fock.cutoff_check(fock.build_input(0.0, 2, 2), 1e-10)
        assert diag.converged

    def test_zero_tolerance_unattainable(self):
        st = fock.prepared_state(0.5, 0.5, 0.5, 40, 20)
        assert not fock.cutoff_check(st, 0.0).converged

    def test_squeezed_state_needs_large_cutoff(self):
        small = fock.prepared_state(1.0, 1.0, 1.0, 40, 20)
        assert not fock.cutoff_check(small, 1e-10).converged
        converged, diag = fock.auto_prepared_state(1.0, 1.0, 1.0, 1e-10)
        assert diag.converged
        assert converged.cutoff_a > 200  # heavy super-Poissonian tail


class TestOracleAgainstAnalyticPath:
    def test_moments_match_individually(self):
        # sign-convention lock: first-order and pair moments, not aggregates
        p = InterferometerParams(g=1, alpha=1, r=0.6)
        psi, _ = fock.auto_prepared_state(1, 1, 0.6, tail_tol=1e-11)
        for key in [
            (1, 0, 0, 0),
            (0, 2, 0, 0),
            (0, 1, 0, 1),
            (1, 1, 0, 0),
            (1, 0, 1, 0),
            (2, 2, 0, 0),
        ]:
            analytic = q_moment(p, key)
            oracle = fock.pure_moment(psi, key)
            assert abs(analytic - oracle) <= 1e-8 * max(1.0, abs(oracle)), key

    def test_sensitivity_cross_path_lossless(self):
        p = InterferometerParams(g=1, alpha=1, r=0.5, phi=0.5)
        rep = fock.oracle_sensitivity(p)
        assert rep.delta_phi == pytest.approx(
            phase_sensitivity(p).delta_phi, rel=1e-6
        )

    def test_sensitivity_cross_path_internal_loss(self):
        p = InterferometerParams(g=1, alpha=1, r=0.5, t1=0.5, t2=0.9, phi=0.8)
        rep = fock.oracle_sensitivity(p)
        assert rep.delta_phi == pytest.approx(
            phase_sensitivity(p).delta_phi, rel=1e-6
        )

    def test_production_route_equals_literal_density_route(self):
        # trace cyclicity: identical matrices, reordered
        p = InterferometerParams(g=0.6, alpha=0.8, r=0.4, t1=0.75, t2=0.85, phi=0.9)
        rho = fock.output_density_operator(p, 14, 12)
        mean_lit, second_lit = fock.density_quadrature_stats(rho)
        eng = fock.SensitivityOracle(0.8, 0.6, 0.4)
        eng.prep = fock.prepared_state(0.8, 0.6, 0.4, 14, 12)
        res, *_ = eng._evaluate_at_dims(0.75, (0.85,), (0.9,), 14, 12)
        mean_fast, second_fast = res[(0.85, 0.9)]
        assert mean_fast == pytest.approx(mean_lit, abs=1e-13)
        assert second_fast == pytest.approx(second_lit, abs=1e-12)


class TestQfiOracles:
    def test_pure_coherent(self):
        f = fock.oracle_qfi_pure(InterferometerParams(g=0, alpha=1, r=0))
        assert f == pytest.approx(4.0, abs=1e-9)

    def test_pure_squeezed_vacuum(self):
        f = fock.oracle_qfi_pure(InterferometerParams(g=0, alpha=0, r=0.6))
        assert f == pytest.approx(2.0 * math.sinh(1.2) ** 2, rel=1e-9)

    def test_pure_matches_analytic(self):
        p = InterferometerParams(g=1, alpha=1, r=1)
        f = fock.oracle_qfi_pure(p, tail_tol=1e-12)
        assert f == pytest.approx(qfi_ideal(p).fisher, rel=1e-8)

    def test_mixed_reduces_to_pure_at_full_transmission(self):
        p = InterferometerParams(g=0.8, alpha=0.7, r=0.5)
        pure = fock.oracle_qfi_pure(p, tail_tol=1e-12)
        mixed = fock.oracle_qfi_mixed(p, 1.0, tail_tol=1e-12)
        assert mixed == pytest.approx(pure, rel=1e-8)

    def test_mixed_lossy_coherent_closed_form(self):
        # a lossy coherent state stays coherent at sqrt(eta) alpha
        p = InterferometerParams(g=0, alpha=1.0, r=0)
        for eta in (0.3, 0.7):
            f = fock.oracle_qfi_mixed(p, eta)
            assert f == pytest.approx(4.0 * eta, rel=1e-8)

    def test_mixed_vanishes_at_complete_loss(self):
        f = fock.oracle_qfi_mixed(InterferometerParams(g=0.5, alpha=0.5, r=0.5), 0.0)
        assert abs(f) < 1e-10

    def test_phase_placement_irrelevant(self):
        p = InterferometerParams(g=0.6, alpha=0.8, r=0.4, phi=0.9)
        f1 = fock.oracle_qfi_mixed(p, 0.6)
        f2 = fock.oracle_qfi_mixed(p.replace(phi=0.0), 0.6)
        assert f1 == pytest.approx(f2, rel=1e-10)
