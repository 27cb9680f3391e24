"""Sensitivity, photon-number benchmarks, and Fisher information."""

import math

import numpy as np
import pytest

from su11lso.errors import DegenerateConfigurationError, DivergentSensitivityError
from su11lso.metrology import (
    optimal_phase,
    phase_sensitivity,
    qfi_ideal,
    qfi_lossy,
    sensitivity_curve,
    sql_hl,
    total_photon_number,
)
from su11lso.moments import InterferometerParams


def params(g=1.0, alpha=1.0, r=0.0, t1=1.0, t2=1.0, phi=0.0):
    return InterferometerParams(g=g, alpha=alpha, r=r, t1=t1, t2=t2, phi=phi)


class TestPhaseSensitivity:
    def test_divergent_without_displacement(self):
        with pytest.raises(DivergentSensitivityError):
            phase_sensitivity(params(alpha=0, r=0.5, phi=0.4))

    def test_report_composition(self):
        rep = phase_sensitivity(params(r=0.3, phi=0.7))
        assert rep.delta_phi == pytest.approx(
            math.sqrt(rep.variance) / abs(rep.dmean_dphi)
        )
        assert rep.delta_phi > 0 and math.isfinite(rep.delta_phi)

    def test_frozen_standard_circuit_value(self):
        # r = 0 reduces to the plain two-squeezer interferometer; value pinned
        # by the Fock oracle at tail mass < 1e-12
        rep = phase_sensitivity(params(g=1, alpha=1, r=0, phi=0.5))
        assert rep.delta_phi == pytest.approx(0.7076463095971671, rel=1e-8)

    def test_coherent_only_circuit(self):
        # g = 0, r = 0: phase rotation of a coherent state
        alpha = 1.0
        rep = phase_sensitivity(params(g=0, alpha=alpha, r=0, phi=0.5))
        # mean 2|a|cos(phi), variance 1, slope 2|a|sin(phi)
        assert rep.delta_phi == pytest.approx(1.0 / (2 * alpha * math.sin(0.5)))


class TestPhotonNumber:
    def test_coherent_input_only(self):
        assert total_photon_number(params(g=0, alpha=0.8, r=0)) == pytest.approx(0.64)

    def test_squeezed_vacuum(self):
        assert total_photon_number(params(g=0, alpha=0, r=0.6)) == pytest.approx(
            math.sinh(0.6) ** 2
        )

    def test_two_mode_squeezer_closed_form(self):
        n = total_photon_number(params(g=1, alpha=1, r=0))
        assert n == pytest.approx(2.0 * math.cosh(2.0) - 1.0)
        assert n == pytest.approx(6.524391382167263)

    def test_ignores_loss_and_phase(self):
        a = total_photon_number(params(r=0.5))
        b = total_photon_number(params(r=0.5, t1=0.2, t2=0.4, phi=1.0))
        assert a == b


class TestBenchmarks:
    def test_unit_photon_number(self):
        p = params(g=0, alpha=1, r=0)
        assert sql_hl(p) == pytest.approx((1.0, 1.0))

    def test_arithmetic(self):
        p = params(g=0, alpha=2, r=0)  # N = 4
        assert sql_hl(p) == pytest.approx((0.5, 0.25))

    def test_from_squeezer_photon_number(self):
        sql, hl = sql_hl(params(g=1, alpha=1, r=0))
        assert sql == pytest.approx(1.0 / math.sqrt(6.524391382167263))
        assert hl == pytest.approx(1.0 / 6.524391382167263)

    def test_vacuum_rejected(self):
        with pytest.raises(DegenerateConfigurationError):
            sql_hl(params(g=0, alpha=0, r=0))


class TestQfiIdeal:
    def test_coherent_closed_form(self):
        for a in (0.5, 1.0, 1.3):
            rep = qfi_ideal(params(g=0, alpha=a, r=0))
            assert rep.fisher == pytest.approx(4.0 * a * a, rel=1e-10)

    def test_squeezed_vacuum_closed_form(self):
        for r in (0.3, 0.6, 1.0):
            rep = qfi_ideal(params(g=0, alpha=0, r=r))
            assert rep.fisher == pytest.approx(2.0 * math.sinh(2 * r) ** 2, rel=1e-10)

    def test_frozen_corner_value(self):
        # pinned by the Fock oracle: 4 Var(n_a) at tail mass < 1e-12
        rep = qfi_ideal(params(g=1, alpha=1, r=1))
        assert rep.fisher == pytest.approx(2341.9188998755603, rel=1e-9)

    def test_qcrb_composition(self):
        rep = qfi_ideal(params(g=1, alpha=1, r=0.3))
        assert rep.qcrb == pytest.approx(1.0 / math.sqrt(rep.fisher))
        assert rep.sql**2 * rep.n_total == pytest.approx(1.0, abs=1e-10)
        assert rep.hl <= rep.sql  # N >= 1 here

    def test_vacuum_rejected(self):
        with pytest.raises(DegenerateConfigurationError):
            qfi_ideal(params(g=0, alpha=0, r=0))


class TestQfiLossy:
    def test_lossless_limit_exact(self):
        p = params(r=0.4)
        assert qfi_lossy(p, 1.0).fisher_lossy == qfi_ideal(p).fisher

    def test_full_absorption_exact(self):
        rep = qfi_lossy(params(r=0.4), 0.0)
        assert rep.fisher_lossy == 0.0
        assert rep.qcrb_lossy == math.inf

    def test_closed_form_composition(self):
        p = params(g=1, alpha=1, r=0)
        eta = 0.5
        f = qfi_ideal(p).fisher
        from su11lso.moments import q_moment

        na = q_moment(p, (1, 1, 0, 0)).real
        expected = 4 * f * eta * na / ((1 - eta) * f + 4 * eta * na)
        assert qfi_lossy(p, eta).fisher_lossy == pytest.approx(expected, rel=1e-12)

    def test_monotone_and_bounded(self):
        p = params(g=1, alpha=1, r=0.6)
        f = qfi_ideal(p).fisher
        etas = np.linspace(0, 1, 21)
        vals = [qfi_lossy(p, e).fisher_lossy for e in etas]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
        assert all(v <= f + 1e-12 for v in vals)

    def test_eta_out_of_range(self):
        with pytest.raises(ValueError):
            qfi_lossy(params(), 1.2)

    def test_vacuum_rejected(self):
        with pytest.raises(DegenerateConfigurationError):
            qfi_lossy(params(g=0, alpha=0, r=0), 0.5)


class TestOptimalPhase:
    def test_minimum_decreases_with_squeezing(self):
        mins = [
            optimal_phase(params(r=r)).delta_phi_min for r in (0.0, 0.3, 0.6, 1.0)
        ]
        assert all(b < a for a, b in zip(mins, mins[1:]))

    def test_optimum_away_from_zero(self):
        res = optimal_phase(params(r=1.0))
        assert res.phi_opt > 1e-2

    def test_beats_dense_grid(self):
        res = optimal_phase(params(r=0.6))
        phis = np.linspace(*res.bracket, 20001)
        dense_min = float(np.min(sensitivity_curve(params(r=0.6), phis)))
        assert res.delta_phi_min <= dense_min + 1e-9

    def test_no_informative_phase(self):
        with pytest.raises(DivergentSensitivityError):
            optimal_phase(params(alpha=0))

    def test_minimum_bounded_by_evaluated_grid(self):
        res = optimal_phase(params(r=0.3), n_grid=501)
        curve = sensitivity_curve(params(r=0.3), np.linspace(*res.bracket, 501))
        assert res.delta_phi_min <= float(np.min(curve)) + 1e-12


class TestTrendInvariants:
    def test_loss_degrades_sensitivity_monotonically(self):
        ts = np.linspace(0.2, 1.0, 9)
        internal = [
            optimal_phase(params(r=0.6, t1=t), n_grid=801).delta_phi_min for t in ts
        ]
        external = [
            optimal_phase(params(r=0.6, t2=t), n_grid=801).delta_phi_min for t in ts
        ]
        assert all(b <= a + 1e-12 for a, b in zip(internal, internal[1:]))
        assert all(b <= a + 1e-12 for a, b in zip(external, external[1:]))

    def test_internal_loss_hurts_more(self):
        for t in np.linspace(0.2, 0.9, 8):
            internal = optimal_phase(params(r=0.6, t1=t), n_grid=801).delta_phi_min
            external = optimal_phase(params(r=0.6, t2=t), n_grid=801).delta_phi_min
            assert internal >= external - 1e-12

    def test_cramer_rao_consistency(self):
        for r in (0.0, 0.3, 1.0):
            p = params(r=r)
            best = optimal_phase(p).delta_phi_min
            assert best >= qfi_ideal(p).qcrb - 1e-9

    def test_benchmark_beating(self):
        sql, hl = sql_hl(params(r=0))
        assert optimal_phase(params(r=0)).delta_phi_min > sql
        assert optimal_phase(params(r=0.3)).delta_phi_min < sql
        assert optimal_phase(params(r=1.0)).delta_phi_min < hl
