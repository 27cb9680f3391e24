"""Generating-function moments and homodyne statistics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from su11lso.errors import InternalConsistencyError
from su11lso.moments import (
    InterferometerParams,
    MomentTable,
    build_w_form,
    dmean_dphi,
    moment_table,
    q_moment,
    quadrature_mean,
    quadrature_second_moment,
    quadrature_stats,
)


class TestParams:
    def test_transmittance_range_enforced(self):
        with pytest.raises(ValueError):
            InterferometerParams(g=1, alpha=1, r=0, t1=1.2)
        with pytest.raises(ValueError):
            InterferometerParams(g=1, alpha=1, r=0, t2=-0.1)

    def test_negative_gain_rejected(self):
        with pytest.raises(ValueError):
            InterferometerParams(g=-0.5, alpha=1, r=0)
        with pytest.raises(ValueError):
            InterferometerParams(g=0.5, alpha=1, r=-0.1)

    def test_replace(self):
        p = InterferometerParams(g=1, alpha=1, r=0.3)
        q = p.replace(phi=0.5)
        assert q.phi == 0.5 and q.g == 1 and p.phi == 0.0


class TestWForm:
    def test_all_couplings_vanish_at_origin(self):
        w = build_w_form(InterferometerParams(g=0, alpha=0, r=0))
        assert not w.quadratic.any()
        assert not w.linear.any()

    def test_squeezed_vacuum_coefficients(self):
        w = build_w_form(InterferometerParams(g=0, alpha=0, r=0.6))
        assert w.monomial_coefficient(0, 1) == pytest.approx(math.sinh(0.6) ** 2)
        assert w.monomial_coefficient(0, 0) == pytest.approx(
            0.5 * math.cosh(0.6) * math.sinh(0.6)
        )

    def test_two_mode_cross_coupling(self):
        w = build_w_form(InterferometerParams(g=1, alpha=0, r=0))
        assert w.linear[3] == 0
        assert w.monomial_coefficient(1, 3) == pytest.approx(
            -math.sinh(1.0) * math.cosh(1.0)
        )

    def test_quadratic_is_symmetric(self):
        w = build_w_form(InterferometerParams(g=0.7, alpha=0.4 + 0.2j, r=0.9))
        assert np.array_equal(w.quadratic, w.quadratic.T)

    def test_independent_of_phase_and_loss(self):
        base = InterferometerParams(g=0.8, alpha=0.5 + 0.1j, r=0.4)
        w0 = build_w_form(base)
        w1 = build_w_form(base.replace(phi=1.1, t1=0.3, t2=0.7))
        assert np.array_equal(w0.quadratic, w1.quadratic)
        assert np.array_equal(w0.linear, w1.linear)


class TestMoments:
    def test_normalization(self):
        p = InterferometerParams(g=0.9, alpha=0.7 - 0.3j, r=0.8)
        assert q_moment(p, (0, 0, 0, 0)) == 1.0

    def test_coherent_state_moments(self):
        alpha = 0.7 + 0.2j
        p = InterferometerParams(g=0, alpha=alpha, r=0)
        assert q_moment(p, (1, 0, 0, 0)) == pytest.approx(alpha.conjugate())
        assert q_moment(p, (1, 1, 0, 0)) == pytest.approx(abs(alpha) ** 2)

    def test_squeezed_vacuum_photon_number(self):
        p = InterferometerParams(g=0, alpha=0, r=0.6)
        assert q_moment(p, (1, 1, 0, 0)).real == pytest.approx(math.sinh(0.6) ** 2)
        # the pair moment fixes the squeezer sign convention
        assert q_moment(p, (0, 2, 0, 0)).real == pytest.approx(
            math.cosh(0.6) * math.sinh(0.6)
        )

    def test_order_above_cap_rejected(self):
        p = InterferometerParams(g=0.5, alpha=1, r=0.2)
        with pytest.raises(ValueError, match="cap"):
            q_moment(p, (3, 2, 0, 0))

    def test_table_is_memoized_per_state(self):
        p = InterferometerParams(g=0.5, alpha=1, r=0.2, phi=0.1)
        assert moment_table(p) is moment_table(p.replace(phi=2.2, t1=0.4))

    def test_frozen_value_from_fock_oracle(self):
        # <a'^2 a^2> at g=1, alpha=1, r=0.6: Fock simulation at cutoff
        # (287, 86), tail mass < 1e-13
        p = InterferometerParams(g=1, alpha=1, r=0.6)
        assert q_moment(p, (2, 2, 0, 0)).real == pytest.approx(
            224.2386836611047, rel=1e-11
        )


GRID = [
    InterferometerParams(g=g, alpha=a, r=r)
    for g in (0.0, 0.6, 1.0)
    for a in (0.0, 0.8, 0.9 + 0.4j)
    for r in (0.0, 0.5, 1.0)
]


@pytest.mark.parametrize("params", GRID)
def test_normalization_and_hermiticity_on_grid(params):
    tab = MomentTable(params)
    assert tab.moment((0, 0, 0, 0)) == 1.0
    keys = [
        (x1, y1, x2, y2)
        for x1 in range(3)
        for y1 in range(3)
        for x2 in range(3)
        for y2 in range(3)
        if x1 + y1 + x2 + y2 <= 4
    ]
    for key in keys:
        x1, y1, x2, y2 = key
        direct = tab.moment(key)
        swapped = tab.moment((y1, x1, y2, x2))
        assert abs(swapped - direct.conjugate()) <= 1e-10 * max(1.0, abs(direct))


class TestQuadrature:
    def test_no_displacement_means_no_signal(self):
        p = InterferometerParams(g=0.8, alpha=0, r=0.7, phi=0.4, t1=0.9, t2=0.8)
        stats = quadrature_stats(p)
        assert stats.mean == pytest.approx(0.0, abs=1e-14)
        assert stats.dmean_dphi == pytest.approx(0.0, abs=1e-14)

    def test_coherent_rotation(self):
        alpha = 0.8 + 0.3j
        for phi in (0.0, 0.7, 2.1):
            p = InterferometerParams(g=0, alpha=alpha, r=0, phi=phi)
            expected = 2.0 * (alpha * np.exp(-1j * phi)).real
            assert quadrature_mean(p) == pytest.approx(expected)
            slope = 2.0 * (-1j * alpha * np.exp(-1j * phi)).real
            assert dmean_dphi(p) == pytest.approx(slope)

    def test_vacuum_second_moment_is_one(self):
        p = InterferometerParams(g=0, alpha=0, r=0, phi=0.3)
        assert quadrature_second_moment(p) == pytest.approx(1.0)

    def test_coherent_second_moment(self):
        p = InterferometerParams(g=0, alpha=1, r=0, phi=0.0)
        assert quadrature_second_moment(p) == pytest.approx(5.0)

    def test_frozen_values_from_fock_oracle(self):
        # pinned by the converged Fock simulation (tail mass < 1e-12)
        p = InterferometerParams(g=1, alpha=1, r=0.6, phi=0.3)
        assert quadrature_mean(p) == pytest.approx(5.527532537764433, rel=1e-12)
        p2 = InterferometerParams(g=1, alpha=1, r=1, phi=0.5, t1=0.7, t2=1.0)
        assert quadrature_second_moment(p2) == pytest.approx(
            60.99760928971997, rel=1e-10
        )

    def test_variance_nonnegative_on_random_grid(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            p = InterferometerParams(
                g=rng.uniform(0, 1.2),
                alpha=complex(rng.normal(), rng.normal()) * 0.7,
                r=rng.uniform(0, 1.2),
                t1=rng.uniform(0.1, 1),
                t2=rng.uniform(0.1, 1),
                phi=rng.uniform(0, math.pi),
            )
            stats = quadrature_stats(p)
            assert stats.variance >= -1e-9
            assert stats.second_moment >= stats.mean**2 - 1e-9


@given(
    g=st.floats(0, 1.2),
    re_a=st.floats(-1, 1),
    im_a=st.floats(-1, 1),
    r=st.floats(0, 1.2),
    t1=st.floats(0, 1),
    t2=st.floats(0, 1),
    phi=st.floats(-math.pi, math.pi),
)
@settings(max_examples=60, deadline=None)
def test_reality_everywhere(g, re_a, im_a, r, t1, t2, phi):
    """Hermitian expectations never trip the imaginary-part guard."""
    p = InterferometerParams(g=g, alpha=complex(re_a, im_a), r=r, t1=t1, t2=t2, phi=phi)
    try:
        quadrature_stats(p)
    except InternalConsistencyError as exc:  # pragma: no cover
        pytest.fail(f"reality violated: {exc}")


def test_slope_matches_finite_difference():
    p = InterferometerParams(g=1, alpha=1, r=0.6, phi=0.3)
    h = 1e-5
    fd = (
        quadrature_mean(p.replace(phi=p.phi + h))
        - quadrature_mean(p.replace(phi=p.phi - h))
    ) / (2 * h)
    assert dmean_dphi(p) == pytest.approx(fd, rel=1e-7)
