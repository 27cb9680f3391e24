"""Normally ordered moments of the squeezed interferometer state.

The state of interest is S_a(r) U_ts(g) |alpha>_a |0>_b: a coherent state
and vacuum through a two-mode squeezer (gain g, phase 0) followed by a
single-mode squeezer on arm a with generator (r/2)(a'^2 - a^2).  All
normally ordered moments

    Q[x1, y1, x2, y2] = < a'^x1 a^y1 b'^x2 b^y2 >

derive from one generating function exp(w), where w is a quadratic+linear
polynomial in four formal variables (lam1 <-> a', lam2 <-> a, lam3 <-> b',
lam4 <-> b) whose coefficients are hyperbolic functions of g and r and
linear/antilinear in alpha.  Homodyne statistics of the full circuit
(phase shift phi, fictitious-beam-splitter transmittances t1 internal and
t2 external, second squeezer at gain g, phase pi) then assemble from a
fixed set of 15 moments with e^{+-i phi} and sqrt(t) weights; phi enters
only through those phase factors, so d<X>/dphi is available in closed
form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InternalConsistencyError
from .series import TruncatedSeries, extract_derivative, series_exp, total_degree

DEFAULT_DEGREE_CAP = 4

# tolerance on the imaginary part of Hermitian-observable expectations
_REALITY_TOL = 1e-9


@dataclass(frozen=True)
class InterferometerParams:
    """Physical configuration of the interferometer.

    g: gain of both squeezers (the second runs phase-flipped), g >= 0
    alpha: coherent amplitude at the a input
    r: single-mode squeezing on arm a, r >= 0
    t1: internal transmittance (loss between phase shift and second squeezer)
    t2: external transmittance (loss after the second squeezer)
    phi: phase shift on arm a
    """

    g: float
    alpha: complex
    r: float
    t1: float = 1.0
    t2: float = 1.0
    phi: float = 0.0

    def __post_init__(self):
        if self.g < 0:
            raise ValueError("gain g must be >= 0")
        if self.r < 0:
            raise ValueError("squeezing r must be >= 0")
        for name in ("t1", "t2"):
            t = getattr(self, name)
            if not 0.0 <= t <= 1.0:
                raise ValueError(f"transmittance {name} must lie in [0, 1], got {t}")

    def replace(self, **kw) -> "InterferometerParams":
        fields = dict(g=self.g, alpha=self.alpha, r=self.r, t1=self.t1, t2=self.t2, phi=self.phi)
        fields.update(kw)
        return InterferometerParams(**fields)


@dataclass(frozen=True, eq=False)
class WForm:
    """Quadratic + linear exponent of the moment generating function.

    quadratic is a symmetric 4x4 array Q with w_quad = lam^T Q lam, so the
    coefficient of lam_i^2 is Q[i, i] and the coefficient of the monomial
    lam_i lam_j (i != j) is 2 Q[i, j].  linear[i] is the coefficient of
    lam_{i+1}.  Depends only on (g, r, alpha); phases and transmittances
    enter the homodyne assembly, not the generating function.
    """

    quadratic: np.ndarray
    linear: np.ndarray

    def monomial_coefficient(self, i: int, j: int) -> complex:
        if i == j:
            return complex(self.quadratic[i, i])
        return complex(2.0 * self.quadratic[i, j])

    def to_series(self, degree_cap: int = DEFAULT_DEGREE_CAP) -> TruncatedSeries:
        terms: dict = {}
        for i in range(4):
            for j in range(i, 4):
                c = self.monomial_coefficient(i, j)
                if c != 0:
                    idx = [0, 0, 0, 0]
                    idx[i] += 1
                    idx[j] += 1
                    terms[tuple(idx)] = c
        for i in range(4):
            c = complex(self.linear[i])
            if c != 0:
                idx = [0, 0, 0, 0]
                idx[i] = 1
                terms[tuple(idx)] = c
        return TruncatedSeries.from_terms(terms, degree_cap)


def build_w_form(params: InterferometerParams) -> WForm:
    """Exponent of the moment generating function for (g, r, alpha)."""
    cr, sr = math.cosh(params.r), math.sinh(params.r)
    cg, sg = math.cosh(params.g), math.sinh(params.g)
    alpha = complex(params.alpha)
    ac = alpha.conjugate()

    quad = np.zeros((4, 4), dtype=complex)
    # lam1^2 and lam2^2: (1/2) cosh r sinh r plus the sinh^2 g echo
    quad[0, 0] = 0.5 * cr * sr + cr * sr * sg * sg
    quad[1, 1] = quad[0, 0]
    # full monomial coefficients, halved into the symmetric off-diagonal slots
    quad[0, 1] = 0.5 * (sr * sr + (cr * cr + sr * sr) * sg * sg)
    quad[0, 2] = 0.5 * (-cr * cg * sg)
    quad[0, 3] = 0.5 * (-sr * cg * sg)
    quad[1, 2] = 0.5 * (-sr * cg * sg)
    quad[1, 3] = 0.5 * (-cr * cg * sg)
    quad[2, 3] = 0.5 * (sg * sg)
    quad += np.triu(quad, 1).T

    lin = np.array(
        [
            ac * cr * cg + alpha * sr * cg,
            ac * sr * cg + alpha * cr * cg,
            -alpha * sg,
            -ac * sg,
        ],
        dtype=complex,
    )
    return WForm(quadratic=quad, linear=lin)


class MomentTable:
    """Moments of one (g, r, alpha) point, all read from a single expansion.

    The generating-function exponential is expanded once at construction;
    every requested moment is a coefficient lookup times factorials, cached.
    Immutable after construction.
    """

    def __init__(self, params: InterferometerParams, degree_cap: int = DEFAULT_DEGREE_CAP):
        self.params = params
        self.degree_cap = degree_cap
        self._expansion = series_exp(build_w_form(params).to_series(degree_cap))
        self._cache: dict = {}

    def moment(self, key) -> complex:
        key = tuple(int(k) for k in key)
        if len(key) != 4 or any(k < 0 for k in key):
            raise ValueError(f"moment key must be 4 non-negative integers, got {key!r}")
        if total_degree(key) > self.degree_cap:
            raise ValueError(
                f"moment order {key} exceeds degree cap {self.degree_cap}"
            )
        if key not in self._cache:
            self._cache[key] = extract_derivative(self._expansion, key)
        return self._cache[key]


@lru_cache(maxsize=512)
def _table(g: float, alpha: complex, r: float, degree_cap: int) -> MomentTable:
    return MomentTable(InterferometerParams(g=g, alpha=alpha, r=r), degree_cap)


def moment_table(params: InterferometerParams, degree_cap: int = DEFAULT_DEGREE_CAP) -> MomentTable:
    """Memoized moment table; phi, t1, t2 are irrelevant to the moments."""
    return _table(float(params.g), complex(params.alpha), float(params.r), degree_cap)


def q_moment(params: InterferometerParams, key, degree_cap: int = DEFAULT_DEGREE_CAP) -> complex:
    """Normally ordered moment ``< a'^x1 a^y1 b'^x2 b^y2 >`` of the internal state."""
    return moment_table(params, degree_cap).moment(key)


@dataclass(frozen=True)
class QuadratureStats:
    """Homodyne statistics of X = a' + a at the output port."""

    mean: float
    second_moment: float
    variance: float
    dmean_dphi: float


def _require_real(value: complex, what: str) -> float:
    if abs(value.imag) > _REALITY_TOL * max(1.0, abs(value.real)):
        raise InternalConsistencyError(
            f"{what} should be real, got imaginary part {value.imag:.3e}"
        )
    return value.real


def quadrature_stats(params: InterferometerParams) -> QuadratureStats:
    """Mean, second moment, variance and phase slope of X = a' + a.

    Assembles the output-port expectations from the 15 internal moments:
    the mean is sqrt(t1 t2) (e^{i phi} Q1000 + e^{-i phi} Q0100) cosh g
    + sqrt(t2) (Q0001 + Q0010) sinh g, and the second moment carries the
    corresponding two-phase and cross terms plus the vacuum unit from the
    commutator.  The phase derivative differentiates the e^{+-i phi}
    factors only, which is exact.
    """
    tab = moment_table(params)
    q = tab.moment
    cg, sg = math.cosh(params.g), math.sinh(params.g)
    rt12 = math.sqrt(params.t1 * params.t2)
    rt2 = math.sqrt(params.t2)
    e1 = cmath.exp(1j * params.phi)
    e1c = e1.conjugate()
    e2 = e1 * e1
    e2c = e2.conjugate()

    mean_c = rt12 * (e1 * q((1, 0, 0, 0)) + e1c * q((0, 1, 0, 0))) * cg
    mean_c += rt2 * (q((0, 0, 0, 1)) + q((0, 0, 1, 0))) * sg

    second_c = params.t1 * params.t2 * cg * cg * (
        2.0 * q((1, 1, 0, 0)) + e2 * q((2, 0, 0, 0)) + e2c * q((0, 2, 0, 0))
    )
    second_c += params.t2 * sg * sg * (
        2.0 * q((0, 0, 1, 1)) + 2.0 + q((0, 0, 2, 0)) + q((0, 0, 0, 2))
    )
    second_c += 2.0 * params.t2 * math.sqrt(params.t1) * sg * cg * (
        e1 * (q((1, 0, 0, 1)) + q((1, 0, 1, 0)))
        + e1c * (q((0, 1, 1, 0)) + q((0, 1, 0, 1)))
    )
    second_c += 1.0

    slope_c = rt12 * cg * 1j * (e1 * q((1, 0, 0, 0)) - e1c * q((0, 1, 0, 0)))

    mean = _require_real(mean_c, "<X>")
    second = _require_real(second_c, "<X^2>")
    slope = _require_real(slope_c, "d<X>/dphi")
    return QuadratureStats(
        mean=mean,
        second_moment=second,
        variance=second - mean * mean,
        dmean_dphi=slope,
    )


def quadrature_mean(params: InterferometerParams) -> float:
    """Output-port <a' + a>; real by Hermiticity (checked)."""
    return quadrature_stats(params).mean


def quadrature_second_moment(params: InterferometerParams) -> float:
    """Output-port <(a' + a)^2>; real by Hermiticity (checked)."""
    return quadrature_stats(params).second_moment


def dmean_dphi(params: InterferometerParams) -> float:
    """Exact phase derivative of the output-port quadrature mean."""
    return quadrature_stats(params).dmean_dphi
