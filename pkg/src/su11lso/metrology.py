"""Headline metrology quantities of the squeezed interferometer.

Phase sensitivity by error propagation on the output quadrature, total
internal photon number with its shot-noise (1/sqrt(N)) and Heisenberg
(1/N) benchmarks, the pure-state quantum Fisher information
F = 4(Q2200 + Q1100) - 4 Q1100^2 with the Cramer-Rao bound 1/sqrt(F), and
the optimized lossy Fisher information
F_L = 4 F eta <n_a> / ((1 - eta) F + 4 eta <n_a>).

N, the benchmarks, and F always refer to the ideal internal state before
the second squeezer; loss and phase never enter them.  The phase search
scans a grid over one period half and polishes the best point by golden
section, which copes with the multiple stationary points the sensitivity
curve develops at strong squeezing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateConfigurationError, DivergentSensitivityError
from .moments import InterferometerParams, moment_table, quadrature_stats

SLOPE_FLOOR = 1e-12
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_BRACKET = (1e-3, math.pi - 1e-3)
DEFAULT_OPT_GRID = 2001


@dataclass(frozen=True)
class SensitivityReport:
    params: InterferometerParams
    delta_phi: float
    mean: float
    variance: float
    dmean_dphi: float


@dataclass(frozen=True)
class QfiReport:
    n_total: float
    sql: float
    hl: float
    fisher: float
    qcrb: float


@dataclass(frozen=True)
class LossyQfiReport:
    eta: float
    fisher_lossy: float
    qcrb_lossy: float


@dataclass(frozen=True)
class OptimalPhaseResult:
    phi_opt: float
    delta_phi_min: float
    bracket: tuple[float, float]
    n_grid: int


def phase_sensitivity(params: InterferometerParams) -> SensitivityReport:
    """Error-propagation sensitivity sqrt(Var X) / |d<X>/dphi| at the output."""
    stats = quadrature_stats(params)
    if abs(stats.dmean_dphi) < SLOPE_FLOOR:
        raise DivergentSensitivityError(
            f"|d<X>/dphi| = {abs(stats.dmean_dphi):.2e} below {SLOPE_FLOOR}: "
            "no phase information at this operating point"
        )
    delta = math.sqrt(max(stats.variance, 0.0)) / abs(stats.dmean_dphi)
    return SensitivityReport(
        params=params,
        delta_phi=delta,
        mean=stats.mean,
        variance=stats.variance,
        dmean_dphi=stats.dmean_dphi,
    )


def total_photon_number(params: InterferometerParams) -> float:
    """Mean photon number of the internal state, N = Q1100 + Q0011."""
    tab = moment_table(params)
    n = tab.moment((1, 1, 0, 0)) + tab.moment((0, 0, 1, 1))
    return float(n.real)


def sql_hl(params: InterferometerParams) -> tuple[float, float]:
    """(1/sqrt(N), 1/N) benchmarks from the ideal internal photon number."""
    n = total_photon_number(params)
    if n <= 0.0:
        raise DegenerateConfigurationError("benchmarks undefined at N = 0")
    return 1.0 / math.sqrt(n), 1.0 / n


def qfi_ideal(params: InterferometerParams) -> QfiReport:
    """Pure-state Fisher information and the associated bounds.

    F = 4 (Q2200 + Q1100) - 4 Q1100^2 is 4 Var(n_a) of the internal state;
    the Cramer-Rao bound uses a single measurement (v = 1).
    """
    tab = moment_table(params)
    q1100 = tab.moment((1, 1, 0, 0)).real
    q2200 = tab.moment((2, 2, 0, 0)).real
    fisher = 4.0 * (q2200 + q1100) - 4.0 * q1100 * q1100
    if fisher <= 0.0:
        raise DegenerateConfigurationError(
            f"Fisher information {fisher:.3e} <= 0: vacuum-degenerate configuration"
        )
    n = total_photon_number(params)
    sql, hl = sql_hl(params)
    return QfiReport(
        n_total=n,
        sql=sql,
        hl=hl,
        fisher=fisher,
        qcrb=1.0 / math.sqrt(fisher),
    )


def qfi_lossy(params: InterferometerParams, eta: float) -> LossyQfiReport:
    """Optimized lossy Fisher information F_L and its Cramer-Rao bound.

    F_L = 4 F eta <n_a> / ((1 - eta) F + 4 eta <n_a>); the eta = 0 and
    eta = 1 limits are returned exactly, and a vanishing F_L reports an
    unbounded phase uncertainty.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    tab = moment_table(params)
    n_a = tab.moment((1, 1, 0, 0)).real
    fisher = qfi_ideal(params).fisher
    if n_a <= 0.0 and fisher <= 0.0:
        raise DegenerateConfigurationError("lossy Fisher information undefined for vacuum")
    if eta == 1.0:
        fl = fisher
    elif eta == 0.0:
        fl = 0.0
    else:
        fl = 4.0 * fisher * eta * n_a / ((1.0 - eta) * fisher + 4.0 * eta * n_a)
    qcrb = math.inf if fl == 0.0 else 1.0 / math.sqrt(fl)
    return LossyQfiReport(eta=eta, fisher_lossy=fl, qcrb_lossy=qcrb)


def sensitivity_curve(
    params: InterferometerParams, phis: np.ndarray
) -> np.ndarray:
    """Delta-phi over a phase grid; divergent points come back as +inf.

    The moments are phase-independent, so the whole curve reuses one moment
    table and only the e^{+-i phi} weights vary.
    """
    tab = moment_table(params)
    q = tab.moment
    cg, sg = math.cosh(params.g), math.sinh(params.g)
    rt12 = math.sqrt(params.t1 * params.t2)
    rt2 = math.sqrt(params.t2)
    e1 = np.exp(1j * np.asarray(phis))
    e1c = e1.conj()
    e2 = e1 * e1

    mean = (rt12 * cg) * (e1 * q((1, 0, 0, 0)) + e1c * q((0, 1, 0, 0)))
    mean = mean + rt2 * sg * (q((0, 0, 0, 1)) + q((0, 0, 1, 0)))
    second = (params.t1 * params.t2 * cg * cg) * (
        2.0 * q((1, 1, 0, 0)) + e2 * q((2, 0, 0, 0)) + e2.conj() * q((0, 2, 0, 0))
    )
    second = second + (params.t2 * sg * sg) * (
        2.0 * q((0, 0, 1, 1)) + 2.0 + q((0, 0, 2, 0)) + q((0, 0, 0, 2))
    )
    second = second + (2.0 * params.t2 * math.sqrt(params.t1) * sg * cg) * (
        e1 * (q((1, 0, 0, 1)) + q((1, 0, 1, 0)))
        + e1c * (q((0, 1, 1, 0)) + q((0, 1, 0, 1)))
    )
    second = second + 1.0
    slope = (rt12 * cg) * 1j * (e1 * q((1, 0, 0, 0)) - e1c * q((0, 1, 0, 0)))

    variance = np.maximum(second.real - mean.real**2, 0.0)
    out = np.full(len(phis), np.inf)
    ok = np.abs(slope.real) >= SLOPE_FLOOR
    out[ok] = np.sqrt(variance[ok]) / np.abs(slope.real[ok])
    return out


def optimal_phase(
    params: InterferometerParams,
    bracket: tuple[float, float] = DEFAULT_BRACKET,
    n_grid: int = DEFAULT_OPT_GRID,
) -> OptimalPhaseResult:
    """Phase minimizing delta-phi: grid scan plus golden-section polish.

    Divergent grid points are skipped; if every point diverges (alpha = 0)
    there is no informative phase and the search fails.  The refinement is
    deterministic and polishes the best grid point to machine-level phase
    resolution.
    """
    lo, hi = bracket
    if not (lo < hi and lo > 0.0 and hi < math.pi):
        raise ValueError("bracket must satisfy 0 < lo < hi < pi")
    if n_grid < 2:
        raise ValueError("n_grid must be at least 2")
    phis = np.linspace(lo, hi, n_grid)
    curve = sensitivity_curve(params, phis)
    if not np.any(np.isfinite(curve)):
        raise DivergentSensitivityError(
            "every phase in the bracket is uninformative (alpha = 0?)"
        )
    best = int(np.argmin(curve))
    a = phis[max(best - 1, 0)]
    b = phis[min(best + 1, n_grid - 1)]

    def f(phi: float) -> float:
        return float(sensitivity_curve(params, np.array([phi]))[0])

    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > 1e-12:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    phi_opt = 0.5 * (a + b)
    candidates = [(f(phi_opt), phi_opt), (float(curve[best]), float(phis[best]))]
    delta_min, phi_opt = min(candidates)
    return OptimalPhaseResult(
        phi_opt=phi_opt,
        delta_phi_min=delta_min,
        bracket=bracket,
        n_grid=n_grid,
    )
