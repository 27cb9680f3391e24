"""SU(1,1) interferometer with an internal single-path squeezer.

Phase sensitivity under homodyne detection, photon-number benchmarks, and
quantum Fisher information, ideal and with photon loss, computed along two
independent routes: a closed-form moment-generating-function path and a
brute-force truncated Fock-space oracle.
"""

from .errors import (
    DegenerateConfigurationError,
    DivergentSensitivityError,
    InsufficientCutoffError,
    InternalConsistencyError,
    NonconvergedOracleError,
)
from .metrology import (
    LossyQfiReport,
    OptimalPhaseResult,
    QfiReport,
    SensitivityReport,
    optimal_phase,
    phase_sensitivity,
    qfi_ideal,
    qfi_lossy,
    sensitivity_curve,
    sql_hl,
    total_photon_number,
)
from .moments import (
    InterferometerParams,
    MomentTable,
    QuadratureStats,
    WForm,
    build_w_form,
    dmean_dphi,
    moment_table,
    q_moment,
    quadrature_mean,
    quadrature_second_moment,
    quadrature_stats,
)

__all__ = [
    "DegenerateConfigurationError",
    "DivergentSensitivityError",
    "InsufficientCutoffError",
    "InternalConsistencyError",
    "InterferometerParams",
    "LossyQfiReport",
    "MomentTable",
    "NonconvergedOracleError",
    "OptimalPhaseResult",
    "QfiReport",
    "QuadratureStats",
    "SensitivityReport",
    "WForm",
    "build_w_form",
    "dmean_dphi",
    "moment_table",
    "optimal_phase",
    "phase_sensitivity",
    "q_moment",
    "qfi_ideal",
    "qfi_lossy",
    "quadrature_mean",
    "quadrature_second_moment",
    "quadrature_stats",
    "sensitivity_curve",
    "sql_hl",
    "total_photon_number",
]

__version__ = "0.1.0"
