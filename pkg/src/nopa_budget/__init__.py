"""Noise-budget modeling and data reduction for NOPA two-mode squeezed light.

All variances are normalized to the quantum noise limit (QNL) of a coherent
state with the same optical power, so a coherent state reads 1.0 (0 dB) and
the Duan separability bound is ``v_sum_x + v_diff_y = 2``.
"""

from .errors import (
    AboveThresholdError,
    CalibrationError,
    ConfigError,
    DomainError,
    TraceFormatError,
)
from .gaussian_core import (
    CorrelationVariances,
    TwoModeState,
    db_from_linear,
    duan_sum,
    linear_from_db,
    variances_from_r,
)
from .nopa_cavity import (
    CavityParams,
    OperatingPoint,
    SqueezingSpectrumPoint,
    escape_efficiency,
    finesse,
    free_spectral_range_hz,
    linewidth_hz,
    pump_ratio_sigma,
    sigma_from_gain,
    squeezing_spectrum,
)
from .detection_chain import (
    DetectionParams,
    add_electronic_noise,
    apply_phase_jitter,
    infer_electronic_noise,
    subtract_electronic_noise,
    total_efficiency,
)
from .mode_cleaner import (
    MC1,
    MC2,
    ExcessNoisePoint,
    ModeCleanerParams,
    filter_excess_noise,
    lowpass_power_transfer,
)
from .trace_lab import (
    Trace,
    TraceStats,
    qnl_calibrate,
    read_trace,
    synth_trace,
    trace_stats,
    write_trace,
)
from .budget_fit import BudgetReport, FitResult, SweepResult, fit, predict, sweep_upgrade

__version__ = "0.1.0"
