"""NOPA cavity arithmetic and the below-threshold squeezing spectrum.

Linewidths are full width at half maximum.  The normalized analysis frequency
passed to :func:`squeezing_spectrum` is ``f / (linewidth / 2)``, i.e. the
analysis frequency in units of the cavity half width.

The free spectral range uses the geometric length and the vacuum speed of
light; no crystal-index path correction is applied.
"""

import math
from dataclasses import dataclass

from .errors import AboveThresholdError, DomainError

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class CavityParams:
    """Output coupler transmission, round-trip loss and geometric length.

    The default standing-wave flag makes the round-trip path ``2 * length_m``.
    """

    t_out: float
    l_intra: float
    length_m: float
    standing_wave: bool = True

    def __post_init__(self):
        if not 0.0 < self.t_out < 1.0:
            raise DomainError(f"t_out must be in (0, 1), got {self.t_out}")
        if not 0.0 <= self.l_intra < 1.0:
            raise DomainError(f"l_intra must be in [0, 1), got {self.l_intra}")
        if not self.t_out + self.l_intra < 1.0:
            raise DomainError("t_out + l_intra must be < 1")
        if not self.length_m > 0.0:
            raise DomainError(f"length_m must be > 0, got {self.length_m}")

    @property
    def round_trip_m(self):
        return 2.0 * self.length_m if self.standing_wave else self.length_m


@dataclass(frozen=True)
class OperatingPoint:
    pump_power_mw: float
    threshold_power_mw: float
    analysis_freq_hz: float

    def __post_init__(self):
        if not self.threshold_power_mw > 0.0:
            raise DomainError("threshold power must be > 0")
        if not self.pump_power_mw >= 0.0:
            raise DomainError("pump power must be >= 0")
        if not self.pump_power_mw < self.threshold_power_mw:
            raise AboveThresholdError(
                f"pump {self.pump_power_mw} mW is at or above threshold "
                f"{self.threshold_power_mw} mW; only the below-threshold model is implemented"
            )
        if not self.analysis_freq_hz > 0.0:
            raise DomainError("analysis frequency must be > 0")


@dataclass(frozen=True)
class SqueezingSpectrumPoint:
    v_squeezed: float
    v_antisqueezed: float


def escape_efficiency(c):
    """``T / (T + L)``."""
    return c.t_out / (c.t_out + c.l_intra)


def finesse(c):
    """Low-loss finesse ``2 pi / (T + L)``."""
    return 2.0 * math.pi / (c.t_out + c.l_intra)


def free_spectral_range_hz(c):
    return SPEED_OF_LIGHT / c.round_trip_m


def linewidth_hz(c):
    """Cavity FWHM linewidth, FSR / finesse."""
    return free_spectral_range_hz(c) / finesse(c)


def normalized_frequency(c, f_hz):
    """Analysis frequency in units of the cavity half width (HWHM)."""
    return f_hz / (0.5 * linewidth_hz(c))


def pump_ratio_sigma(op):
    """Normalized pump amplitude ``sqrt(P / P_th)``."""
    if op.pump_power_mw >= op.threshold_power_mw:
        raise AboveThresholdError("pump at or above threshold")
    return math.sqrt(op.pump_power_mw / op.threshold_power_mw)


def sigma_from_gain(g):
    """Pump ratio that yields parametric gain ``g = 1 / (1 - sigma)^2``.

    The reported gain of 25 maps to sigma = 0.8, while 170 mW / 230 mW gives
    sigma = 0.86 (gain ~51).  Both routes are kept; callers pick one.
    """
    if not g > 1.0:
        raise DomainError(f"parametric gain must be > 1, got {g}")
    return 1.0 - 1.0 / math.sqrt(g)


def _check_spectrum_args(sigma, omega_norm, eta_total):
    if not 0.0 <= sigma < 1.0:
        raise DomainError(f"sigma must be in [0, 1), got {sigma}")
    if not omega_norm >= 0.0:
        raise DomainError(f"normalized frequency must be >= 0, got {omega_norm}")
    if not 0.0 < eta_total <= 1.0:
        raise DomainError(f"total efficiency must be in (0, 1], got {eta_total}")


def squeezing_spectrum(sigma, omega_norm, eta_total):
    """Squeezed and antisqueezed variances of a below-threshold OPA output.

    Parameters
    ----------
    sigma : float
        Pump ratio in ``[0, 1)``.
    omega_norm : float
        Analysis frequency over cavity HWHM.
    eta_total : float
        Escape, detection and mode-matching efficiencies combined.

    Returns
    -------
    SqueezingSpectrumPoint
        ``1 - eta 4 sigma / ((1 + sigma)^2 + omega^2)`` and
        ``1 + eta 4 sigma / ((1 - sigma)^2 + omega^2)``.
    """
    _check_spectrum_args(sigma, omega_norm, eta_total)
    w2 = omega_norm * omega_norm
    plus = (1.0 + sigma) ** 2 + w2
    minus = (1.0 - sigma) ** 2 + w2
    leak = 4.0 * sigma * (1.0 - eta_total)
    # same as 1 -/+ eta 4 sigma / (...) without the cancellation near sigma -> 1
    v_sq = (minus + leak) / plus
    v_anti = (plus - leak) / minus
    return SqueezingSpectrumPoint(v_sq, v_anti)


def effective_r(sigma):
    """Squeezing parameter of the lossless on-resonance output, ``ln((1+s)/(1-s))``."""
    if not 0.0 <= sigma < 1.0:
        raise DomainError(f"sigma must be in [0, 1), got {sigma}")
    return math.log((1.0 + sigma) / (1.0 - sigma))
