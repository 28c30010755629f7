"""Mode-cleaner cavity as a first-order low-pass filter on classical pump noise."""

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class ModeCleanerParams:
    linewidth_hz: float
    finesse: float = 1000.0

    def __post_init__(self):
        if not self.linewidth_hz > 0.0:
            raise DomainError(f"linewidth must be > 0, got {self.linewidth_hz}")
        if not self.finesse > 1.0:
            raise DomainError(f"finesse must be > 1, got {self.finesse}")


@dataclass(frozen=True)
class ExcessNoisePoint:
    """Noise level above the QNL (dB, >= 0) at one analysis frequency."""

    freq_hz: float
    excess_db: float

    def __post_init__(self):
        if not self.freq_hz > 0.0:
            raise DomainError(f"frequency must be > 0, got {self.freq_hz}")
        if not self.excess_db >= 0.0:
            raise DomainError(f"excess noise must be >= 0 dB, got {self.excess_db}")


# infrared seed cleaner and green pump cleaner
MC1 = ModeCleanerParams(linewidth_hz=1.0e6, finesse=700.0)
MC2 = ModeCleanerParams(linewidth_hz=600.0e3, finesse=1000.0)


def lowpass_power_transfer(f_hz, mc):
    """Power transfer ``1 / (1 + (f / HWHM)^2)`` of the cavity pole."""
    if not f_hz >= 0.0:
        raise DomainError(f"frequency must be >= 0, got {f_hz}")
    x = f_hz / (0.5 * mc.linewidth_hz)
    return 1.0 / (1.0 + x * x)


def filter_excess_noise(p, mc):
    """Attenuate the excess power above QNL; the vacuum floor passes untouched."""
    excess_lin = 10.0 ** (p.excess_db / 10.0) - 1.0
    total = 1.0 + excess_lin * lowpass_power_transfer(p.freq_hz, mc)
    out_db = 10.0 * math.log10(total)
    # dB round trip can overshoot the input by an ulp
    return ExcessNoisePoint(p.freq_hz, min(p.excess_db, max(0.0, out_db)))
