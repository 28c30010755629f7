"""Detection losses, phase-lock jitter and electronic-noise handling.

The electronic floor ``elec_rel`` is a linear power relative to the QNL trace,
and both the QNL trace and the signal trace contain it.  Normalizing to the
displayed QNL therefore gives the affine pair

    measured = true * (1 - elec_rel) + elec_rel
    true     = (measured - elec_rel) / (1 - elec_rel)

under which the two reported channels (-6.08 -> -7.30 dB, -6.22 -> -7.50 dB)
imply one common floor of about -11.3 dB.
"""

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class DetectionParams:
    eta_det: float
    eta_mode: float
    theta_rms_deg: float
    elec_rel: float

    def __post_init__(self):
        for name in ("eta_det", "eta_mode"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise DomainError(f"{name} must be in (0, 1], got {value}")
        if not 0.0 <= self.theta_rms_deg < 90.0:
            raise DomainError(f"theta_rms_deg must be in [0, 90), got {self.theta_rms_deg}")
        if not 0.0 <= self.elec_rel < 1.0:
            raise DomainError(f"elec_rel must be in [0, 1), got {self.elec_rel}")


def total_efficiency(eta_esc, d):
    """Escape x detector x mode-matching efficiency."""
    if not 0.0 < eta_esc <= 1.0:
        raise DomainError(f"escape efficiency must be in (0, 1], got {eta_esc}")
    return eta_esc * d.eta_det * d.eta_mode


def apply_phase_jitter(p, theta_deg):
    """Mix antisqueezing into the squeezed quadrature for a lock error ``theta``.

    Uses the fixed-offset form ``v_sq cos^2 + v_anti sin^2`` with the RMS angle.
    """
    if not 0.0 <= theta_deg < 90.0:
        raise DomainError(f"phase jitter must be in [0, 90) degrees, got {theta_deg}")
    t = math.radians(theta_deg)
    s2 = math.sin(t) ** 2
    return p.v_squeezed * (1.0 - s2) + p.v_antisqueezed * s2


def _check_floor(elec_rel):
    if not 0.0 <= elec_rel < 1.0:
        raise DomainError(f"electronic floor must be in [0, 1), got {elec_rel}")


def add_electronic_noise(v_true, elec_rel):
    _check_floor(elec_rel)
    return v_true * (1.0 - elec_rel) + elec_rel


def subtract_electronic_noise(v_measured, elec_rel):
    """Remove the electronic floor from a QNL-normalized measured variance."""
    _check_floor(elec_rel)
    if not v_measured > elec_rel:
        raise DomainError(
            f"measured level {v_measured} is at or below the electronic floor {elec_rel}"
        )
    return (v_measured - elec_rel) / (1.0 - elec_rel)


def infer_electronic_noise(v_measured, v_corrected):
    """Floor that maps ``v_corrected`` to ``v_measured`` under the affine model."""
    if v_measured == v_corrected and 0.0 < v_corrected < 1.0:
        return 0.0
    if not 0.0 < v_corrected < v_measured < 1.0:
        raise DomainError(
            "need 0 < corrected < measured < 1, got "
            f"corrected={v_corrected}, measured={v_measured}"
        )
    return (v_measured - v_corrected) / (1.0 - v_corrected)
