"""Full-chain noise budget, grid-search parameter fits and upgrade sweeps.

Chain: cavity output (lossless) -> efficiencies -> phase jitter -> electronic
floor.  Amplitude-sum and phase-difference combinations are treated
identically, so one variance describes both.

Parameters are handled as a flat mapping with the configuration key names
(``t_out``, ``l_intra``, ``length_m``, ``standing_wave``, ``pump_mw``,
``threshold_mw``, ``analysis_hz``, ``eta_det``, ``eta_mode``, ``theta_deg``,
``elec_db``) plus two overrides usable in fits: ``sigma`` replaces the pump
ratio derived from the powers and ``elec_rel`` replaces ``elec_db``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .detection_chain import (
    DetectionParams,
    add_electronic_noise,
    apply_phase_jitter,
    total_efficiency,
)
from .errors import DomainError
from .gaussian_core import CorrelationVariances, db_from_linear, duan_sum, linear_from_db
from .nopa_cavity import (
    CavityParams,
    OperatingPoint,
    escape_efficiency,
    finesse,
    linewidth_hz,
    normalized_frequency,
    pump_ratio_sigma,
    squeezing_spectrum,
)

FORMAT_VERSION = 1
DEPTH_CAP_DB = -60.0
STAGES = ("ideal", "efficiency", "jitter", "measured")
# fit quantities: stage names plus "corrected" (electronic floor removed)
QUANTITY_STAGE = {"ideal": "ideal", "efficiency": "efficiency", "jitter": "jitter",
                  "corrected": "jitter", "measured": "measured"}
GRID_POINTS = {1: 201, 2: 61, 3: 21}
MAX_FREE = 3

PAPER_PARAMS = {
    "t_out": 0.052,
    "l_intra": 0.0017,
    "length_m": 0.054,
    "standing_wave": True,
    "pump_mw": 170.0,
    "threshold_mw": 230.0,
    "analysis_hz": 2.0e6,
    "eta_det": 0.90,
    "eta_mode": 0.999,
    "theta_deg": 1.8,
    "elec_db": -11.3,
}


def model_from_params(params):
    """Build ``(CavityParams, OperatingPoint, DetectionParams, sigma)`` from a flat mapping.

    ``sigma`` is ``None`` unless ``params`` carries an explicit override.
    """
    p = {**PAPER_PARAMS, **params}
    c = CavityParams(p["t_out"], p["l_intra"], p["length_m"], bool(p["standing_wave"]))
    op = OperatingPoint(p["pump_mw"], p["threshold_mw"], p["analysis_hz"])
    elec = p["elec_rel"] if "elec_rel" in p else linear_from_db(p["elec_db"])
    d = DetectionParams(p["eta_det"], p["eta_mode"], p["theta_deg"], elec)
    return c, op, d, p.get("sigma")


@dataclass(frozen=True)
class BudgetReport:
    """Stage-by-stage prediction.  ``stages`` maps stage name to linear variance."""

    stages: dict
    v_antisqueezed: float
    sigma: float
    omega_norm: float
    eta_escape: float
    eta_total: float
    finesse: float
    linewidth_hz: float
    duan_corrected: tuple
    duan_measured: tuple
    params: dict = field(default_factory=dict)

    @property
    def measured(self):
        return self.stages["measured"]

    @property
    def corrected(self):
        return self.stages["jitter"]

    def stage_db(self, name):
        return db_from_linear(self.stages[name])

    def to_dict(self):
        return {
            "format_version": FORMAT_VERSION,
            "kind": "budget",
            "stages": {
                name: {"linear": self.stages[name], "db": self.stage_db(name)}
                for name in STAGES
            },
            "corrected_db": self.stage_db("jitter"),
            "measured_db": self.stage_db("measured"),
            "antisqueezed_db": db_from_linear(self.v_antisqueezed),
            "duan_corrected": {"sum": self.duan_corrected[0],
                               "entangled": self.duan_corrected[1]},
            "duan_measured": {"sum": self.duan_measured[0],
                              "entangled": self.duan_measured[1]},
            "sigma": self.sigma,
            "omega_norm": self.omega_norm,
            "eta_escape": self.eta_escape,
            "eta_total": self.eta_total,
            "finesse": self.finesse,
            "linewidth_hz": self.linewidth_hz,
            "params": dict(self.params),
        }


def predict(c, op, d, sigma=None):
    """Propagate the NOPA output through detection to the spectrum analyzer.

    Parameters
    ----------
    c, op, d : CavityParams, OperatingPoint, DetectionParams
    sigma : float, optional
        Pump ratio override; defaults to ``sqrt(P / P_th)`` from ``op``.

    Returns
    -------
    BudgetReport
    """
    if sigma is None:
        sigma = pump_ratio_sigma(op)
    omega = normalized_frequency(c, op.analysis_freq_hz)
    eta_esc = escape_efficiency(c)
    eta = total_efficiency(eta_esc, d)
    ideal = squeezing_spectrum(sigma, omega, 1.0)
    lossy = squeezing_spectrum(sigma, omega, eta)
    jittered = apply_phase_jitter(lossy, d.theta_rms_deg)
    measured = add_electronic_noise(jittered, d.elec_rel)
    stages = {
        "ideal": ideal.v_squeezed,
        "efficiency": lossy.v_squeezed,
        "jitter": jittered,
        "measured": measured,
    }
    echo = {
        "t_out": c.t_out, "l_intra": c.l_intra, "length_m": c.length_m,
        "standing_wave": c.standing_wave, "pump_mw": op.pump_power_mw,
        "threshold_mw": op.threshold_power_mw, "analysis_hz": op.analysis_freq_hz,
        "eta_det": d.eta_det, "eta_mode": d.eta_mode, "theta_deg": d.theta_rms_deg,
        "elec_rel": d.elec_rel,
    }
    return BudgetReport(
        stages=stages,
        v_antisqueezed=lossy.v_antisqueezed,
        sigma=sigma,
        omega_norm=omega,
        eta_escape=eta_esc,
        eta_total=eta,
        finesse=finesse(c),
        linewidth_hz=linewidth_hz(c),
        duan_corrected=duan_sum(CorrelationVariances(jittered, jittered)),
        duan_measured=duan_sum(CorrelationVariances(measured, measured)),
        params=echo,
    )


def predict_params(params):
    c, op, d, sigma = model_from_params(params)
    return predict(c, op, d, sigma)


@dataclass(frozen=True)
class FitResult:
    values: dict
    residual: float
    grid_shape: tuple
    grid_step: dict
    n_evaluations: int
    bounds: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "format_version": FORMAT_VERSION,
            "kind": "fit",
            "values": dict(self.values),
            "residual": self.residual,
            "grid_shape": list(self.grid_shape),
            "grid_step": dict(self.grid_step),
            "n_evaluations": self.n_evaluations,
            "bounds": {k: list(v) for k, v in self.bounds.items()},
        }


def _golden_min(f, a, b, tol=1e-12, max_iter=200):
    """Golden-section minimization of ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _validate_measurements(measured):
    measured = list(measured)
    if not measured:
        raise DomainError("fit needs at least one measurement")
    for quantity, value in measured:
        if quantity not in QUANTITY_STAGE:
            raise DomainError(
                f"unknown measured quantity {quantity!r}; choose from {sorted(QUANTITY_STAGE)}"
            )
        if not math.isfinite(value):
            raise DomainError(f"measurement {quantity} is not finite")
    return measured


def fit(measured, free, fixed=None, grid_points=None):
    """Least-squares fit of free model parameters to measured dB levels.

    Parameters
    ----------
    measured : sequence of (quantity, value_db)
        ``quantity`` is one of ``measured``, ``corrected``, ``jitter``,
        ``efficiency`` or ``ideal``.
    free : mapping name -> (lo, hi)
        At most three bounded parameters.
    fixed : mapping, optional
        Values for the remaining parameters; paper defaults fill the rest.
    grid_points : int, optional
        Points per free axis of the initial dense grid.

    The dense grid is searched first (ties resolve to the lowest index), then
    each coordinate is refined by golden-section search within one grid cell
    of the incumbent, cycling until the residual stops improving.
    """
    measured = _validate_measurements(measured)
    free = dict(free)
    if not free:
        raise DomainError("fit needs at least one free parameter")
    if len(free) > MAX_FREE:
        raise DomainError(f"at most {MAX_FREE} free parameters are supported")
    names = list(free)
    bounds = {}
    for name in names:
        try:
            lo, hi = (float(x) for x in free[name])
        except (TypeError, ValueError):
            raise DomainError(f"free parameter {name!r} needs (lo, hi) bounds") from None
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise DomainError(f"free parameter {name!r} must have finite bounds")
        if not lo < hi:
            raise DomainError(f"free parameter {name!r} needs lo < hi")
        bounds[name] = (lo, hi)
    base = dict(fixed or {})
    for name in names:
        base.pop(name, None)
    if "elec_rel" in names:
        base.pop("elec_db", None)

    n_evals = 0

    def residual(values):
        nonlocal n_evals
        n_evals += 1
        try:
            report = predict_params({**base, **values})
        except DomainError:
            return math.inf
        total = 0.0
        for quantity, value in measured:
            v = report.stages[QUANTITY_STAGE[quantity]]
            if not v > 0.0:
                return math.inf
            total += (db_from_linear(v) - value) ** 2
        return total

    n = grid_points or GRID_POINTS[len(names)]
    axes = [np.linspace(*bounds[name], n) for name in names]
    steps = {name: (bounds[name][1] - bounds[name][0]) / (n - 1) for name in names}
    shape = tuple(len(a) for a in axes)
    best_idx, best_val = None, math.inf
    for idx in np.ndindex(*shape):
        val = residual({name: float(axes[k][i]) for k, (name, i) in enumerate(zip(names, idx))})
        if val < best_val:
            best_idx, best_val = idx, val
    if best_idx is None:
        raise DomainError("no grid point yields a valid model")
    current = {name: float(axes[k][best_idx[k]]) for k, name in enumerate(names)}

    for _ in range(20):
        before = best_val
        for name in names:
            lo = max(bounds[name][0], current[name] - steps[name])
            hi = min(bounds[name][1], current[name] + steps[name])
            x, fx = _golden_min(lambda x: residual({**current, name: x}), lo, hi)
            if fx < best_val:
                current[name], best_val = x, fx
        if len(names) == 1 or not best_val < before * (1.0 - 1e-12):
            break

    return FitResult(current, best_val, shape, steps, n_evals, bounds)


@dataclass(frozen=True)
class SweepResult:
    best_sigma: float
    best_corrected_db: float
    capped: bool
    linewidth_hz: float
    eta_total: float
    analysis_hz: float

    def to_dict(self):
        return {
            "format_version": FORMAT_VERSION,
            "kind": "sweep",
            "best_sigma": self.best_sigma,
            "best_corrected_db": self.best_corrected_db,
            "capped": self.capped,
            "linewidth_hz": self.linewidth_hz,
            "eta_total": self.eta_total,
            "analysis_hz": self.analysis_hz,
        }


def _capped_db(v):
    if v <= linear_from_db(DEPTH_CAP_DB):
        return DEPTH_CAP_DB, True
    return db_from_linear(v), False


def sweep_upgrade(c_upgraded, d_upgraded, sigma_range, f_hz=2.0e6):
    """Pump ratio giving the deepest corrected (electronic-floor-free) level.

    The pump ratio is a free input rather than a rescaled threshold.  The grid
    ``sigma_range`` is searched first and the best point refined by
    golden-section search between its grid neighbours.
    """
    sigmas = [float(s) for s in sigma_range]
    if not sigmas:
        raise DomainError("sigma range is empty")
    if not all(0.0 <= s < 1.0 for s in sigmas):
        raise DomainError("sigma range must lie in [0, 1)")
    if not f_hz > 0.0:
        raise DomainError("analysis frequency must be > 0")
    sigmas = sorted(set(sigmas))
    omega = normalized_frequency(c_upgraded, f_hz)
    eta = total_efficiency(escape_efficiency(c_upgraded), d_upgraded)

    def corrected(s):
        return apply_phase_jitter(squeezing_spectrum(s, omega, eta), d_upgraded.theta_rms_deg)

    values = [corrected(s) for s in sigmas]
    i = int(np.argmin(values))
    best_s, best_v = sigmas[i], values[i]
    if len(sigmas) >= 2:
        lo = sigmas[max(i - 1, 0)]
        hi = sigmas[min(i + 1, len(sigmas) - 1)]
        s, v = _golden_min(corrected, lo, hi)
        if v < best_v:
            best_s, best_v = s, v
    depth, capped = _capped_db(best_v)
    return SweepResult(best_s, depth, capped, linewidth_hz(c_upgraded), eta, f_hz)
