"""Flat ``key = value`` configuration files.

Blank lines and ``#`` comments are ignored; unknown keys are rejected and
missing keys take the defaults below.

=================  ==========  ============================================
key                default     meaning
=================  ==========  ============================================
t_out              0.052       NOPA output-coupler transmission
l_intra            0.0017      NOPA round-trip intracavity loss
length_m           0.054       NOPA geometric length (m)
standing_wave      true        round trip is twice the length
pump_mw            170         pump power (mW)
threshold_mw       230         oscillation threshold (mW)
analysis_hz        2e6         analysis frequency (Hz)
eta_det            0.90        photodiode efficiency
eta_mode           0.999       mode-matching efficiency
theta_deg          1.8         RMS phase-lock error (degrees)
elec_db            -11.3       electronic floor relative to the QNL (dB)
mc_linewidth_hz    600e3       pump mode-cleaner FWHM linewidth (Hz)
=================  ==========  ============================================
"""

from importlib import resources

from .budget_fit import PAPER_PARAMS, model_from_params
from .errors import ConfigError
from .mode_cleaner import ModeCleanerParams

DEFAULTS = {**PAPER_PARAMS, "mc_linewidth_hz": 600.0e3}
KEYS = tuple(DEFAULTS)

_TRUE = {"true", "yes", "1", "on"}
_FALSE = {"false", "no", "0", "off"}


def coerce(key, text, line=None):
    if key not in DEFAULTS:
        raise ConfigError(f"unknown config key {key!r}", line=line, key=key)
    if key == "standing_wave":
        low = text.strip().lower()
        if low in _TRUE:
            return True
        if low in _FALSE:
            return False
        raise ConfigError(f"{key} must be a boolean, got {text!r}", line=line, key=key)
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {text!r}", line=line, key=key) from None


def parse_config(text):
    cfg = dict(DEFAULTS)
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno, key=key)
        if key in seen:
            raise ConfigError(f"duplicate config key {key!r}", line=lineno, key=key)
        seen.add(key)
        cfg[key] = coerce(key, value, lineno)
    return cfg


def load_config(path=None):
    """Read a config file; ``None`` returns the built-in defaults."""
    if path is None:
        return dict(DEFAULTS)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


def model_params(cfg):
    """Subset of a config consumed by the budget model."""
    return {k: v for k, v in cfg.items() if k in PAPER_PARAMS}


def build_model(cfg):
    c, op, d, _ = model_from_params(model_params(cfg))
    return c, op, d, ModeCleanerParams(cfg["mc_linewidth_hz"])


def bundled_path(name):
    """Path of a data file shipped with the package (``paper.cfg``, fixture traces)."""
    return resources.files("nopa_budget") / "data" / name
