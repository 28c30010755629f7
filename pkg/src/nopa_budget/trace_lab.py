"""Zero-span spectrum-analyzer traces: synthesis, file I/O, reduction, QNL calibration.

File format (UTF-8, '.' decimal point, one record per line)::

    # rbw_hz=30000.0
    # vbw_hz=100.0
    # center_freq_hz=2000000.0
    # label=QNL
    time_s,level_db
    0.0,0.013
    0.005,-0.021

Levels are dB relative to the QNL.  Tabulated excess-noise data (for the
mode-cleaner filter) share the same layout with a ``freq_hz,excess_db``
column row and no required header keys.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CalibrationError, DomainError, TraceFormatError
from .mode_cleaner import ExcessNoisePoint

TRACE_KEYS = ("rbw_hz", "vbw_hz", "center_freq_hz", "label")
TRACE_COLUMNS = ("time_s", "level_db")
EXCESS_COLUMNS = ("freq_hz", "excess_db")

DEFAULT_DURATION_S = 1.0


@dataclass(frozen=True, eq=False)
class Trace:
    times_s: np.ndarray
    levels_db: np.ndarray
    rbw_hz: float
    vbw_hz: float
    center_freq_hz: float
    label: str = ""

    def __post_init__(self):
        t = np.asarray(self.times_s, dtype=float)
        y = np.asarray(self.levels_db, dtype=float)
        object.__setattr__(self, "times_s", t)
        object.__setattr__(self, "levels_db", y)
        if t.ndim != 1 or t.shape != y.shape:
            raise DomainError("times and levels must be 1-d arrays of equal length")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise DomainError("trace times must be strictly increasing")
        if not (self.rbw_hz > 0 and self.vbw_hz > 0):
            raise DomainError("rbw and vbw must be > 0")
        if self.vbw_hz > self.rbw_hz:
            raise DomainError("vbw must not exceed rbw")
        if "\n" in self.label:
            raise DomainError("label must be a single line")

    def __len__(self):
        return self.times_s.size

    def __eq__(self, other):
        if not isinstance(other, Trace):
            return NotImplemented
        return (
            self.metadata() == other.metadata()
            and self.label == other.label
            and np.array_equal(self.times_s, other.times_s)
            and np.array_equal(self.levels_db, other.levels_db)
        )

    def metadata(self):
        return (self.rbw_hz, self.vbw_hz, self.center_freq_hz)

    @property
    def linear(self):
        return 10.0 ** (self.levels_db / 10.0)


@dataclass(frozen=True)
class TraceStats:
    """Linear-domain reduction of a trace.

    ``std_db`` is the spread expressed as ``10 log10(1 + rel_std)``.
    """

    mean_db: float
    std_db: float
    n_samples: int
    rel_std: float = field(default=0.0)


def relative_power_std(rbw_hz, vbw_hz):
    """Relative standard deviation of video-averaged noise power, ``sqrt(2 vbw / rbw)``."""
    return math.sqrt(2.0 * vbw_hz / rbw_hz)


def synth_trace(mean_db, rbw_hz, vbw_hz, duration_s=DEFAULT_DURATION_S,
                sample_rate_hz=None, seed=0, center_freq_hz=2.0e6, label=""):
    """Random zero-span trace with the video-filter jitter of a noise measurement.

    Each sample is a gamma-distributed power with mean ``10^(mean_db/10)`` and
    ``rbw / (2 vbw)`` effective degrees of freedom, giving a relative standard
    deviation of ``sqrt(2 vbw / rbw)``.  Samples are spaced at the video
    Nyquist rate ``2 vbw`` unless ``sample_rate_hz`` is given.
    """
    if not (rbw_hz > 0 and vbw_hz > 0 and vbw_hz <= rbw_hz):
        raise DomainError("need 0 < vbw <= rbw")
    if sample_rate_hz is None:
        sample_rate_hz = 2.0 * vbw_hz
    if not (duration_s > 0 and sample_rate_hz > 0):
        raise DomainError("duration and sample rate must be > 0")
    if not math.isfinite(mean_db):
        raise DomainError("mean level must be finite")
    n = int(round(duration_s * sample_rate_hz))
    if n < 1:
        raise DomainError("duration too short for a single sample")
    shape = rbw_hz / (2.0 * vbw_hz)
    mean_lin = 10.0 ** (mean_db / 10.0)
    rng = np.random.default_rng(seed)
    power = rng.gamma(shape, mean_lin / shape, size=n)
    times = np.arange(n) / sample_rate_hz
    return Trace(times, 10.0 * np.log10(power), rbw_hz, vbw_hz, center_freq_hz, label)


def trace_stats(t):
    if len(t) < 2:
        raise DomainError("trace statistics need at least 2 samples")
    lin = t.linear
    mean = float(lin.mean())
    rel = float(lin.std(ddof=1)) / mean
    return TraceStats(10.0 * math.log10(mean), 10.0 * math.log10(1.0 + rel), int(lin.size), rel)


def qnl_calibrate(qnl, signal, power_qnl_uw, power_signal_uw, tol_fraction=0.05):
    """Level of ``signal`` relative to a power-matched coherent-state QNL trace (dB).

    The QNL reference is only valid when the coherent beam carries the same
    optical power as the signal; a relative mismatch above ``tol_fraction``
    raises :class:`CalibrationError`.
    """
    if qnl.metadata() != signal.metadata():
        raise CalibrationError(
            f"trace settings differ: QNL {qnl.metadata()} vs signal {signal.metadata()}"
        )
    if not power_qnl_uw > 0:
        raise CalibrationError("QNL reference power must be > 0")
    mismatch = abs(power_signal_uw - power_qnl_uw) / power_qnl_uw
    if mismatch > tol_fraction:
        raise CalibrationError(
            f"optical power mismatch {mismatch:.1%} exceeds tolerance {tol_fraction:.1%}"
        )
    return trace_stats(signal).mean_db - trace_stats(qnl).mean_db


def _read_table(path, columns, required_keys):
    header = {}
    rows = []
    seen_columns = False
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not seen_columns:
                if line.startswith("#"):
                    body = line[1:].strip()
                    if not body:
                        continue
                    key, sep, value = body.partition("=")
                    if not sep:
                        raise TraceFormatError(f"header line is not 'key=value': {line!r}", lineno)
                    header[key.strip()] = value.strip()
                    continue
                if not line.strip():
                    continue
                got = tuple(c.strip() for c in line.split(","))
                if got != columns:
                    raise TraceFormatError(
                        f"expected column row {','.join(columns)!r}, got {line!r}", lineno
                    )
                for key in required_keys:
                    if key not in header:
                        raise TraceFormatError(f"missing required header key {key!r}", lineno)
                seen_columns = True
                continue
            if not line.strip():
                continue
            parts = line.split(",")
            if len(parts) != len(columns):
                raise TraceFormatError(
                    f"expected {len(columns)} fields, got {len(parts)}", lineno
                )
            try:
                rows.append(tuple(float(p) for p in parts))
            except ValueError:
                raise TraceFormatError(f"non-numeric field in {line!r}", lineno) from None
    if not seen_columns:
        missing = [k for k in required_keys if k not in header]
        if missing:
            raise TraceFormatError(f"missing required header key {missing[0]!r}")
        raise TraceFormatError(f"missing column row {','.join(columns)!r}")
    return header, rows


def _header_float(header, key):
    try:
        return float(header[key])
    except ValueError:
        raise TraceFormatError(f"header key {key!r} is not a number: {header[key]!r}") from None


def read_trace(path):
    header, rows = _read_table(path, TRACE_COLUMNS, TRACE_KEYS)
    data = np.array(rows, dtype=float).reshape(-1, 2)
    try:
        return Trace(
            data[:, 0], data[:, 1],
            _header_float(header, "rbw_hz"),
            _header_float(header, "vbw_hz"),
            _header_float(header, "center_freq_hz"),
            header["label"],
        )
    except DomainError as exc:
        raise TraceFormatError(str(exc)) from exc


def format_trace(t):
    lines = [
        f"# rbw_hz={t.rbw_hz!r}",
        f"# vbw_hz={t.vbw_hz!r}",
        f"# center_freq_hz={t.center_freq_hz!r}",
        f"# label={t.label}",
        ",".join(TRACE_COLUMNS),
    ]
    lines += [f"{x!r},{y!r}" for x, y in zip(t.times_s.tolist(), t.levels_db.tolist())]
    return "\n".join(lines) + "\n"


def write_trace(t, path):
    Path(path).write_text(format_trace(t), encoding="utf-8")


def read_excess_table(path):
    """Read ``freq_hz,excess_db`` rows into :class:`ExcessNoisePoint` objects."""
    header, rows = _read_table(path, EXCESS_COLUMNS, ())
    points = []
    for f, x in rows:
        try:
            points.append(ExcessNoisePoint(f, x))
        except DomainError as exc:
            raise TraceFormatError(str(exc)) from exc
    return header, points


def write_excess_table(points, path, header=None):
    lines = [f"# {k}={v}" for k, v in (header or {}).items()]
    lines.append(",".join(EXCESS_COLUMNS))
    lines += [f"{p.freq_hz!r},{p.excess_db!r}" for p in points]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
