import pytest
from hypothesis import given, settings, strategies as st

from nopa_budget import DomainError
from nopa_budget.mode_cleaner import (
    MC2,
    ExcessNoisePoint,
    ModeCleanerParams,
    filter_excess_noise,
    lowpass_power_transfer,
)


def test_transfer_points():
    assert lowpass_power_transfer(0.0, MC2) == 1.0
    assert lowpass_power_transfer(300e3, MC2) == pytest.approx(0.5)
    assert lowpass_power_transfer(2e6, MC2) == pytest.approx(1 / (1 + (2000 / 300) ** 2))
    assert lowpass_power_transfer(2e6, MC2) == pytest.approx(0.0220, abs=1e-4)


def test_filter_one_db():
    out = filter_excess_noise(ExcessNoisePoint(2e6, 1.0), MC2)
    assert out.excess_db == pytest.approx(0.025, abs=1e-3)
    assert out.freq_hz == 2e6


def test_filter_zero_and_far_limit():
    assert filter_excess_noise(ExcessNoisePoint(2e6, 0.0), MC2).excess_db == 0.0
    assert filter_excess_noise(ExcessNoisePoint(1e12, 3.0), MC2).excess_db == pytest.approx(0, abs=1e-9)


def test_param_validation():
    with pytest.raises(DomainError):
        ModeCleanerParams(0.0)
    with pytest.raises(DomainError):
        ModeCleanerParams(1e6, finesse=1.0)
    with pytest.raises(DomainError):
        ExcessNoisePoint(2e6, -0.1)
    with pytest.raises(DomainError):
        lowpass_power_transfer(-1.0, MC2)


@settings(max_examples=300, deadline=None)
@given(st.floats(1.0, 1e8), st.floats(0.0, 20.0), st.floats(1e3, 1e7))
def test_filter_never_increases_and_stays_above_qnl(f, x, lw):
    mc = ModeCleanerParams(lw)
    out = filter_excess_noise(ExcessNoisePoint(f, x), mc)
    assert 0.0 <= out.excess_db <= x


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 1e8), st.floats(1.0, 1e7))
def test_transfer_decreasing(f, df):
    assert lowpass_power_transfer(f + df, MC2) < lowpass_power_transfer(f, MC2)
