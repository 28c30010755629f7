import math

import pytest
from hypothesis import given, settings, strategies as st

from nopa_budget import AboveThresholdError, DomainError
from nopa_budget.nopa_cavity import (
    SPEED_OF_LIGHT,
    CavityParams,
    OperatingPoint,
    effective_r,
    escape_efficiency,
    finesse,
    free_spectral_range_hz,
    linewidth_hz,
    normalized_frequency,
    pump_ratio_sigma,
    sigma_from_gain,
    squeezing_spectrum,
)


def test_escape_efficiency_paper(paper_cavity, upgrade_cavity):
    assert escape_efficiency(paper_cavity) == pytest.approx(0.968, abs=5e-4)
    assert escape_efficiency(upgrade_cavity) == pytest.approx(0.986, abs=5e-4)
    assert escape_efficiency(CavityParams(0.05, 0.0, 0.05)) == 1.0


def test_finesse(paper_cavity, upgrade_cavity):
    assert finesse(paper_cavity) == pytest.approx(117.0, abs=0.5)
    assert finesse(upgrade_cavity) == pytest.approx(2 * math.pi / 0.1217)
    assert finesse(upgrade_cavity) == pytest.approx(51.6, abs=0.05)


def test_zero_total_loss_rejected():
    with pytest.raises(DomainError):
        CavityParams(0.0, 0.0, 0.054)


@pytest.mark.parametrize("kwargs", [
    dict(t_out=1.0, l_intra=0.0, length_m=0.05),
    dict(t_out=0.5, l_intra=0.6, length_m=0.05),
    dict(t_out=0.05, l_intra=-0.01, length_m=0.05),
    dict(t_out=0.05, l_intra=0.0, length_m=0.0),
])
def test_cavity_invariants(kwargs):
    with pytest.raises(DomainError):
        CavityParams(**kwargs)


def test_linewidth(paper_cavity, upgrade_cavity):
    assert linewidth_hz(paper_cavity) == pytest.approx(23.7e6, abs=0.5e6)
    fsr = SPEED_OF_LIGHT / (2 * 0.054)
    assert free_spectral_range_hz(paper_cavity) == pytest.approx(fsr)
    assert linewidth_hz(upgrade_cavity) == pytest.approx(53.8e6, abs=0.05e6)


def test_linewidth_scales_inversely_with_finesse():
    a = CavityParams(0.02, 0.0, 0.054)
    b = CavityParams(0.04, 0.0, 0.054)
    assert finesse(b) == pytest.approx(finesse(a) / 2)
    assert linewidth_hz(b) == pytest.approx(2 * linewidth_hz(a))


def test_ring_cavity_fsr():
    c = CavityParams(0.01, 0.0, 0.52, standing_wave=False)
    assert free_spectral_range_hz(c) == pytest.approx(SPEED_OF_LIGHT / 0.52)


def test_pump_ratio(paper_op):
    assert pump_ratio_sigma(paper_op) == pytest.approx(math.sqrt(170 / 230))
    assert pump_ratio_sigma(paper_op) == pytest.approx(0.8597, abs=1e-4)
    assert pump_ratio_sigma(OperatingPoint(0.0, 230.0, 2e6)) == 0.0


def test_at_threshold_rejected():
    with pytest.raises(AboveThresholdError):
        OperatingPoint(230.0, 230.0, 2e6)


@pytest.mark.parametrize("g, sigma", [(25.0, 0.8), (100.0, 0.9)])
def test_sigma_from_gain(g, sigma):
    assert sigma_from_gain(g) == pytest.approx(sigma, rel=1e-12)
    assert 1 / (1 - sigma_from_gain(g)) ** 2 == pytest.approx(g)


def test_sigma_from_gain_limits():
    assert sigma_from_gain(1 + 1e-12) == pytest.approx(0.0, abs=1e-6)
    with pytest.raises(DomainError):
        sigma_from_gain(1.0)


def test_spectrum_no_pump():
    p = squeezing_spectrum(0.0, 0.3, 0.8)
    assert (p.v_squeezed, p.v_antisqueezed) == (1.0, 1.0)


def test_spectrum_paper_point(paper_cavity):
    p = squeezing_spectrum(0.8597, 0.1688, 0.8703)
    # direct evaluation, written out independently of the implementation
    s, w, eta = 0.8597, 0.1688, 0.8703
    assert p.v_squeezed == pytest.approx(1 - eta * 4 * s / ((1 + s) ** 2 + w ** 2))
    assert p.v_squeezed == pytest.approx(0.1417, abs=1e-4)
    assert p.v_antisqueezed == pytest.approx(63.1, abs=0.1)
    assert normalized_frequency(paper_cavity, 2e6) == pytest.approx(0.1688, abs=5e-4)


def test_spectrum_ideal_limit():
    assert squeezing_spectrum(1 - 1e-9, 0.0, 1.0).v_squeezed == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("args", [(1.0, 0.1, 0.5), (-0.1, 0.1, 0.5),
                                  (0.5, 0.1, 0.0), (0.5, 0.1, 1.1), (0.5, -1.0, 0.5)])
def test_spectrum_domain(args):
    with pytest.raises(DomainError):
        squeezing_spectrum(*args)


sigmas = st.floats(0.0, 0.999)
omegas = st.floats(0.0, 20.0)
etas = st.floats(1e-3, 1.0)


@settings(max_examples=300, deadline=None)
@given(sigmas, st.floats(1e-4, 0.5), omegas, etas)
def test_spectrum_monotone_in_sigma(s, ds, w, eta):
    s2 = min(s + ds, 0.9999)
    a, b = squeezing_spectrum(s, w, eta), squeezing_spectrum(s2, w, eta)
    assert b.v_squeezed <= a.v_squeezed * (1 + 1e-15)
    assert b.v_antisqueezed >= a.v_antisqueezed * (1 - 1e-15)


@settings(max_examples=300, deadline=None)
@given(sigmas, omegas, st.floats(1e-4, 5.0), etas)
def test_spectrum_monotone_in_omega(s, w, dw, eta):
    a, b = squeezing_spectrum(s, w, eta), squeezing_spectrum(s, w + dw, eta)
    assert b.v_squeezed >= a.v_squeezed * (1 - 1e-15)
    assert b.v_antisqueezed <= a.v_antisqueezed * (1 + 1e-15)


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-4, 0.999), st.floats(0.0, 20.0), st.floats(1e-3, 0.999))
def test_spectrum_ordering_and_uncertainty(s, w, eta):
    p = squeezing_spectrum(s, w, eta)
    assert 0 < p.v_squeezed <= 1 <= p.v_antisqueezed
    assert p.v_squeezed * p.v_antisqueezed > 1.0


@settings(max_examples=300, deadline=None)
@given(sigmas, omegas)
def test_lossless_output_is_minimum_uncertainty(s, w):
    # pure two-mode squeezed output at every frequency, not just on resonance
    p = squeezing_spectrum(s, w, 1.0)
    assert p.v_squeezed * p.v_antisqueezed == pytest.approx(1.0, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 0.99))
def test_lossless_on_resonance_identities(s):
    p = squeezing_spectrum(s, 0.0, 1.0)
    assert p.v_squeezed == pytest.approx(((1 - s) / (1 + s)) ** 2, rel=1e-12, abs=1e-15)
    assert p.v_antisqueezed == pytest.approx(((1 + s) / (1 - s)) ** 2, rel=1e-12)
    assert p.v_squeezed * p.v_antisqueezed == pytest.approx(1.0, rel=1e-12)
    r = effective_r(s)
    assert r == pytest.approx(-0.5 * math.log(((1 - s) / (1 + s)) ** 2), rel=1e-12, abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.001, 0.5), st.floats(0.001, 0.4), st.floats(0.0, 0.1))
def test_escape_monotone(t, dt, loss):
    c1 = CavityParams(t, loss, 0.05)
    c2 = CavityParams(t + dt, loss, 0.05)
    assert escape_efficiency(c2) >= escape_efficiency(c1)
    c3 = CavityParams(t, loss + 0.01, 0.05)
    assert escape_efficiency(c3) < escape_efficiency(c1)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-4, 0.5), st.floats(0.0, 0.4), st.floats(1e-3, 10.0), st.booleans())
def test_linewidth_finesse_fsr_triangle(t, loss, length, standing):
    c = CavityParams(t, loss, length, standing)
    assert linewidth_hz(c) * finesse(c) == pytest.approx(free_spectral_range_hz(c), rel=1e-9)
