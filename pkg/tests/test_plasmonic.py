# tests/test_plasmonic.py
"""Tests for the EOT sensor model: spectrum, dispersion and transduction."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.errors import (
    ConfigError,
    InsufficientDataError,
    InvariantViolationError,
    PreconditionError,
    RangeViolationError,
)
from src.plasmonic import (
    MetalPermittivity,
    NanoholeGeometry,
    SensorResponse,
    TransmissionSpectrum,
    dispersion_S,
    load_spectrum,
    lorentzian_slope,
    lorentzian_transmission,
    sensor_response,
    slope_dT_dlambda,
    synth_spectrum,
    transduce,
    transmission_at,
)
from src.utils import build_model

SPECTRUM_PATH = project_root / "data" / "eot_transmission_approx.csv"


# ============================================================================
# SPECTRUM
# ============================================================================

def test_shipped_spectrum_operating_point():
    spectrum = load_spectrum(SPECTRUM_PATH)
    assert transmission_at(spectrum, 795.0) == pytest.approx(0.66, abs=0.005)
    assert slope_dT_dlambda(spectrum, 795.0, 10.0) == pytest.approx(-0.006, abs=0.0003)
    print(f"✅ Loaded {len(spectrum.samples)} samples")


def test_interpolation_exact_at_samples():
    spectrum = TransmissionSpectrum.from_arrays([700.0, 710.0, 720.0], [0.2, 0.4, 0.3])
    assert transmission_at(spectrum, 710.0) == 0.4
    assert transmission_at(spectrum, 705.0) == pytest.approx(0.3)


def test_wavelength_outside_range():
    spectrum = load_spectrum(SPECTRUM_PATH)
    with pytest.raises(RangeViolationError):
        transmission_at(spectrum, 1000.0)


def test_slope_matches_lorentzian_peak():
    spectrum = synth_spectrum(center=760.0, depth=0.4757, width=50.0, baseline=0.3407, points=801)
    measured = slope_dT_dlambda(spectrum, 795.0, 3.0)
    expected = float(lorentzian_slope(795.0, 760.0, 0.4757, 50.0))
    assert measured == pytest.approx(expected, rel=5e-3)
    assert transmission_at(spectrum, 760.0) == pytest.approx(0.8164, abs=1e-4)


def test_slope_needs_enough_samples():
    spectrum = TransmissionSpectrum.from_arrays(np.arange(700.0, 720.0, 5.0), np.full(4, 0.5))
    with pytest.raises(InsufficientDataError):
        slope_dT_dlambda(spectrum, 710.0, 4.0)


def test_constant_spectrum_has_zero_response():
    wavelengths = np.linspace(700.0, 900.0, 81)
    spectrum = TransmissionSpectrum.from_arrays(wavelengths, np.full(wavelengths.size, 0.5))
    geom = NanoholeGeometry(pitch_d=400.0)
    metal = MetalPermittivity(real_part=-24.5, imag_part=1.83)
    response = sensor_response(spectrum, geom, metal, 795.0, 10.0)
    assert response.dT_dn == pytest.approx(0.0, abs=1e-12)


def test_lorentzian_helpers():
    assert lorentzian_transmission(760.0, 760.0, 0.4, 50.0, 0.3) == pytest.approx(0.7)
    assert lorentzian_slope(760.0, 760.0, 0.4, 50.0) == pytest.approx(0.0)
    with pytest.raises(PreconditionError):
        synth_spectrum(center=760.0, depth=0.9, width=50.0, baseline=0.3)


def test_malformed_spectrum_files(tmp_path):
    missing = tmp_path / "missing.csv"
    with pytest.raises(ConfigError):
        load_spectrum(missing)

    wrong_columns = tmp_path / "columns.csv"
    wrong_columns.write_text("lambda,T\n700,0.5\n710,0.6\n")
    with pytest.raises(ConfigError):
        load_spectrum(wrong_columns)

    unordered = tmp_path / "unordered.csv"
    unordered.write_text("wavelength_nm,transmission\n710,0.5\n700,0.6\n")
    with pytest.raises(ConfigError):
        load_spectrum(unordered)

    out_of_range = tmp_path / "range.csv"
    out_of_range.write_text("wavelength_nm,transmission\n700,0.5\n710,1.6\n")
    with pytest.raises(ConfigError):
        load_spectrum(out_of_range)


# ============================================================================
# DISPERSION
# ============================================================================

def test_dispersion_gold_like_metal():
    geom = NanoholeGeometry(pitch_d=400.0, mode_p=1, mode_q=0, medium_index_n=1.0)
    metal = MetalPermittivity(real_part=-24.5, imag_part=1.83)
    assert dispersion_S(geom, metal) == pytest.approx(425.0, abs=3.0)


def test_dispersion_real_permittivity():
    geom = NanoholeGeometry(pitch_d=400.0)
    assert dispersion_S(geom, MetalPermittivity(real_part=-2.0)) == pytest.approx(1131.4, abs=0.1)


def test_dispersion_higher_order_mode():
    metal = MetalPermittivity(real_part=-24.5, imag_part=1.83)
    first = dispersion_S(NanoholeGeometry(pitch_d=400.0), metal)
    diagonal = dispersion_S(NanoholeGeometry(pitch_d=400.0, mode_p=1, mode_q=1), metal)
    assert diagonal == pytest.approx(first / np.sqrt(2.0))


def test_dispersion_scales_linearly_with_pitch():
    metal = MetalPermittivity(real_part=-24.5, imag_part=1.83)
    base = dispersion_S(NanoholeGeometry(pitch_d=400.0), metal)
    for factor in (0.5, 1.5, 3.0):
        assert dispersion_S(NanoholeGeometry(pitch_d=400.0 * factor), metal) == pytest.approx(factor * base, rel=1e-12)


def test_dispersion_pole_and_zero_mode():
    with pytest.raises(PreconditionError):
        dispersion_S(NanoholeGeometry(pitch_d=400.0), MetalPermittivity(real_part=-1.0))
    with pytest.raises(PreconditionError):
        build_model(NanoholeGeometry, pitch_d=400.0, mode_p=0, mode_q=0)


# ============================================================================
# SENSOR RESPONSE AND TRANSDUCTION
# ============================================================================

def test_795nm_operating_point_dT_dn():
    spectrum = load_spectrum(SPECTRUM_PATH)
    geom = NanoholeGeometry(pitch_d=400.0)
    metal = MetalPermittivity(real_part=-24.5, imag_part=1.83)
    response = sensor_response(spectrum, geom, metal, 795.0, 10.0)
    assert response.dT_dn == pytest.approx(2.5, abs=0.9)
    assert response.dT_dn == pytest.approx(abs(response.dT_dlambda) * response.dispersion_S, rel=1e-12)


def test_sensor_response_product():
    response = SensorResponse.from_values(wavelength=795.0, t_at=0.66, dT_dlambda=0.004, dispersion_S=500.0)
    assert response.dT_dn == pytest.approx(2.0)


def test_sensor_response_inconsistent_values():
    with pytest.raises(InvariantViolationError):
        build_model(
            SensorResponse,
            wavelength=795.0,
            t_at=0.66,
            dT_dlambda=0.004,
            dispersion_S=500.0,
            dT_dn=3.0,
        )


def test_transduce():
    response = SensorResponse.from_values(wavelength=795.0, t_at=0.66, dT_dlambda=-0.01, dispersion_S=250.0)
    assert transduce(response, 1.0e-9, 1.5e14) == pytest.approx(3.75e5)
    assert transduce(response, 0.0, 1.5e14) == 0.0
    with pytest.raises(PreconditionError):
        transduce(response, -1.0e-9, 1.5e14)


# ============================================================================
# RUN TESTS
# ============================================================================

if __name__ == "__main__":
    pytest.main([__file__, "-v", "-s"])
