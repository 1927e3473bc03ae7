# tests/test_experiment.py
"""Tests for calibration, sensitivity extraction and the voltage-ramp experiment."""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.errors import InfeasibleSensitivityError, InsufficientDataError, PreconditionError
from src.experiment import (
    ChamberCalibration,
    budget_estimate,
    build_scenario,
    calibrate_dn,
    calibration_table,
    confidence_z,
    demo_snapshots,
    enhancement,
    enhancement_from_ratio,
    fit_and_extract,
    load_scenario_config,
    photon_flux,
    run_ramp,
    sensitivity_report,
    single_coherent_equivalent,
)
from src.experiment.constants import NOISE_ONLY_AMPLITUDE_STD
from src.experiment.ramp import detected_counts, noise_statistics
from src.experiment.sensitivity import detection_threshold
from src.quantum import TwinBeamSource
from src.signal_chain import per_root_hz
from src.state import CONFIGURATIONS, NoiseStatistics

SCENARIO_PATH = project_root / "scenarios" / "eot_795nm_ramp.yaml"


@pytest.fixture(scope="module")
def scenario():
    return build_scenario(load_scenario_config(SCENARIO_PATH))


@pytest.fixture(scope="module")
def deterministic_report(scenario):
    return sensitivity_report(scenario, run_ramp(scenario))


# ============================================================================
# PHOTON BUDGET
# ============================================================================

def test_photon_flux_at_stabilized_power():
    assert photon_flux(70e-6, 795.0) == pytest.approx(2.80e14, rel=0.01)
    assert photon_flux(140e-6, 795.0) == pytest.approx(2 * photon_flux(70e-6, 795.0))
    assert photon_flux(0.0, 795.0) == 0.0
    with pytest.raises(PreconditionError):
        photon_flux(-1.0, 795.0)


def test_budget_estimate_reported_parameters():
    """T = 0.66, dT/dn = 2.5, 1.5e14 counts in 1 Hz, N = 500."""
    dn_min = budget_estimate(0.66, 2.5, 3.0e14, 500)
    assert dn_min == pytest.approx(1.19e-9, rel=0.01)
    assert 1e-9 / 1.5 < dn_min < 1e-9 * 1.5
    print(f"✅ Budget dn_min = {dn_min:.3e} RIU/sqrt(Hz)")


def test_budget_estimate_scaling():
    base = budget_estimate(0.66, 2.5, 3.0e14, 1)
    assert base / budget_estimate(0.66, 2.5, 3.0e14, 100) == pytest.approx(10.0)
    assert budget_estimate(0.66, 2.5, 6.0e14, 1) == pytest.approx(base / math.sqrt(2.0))
    assert budget_estimate(0.66, 2.5, 3.0e14, 1, bandwidth=100.0) == pytest.approx(base)


def test_budget_estimate_zero_slope():
    with pytest.raises(InfeasibleSensitivityError):
        budget_estimate(0.66, 0.0, 3.0e14, 500)
    with pytest.raises(PreconditionError):
        budget_estimate(0.66, 2.5, 0.0, 500)


# ============================================================================
# CALIBRATION
# ============================================================================

def test_calibrate_dn():
    cal = ChamberCalibration(
        wavelength=795.0,
        path_length=6.35,
        scan_amplitude=2.0,
        modulation_amplitude_per_drive=0.1,
    )
    assert calibrate_dn(cal, 1.0) == pytest.approx(1.99e-6, rel=0.01)
    assert calibrate_dn(cal, 0.0) == 0.0
    assert calibrate_dn(cal, 3.0) == pytest.approx(3 * calibrate_dn(cal, 1.0))
    with pytest.raises(PreconditionError):
        calibrate_dn(cal, -0.5)


def test_calibration_table_rows():
    cal = ChamberCalibration(
        wavelength=795.0,
        path_length=6.35,
        scan_amplitude=2.0,
        modulation_amplitude_per_drive=0.01,
    )
    table = calibration_table(cal, [0.0, 10.0])
    assert table[0] == {"drive_v": 0.0, "modulation_v": 0.0, "dn_riu": 0.0}
    assert table[1]["modulation_v"] == pytest.approx(0.1)
    assert table[1]["dn_riu"] == pytest.approx(1.99e-6, rel=0.01)


# ============================================================================
# THRESHOLD, FIT AND ENHANCEMENT
# ============================================================================

def test_confidence_threshold():
    assert confidence_z(0.99) == pytest.approx(2.3263, abs=1e-4)
    assert detection_threshold(0.0, NOISE_ONLY_AMPLITUDE_STD, 0.99) == pytest.approx(0.8224, abs=1e-4)
    with pytest.raises(PreconditionError):
        confidence_z(1.0)


def test_fit_noiseless_line_through_origin():
    z = confidence_z(0.99)
    noise = NoiseStatistics(mean=0.0, std=1.0 / z, samples=0, confidence=0.99, threshold=1.0)
    slope = 4.0e8
    series = [(dn, slope * dn) for dn in np.linspace(0.0, 1.0e-7, 51)]
    result = fit_and_extract(series, noise, 0.99, bandwidth=100.0)
    assert result.dn_min_raw == pytest.approx(1.0 / slope, rel=1e-9)
    assert result.dn_min_per_rtHz == pytest.approx(1.0 / slope / 10.0, rel=1e-9)
    assert result.points_used == 49


def test_fit_needs_points_above_threshold():
    noise = noise_statistics(None, 0.99)
    series = [(dn, 1.0e6 * dn) for dn in np.linspace(0.0, 1.0e-6, 11)]
    with pytest.raises(InsufficientDataError):
        fit_and_extract(series, noise, 0.99, bandwidth=1.0)


def test_fit_points_chosen_by_index_change():
    """Noisy readings near the threshold must not bias the crossing."""
    noise = noise_statistics(None, 0.99)
    dns = np.linspace(0.0, 2.0e-8, 101)
    slope = noise.threshold / 5.0e-9
    rng = np.random.default_rng(20)
    crossings = []
    for _ in range(400):
        readings = slope * dns + NOISE_ONLY_AMPLITUDE_STD * rng.standard_normal(dns.size)
        crossings.append(fit_and_extract(list(zip(dns, readings)), noise, 0.99, bandwidth=1.0).dn_min_raw)
    assert np.mean(crossings) == pytest.approx(5.0e-9, rel=0.03)


def test_fit_uses_points_beyond_first_crossing():
    noise = NoiseStatistics(mean=0.0, std=0.0, samples=0, confidence=0.99, threshold=0.0)
    dns = np.linspace(0.0, 1.0e-7, 51)
    series = [(dn, 4.0e8 * dn - 1.0) for dn in dns]
    result = fit_and_extract(series, noise, 0.99, bandwidth=1.0)
    assert result.dn_min_raw == pytest.approx(2.5e-9, rel=1e-9)
    assert result.points_used == 49


def test_per_root_hz_commutes_with_crossing():
    noise = noise_statistics(None, 0.99)
    bandwidth = 100.0
    series = [(dn, 3.0e7 * dn + 0.05 * math.sin(i)) for i, dn in enumerate(np.linspace(0.0, 2.0e-7, 101))]
    raw = fit_and_extract(series, noise, 0.99, bandwidth)
    scaled = [(dn / math.sqrt(bandwidth), s) for dn, s in series]
    normalized_first = fit_and_extract(scaled, noise, 0.99, 1.0)
    assert raw.dn_min_per_rtHz == pytest.approx(per_root_hz(raw.dn_min_raw, bandwidth), rel=1e-12)
    assert normalized_first.dn_min_raw == pytest.approx(raw.dn_min_per_rtHz, rel=1e-9)


def test_enhancement_of_equal_sensitivities_is_zero():
    for dn in (1.0e-10, 8.6e-10, 3.0e-6):
        assert enhancement(dn, dn) == 0.0


def test_enhancement_formulas():
    assert enhancement_from_ratio(0.3981) == pytest.approx(0.58, abs=0.01)
    assert enhancement_from_ratio(0.1259) == pytest.approx(1.82, abs=0.02)
    assert enhancement_from_ratio(1.0) == 0.0
    assert enhancement(1.5e-9, 1.0e-9) == pytest.approx(0.5)
    assert single_coherent_equivalent(math.sqrt(2.0)) == pytest.approx(1.0)
    with pytest.raises(PreconditionError):
        enhancement_from_ratio(0.0)


# ============================================================================
# VOLTAGE RAMP
# ============================================================================

def test_scenario_probe_loss(scenario):
    assert scenario.sensor.t_at == pytest.approx(0.66, abs=0.005)
    assert scenario.probe_loss.transmission == pytest.approx(0.482, abs=0.005)
    assert scenario.conj_loss.transmission == 0.95
    assert detected_counts(scenario) == pytest.approx(photon_flux(70e-6, 795.0) / 200.0)


def test_deterministic_ramp_is_reproducible(scenario):
    first = run_ramp(scenario)
    second = run_ramp(scenario)
    assert first == second
    assert set(first.series) == set(CONFIGURATIONS)
    assert first.residual_squeezing_db == pytest.approx(4.0, abs=0.3)


def test_ramp_enhancements(deterministic_report):
    report = deterministic_report
    ratio = report.configurations["twin"].noise_ratio
    assert report.enhancement_vs_balanced == pytest.approx(enhancement_from_ratio(ratio), rel=0.02)
    assert report.enhancement_vs_balanced == pytest.approx(0.56, abs=0.05)
    assert report.enhancement_vs_single == pytest.approx(0.275, abs=0.02)
    assert report.lossless_enhancement == pytest.approx(1.82, abs=0.02)
    print(f"✅ Enhancement vs balanced {report.enhancement_vs_balanced:.3f}, "
          f"vs single {report.enhancement_vs_single:.3f}")


def test_ramp_coherent_sensitivity_order_of_magnitude(deterministic_report):
    dn = {name: r.fit.dn_min_per_rtHz for name, r in deterministic_report.configurations.items()}
    assert 8.6e-10 / 2 < dn["coherent"] < 8.6e-10 * 2
    assert dn["twin"] < dn["single"] < dn["coherent"] < dn["matched_pair"]


def test_ramp_agrees_with_budget(scenario, deterministic_report):
    """Single-beam extraction sits z/2 above the budget, from the threshold construction."""
    single = deterministic_report.configurations["single"].fit.dn_min_per_rtHz
    input_flux = photon_flux(scenario.post_sensor_power, scenario.wavelength) / scenario.sensor.t_at
    budget = budget_estimate(
        scenario.sensor.t_at,
        scenario.sensor.dT_dn,
        input_flux,
        500,
        scenario.detection_bandwidth,
    )
    offset = confidence_z(0.99) / 2.0
    assert single / budget == pytest.approx(offset, rel=1e-6)
    assert single / offset == pytest.approx(budget, rel=0.10)


def test_stochastic_ramp_needs_seed(scenario):
    with pytest.raises(PreconditionError):
        run_ramp(scenario, mode="stochastic")


def test_stochastic_ramp_seeded(scenario):
    first = run_ramp(scenario, mode="stochastic", seed=11)
    again = run_ramp(scenario, mode="stochastic", seed=11)
    other = run_ramp(scenario, mode="stochastic", seed=11, trial=1)
    assert first == again
    assert first != other
    assert first.series["twin"].noise.samples > 0

    report = sensitivity_report(scenario, first)
    expected = sensitivity_report(scenario, run_ramp(scenario))
    for name in CONFIGURATIONS:
        measured = report.configurations[name].fit.dn_min_per_rtHz
        assert measured == pytest.approx(expected.configurations[name].fit.dn_min_per_rtHz, rel=0.35)


def test_stochastic_noise_readings_come_from_spectrum(scenario):
    result = run_ramp(scenario, mode="stochastic", seed=3, noise_only_samples=600)
    noise = result.series["twin"].noise
    assert noise.samples == 600
    assert noise.mean == pytest.approx(0.0, abs=0.05)
    assert noise.std == pytest.approx(NOISE_ONLY_AMPLITUDE_STD, rel=0.15)
    assert all(series.noise == noise for series in result.series.values())


def test_zero_sensor_transmission_is_infeasible(scenario):
    dark = scenario.model_copy(update={"sensor": scenario.sensor.model_copy(update={"t_at": 0.0})})
    with pytest.raises(InfeasibleSensitivityError):
        run_ramp(dark)
    with pytest.raises(InfeasibleSensitivityError):
        demo_snapshots(dark)


def test_log_average_bias_lowers_readings(scenario, deterministic_report):
    biased = run_ramp(scenario, bias_db=2.5)
    plain = run_ramp(scenario)
    top_plain = plain.series["coherent"].points[-1].snr_amplitude
    top_biased = biased.series["coherent"].points[-1].snr_amplitude
    assert top_biased == pytest.approx(math.sqrt((1.0 + top_plain ** 2) * 10 ** -0.25 - 1.0), rel=1e-9)

    report = sensitivity_report(scenario, biased)
    for name in CONFIGURATIONS:
        assert (report.configurations[name].fit.dn_min_per_rtHz
                > deterministic_report.configurations[name].fit.dn_min_per_rtHz)


def test_dn_min_independent_of_seed_flux(scenario, deterministic_report):
    dimmer = scenario.model_copy(update={"source": TwinBeamSource.from_squeezing(9.0, 1.0e9)})
    report = sensitivity_report(dimmer, run_ramp(dimmer))
    for name in CONFIGURATIONS:
        assert (report.configurations[name].fit.dn_min_per_rtHz
                == pytest.approx(deterministic_report.configurations[name].fit.dn_min_per_rtHz, rel=1e-9))


def test_dn_min_falls_with_noise_ratio(scenario):
    ratios, sensitivities = [], []
    for squeezing_db in (3.0, 6.0, 9.0, 12.0):
        squeezed = scenario.model_copy(update={"source": TwinBeamSource.from_squeezing(squeezing_db, 1.0e14)})
        twin = sensitivity_report(squeezed, run_ramp(squeezed)).configurations["twin"]
        ratios.append(twin.noise_ratio)
        sensitivities.append(twin.fit.dn_min_per_rtHz)
    assert ratios == sorted(ratios, reverse=True)
    assert sensitivities == sorted(sensitivities, reverse=True)


def test_demo_snapshots_ordering(scenario):
    snapshots = demo_snapshots(scenario)
    threshold = noise_statistics(None, 0.99).threshold
    for snr in snapshots.values():
        assert snr["twin"] > snr["single"] > snr["coherent"] > snr["matched_pair"]
    assert snapshots[1.6e-7]["coherent"] > threshold
    assert snapshots[1.6e-7]["twin"] > threshold


# ============================================================================
# RUN TESTS
# ============================================================================

if __name__ == "__main__":
    pytest.main([__file__, "-v", "-s"])
