"""Voltage-ramp sensitivity experiment across probing configurations.

Configurations, all detected with the same analyzer and bandwidth:

    twin          twin beams after losses, electronic gain optimized
    coherent      coherent beams with the twin powers and gain (the SNL reference)
    matched_pair  two coherent beams at the probe power, unit gain
    single        one coherent beam at the probe power

The 70 uW probe is stabilized after the sensor, so detected counts are
fixed and the counts reaching the sensor are detected / T.
"""

from typing import Dict, Literal, Optional, Tuple

import numpy as np

from src.config import get_settings
from src.errors import InfeasibleSensitivityError, PreconditionError
from src.experiment.calibration import calibrate_dn
from src.experiment.constants import (
    DEMO_BANDWIDTH_HZ,
    DEMO_MODULATIONS_RIU,
    DEMO_RBW_HZ,
    DEMO_TRACE_AVERAGES,
    DEMO_VBW_HZ,
    NOISE_ONLY_AMPLITUDE_MEAN,
    NOISE_ONLY_AMPLITUDE_STD,
    STOCHASTIC_SAMPLE_MEAN,
    STOCHASTIC_SERIES_SAMPLES,
)
from src.experiment.scenario import RampScenario
from src.experiment.sensitivity import (
    detection_threshold,
    enhancement,
    enhancement_from_ratio,
    fit_and_extract,
    photon_flux,
    single_coherent_equivalent,
)
from src.logger import get_logger
from src.oracle.sampling import MIN_SERIES_SAMPLES, TimeSeriesConfig, derive_generator, sample_counts
from src.oracle.spectral import estimate_spectrum, floor_readings
from src.plasmonic import transduce
from src.quantum import (
    DifferentialDetector,
    TwoModeMoments,
    apply_loss,
    differential_noise,
    optimize_gain,
    source_moments,
)
from src.signal_chain import (
    AnalyzerSettings,
    analyzer_readout,
    effective_averages,
    integration_window,
    predicted_snr,
    window_counts,
)
from src.state import (
    CONFIGURATIONS,
    ConfigurationResult,
    NoiseStatistics,
    RampPoint,
    RampResult,
    RampSeries,
    SensitivityReport,
)

logger = get_logger()

RampMode = Literal["deterministic", "stochastic"]


def detected_counts(scenario: RampScenario) -> float:
    """Probe counts per integration window at the detector."""
    flux = photon_flux(scenario.post_sensor_power, scenario.wavelength)
    return window_counts(flux, scenario.detection_bandwidth)


def probing_configurations(
    scenario: RampScenario,
    gain_upper: Optional[float] = None,
) -> Tuple[Dict[str, Tuple[TwoModeMoments, float]], float]:
    """Detected moments and electronic gain of every configuration.

    Twin-beam moments are rescaled so the probe mean equals the detected
    counts; the seed flux only fixes the normalization.

    Returns:
        ({name: (moments, gain)}, residual squeezing of the twin case in dB)
    """
    detected = detected_counts(scenario)
    window = integration_window(scenario.detection_bandwidth)
    twin = apply_loss(source_moments(scenario.source, window), scenario.probe_loss, scenario.conj_loss)
    if twin.mean_p == 0:
        raise PreconditionError("Probe transmission is zero; nothing reaches the detector")
    twin = twin.scaled(detected / twin.mean_p)
    g_opt, residual = optimize_gain(twin, gain_upper)

    configurations = {
        "twin": (twin, g_opt),
        "coherent": (TwoModeMoments.coherent(twin.mean_p, twin.mean_c), g_opt),
        "matched_pair": (TwoModeMoments.coherent(detected, detected), 1.0),
        "single": (TwoModeMoments.coherent(detected, 0.0), 0.0),
    }
    return configurations, residual.db


def sensor_input_counts(scenario: RampScenario, detected: float) -> float:
    """Counts reaching the sensor for ``detected`` counts behind it."""
    if not scenario.sensor.t_at > 0:
        raise InfeasibleSensitivityError(
            f"Sensor transmission is {scenario.sensor.t_at}; no probe light passes the sensor"
        )
    return detected / scenario.sensor.t_at


def _sampled_noise_ratio(m: TwoModeMoments, gain: float, rng: np.random.Generator, samples: int) -> float:
    """Differential noise over SNL measured on a sampled series."""
    per_sample = m.scaled(STOCHASTIC_SAMPLE_MEAN / m.mean_p)
    probe, conj = sample_counts(per_sample, TimeSeriesConfig.from_samples(samples), rng)
    _, snl = differential_noise(per_sample, DifferentialDetector(electronic_gain=gain))
    return float(np.var(probe - gain * conj, ddof=1)) / snl


def sampled_noise_readings(
    m: TwoModeMoments,
    gain: float,
    n_averages: float,
    count: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Noise-only amplitude readings from the averaged spectrum of a sampled series.

    The unmodulated differential output is cut into N segments long enough
    to leave ``count`` interior bins, and every bin yields one reading.
    """
    segments = max(1, int(round(n_averages)))
    segment_length = 2 * (count + 1)
    per_sample = m.scaled(STOCHASTIC_SAMPLE_MEAN / m.mean_p)
    config = TimeSeriesConfig.from_samples(max(segments * segment_length, MIN_SERIES_SAMPLES))
    probe, conj = sample_counts(per_sample, config, rng)
    estimate = estimate_spectrum(probe - gain * conj, segment_length, "power")
    return floor_readings(estimate)


def noise_statistics(readings: Optional[np.ndarray], confidence: float) -> NoiseStatistics:
    """Noise-only distribution: analytic when ``readings`` is None, else sampled."""
    if readings is None:
        mean, std, samples = NOISE_ONLY_AMPLITUDE_MEAN, NOISE_ONLY_AMPLITUDE_STD, 0
    else:
        mean, std, samples = float(readings.mean()), float(readings.std(ddof=1)), int(readings.size)
    return NoiseStatistics(
        mean=mean,
        std=std,
        samples=samples,
        confidence=confidence,
        threshold=detection_threshold(mean, std, confidence),
    )


def run_ramp(
    scenario: RampScenario,
    mode: RampMode = "deterministic",
    seed: Optional[int] = None,
    trial: int = 0,
    confidence: Optional[float] = None,
    noise_only_samples: Optional[int] = None,
    series_samples: int = STOCHASTIC_SERIES_SAMPLES,
    bias_db: Optional[float] = None,
) -> RampResult:
    """Analyzer SNR readings against index change for every probing configuration.

    Deterministic mode uses exact predictions and the analytic noise-only
    distribution. Stochastic mode needs an explicit ``seed``. It measures
    each differential noise ratio on a sampled series and reads the
    noise-only distribution off the averaged spectrum of an unmodulated
    series. Every reading is then offset by one of those noise-only
    readings, drawn once per schedule point and shared by all
    configurations.

    In both modes each reading passes through the analyzer peak/floor
    correction with the log-averaging ``bias_db``.
    """
    settings = get_settings()
    confidence = settings.confidence if confidence is None else confidence
    noise_only_samples = settings.noise_only_samples if noise_only_samples is None else noise_only_samples
    bias_db = settings.log_average_bias_db if bias_db is None else bias_db

    if mode not in ("deterministic", "stochastic"):
        raise PreconditionError(f"Unknown ramp mode {mode!r}")
    rng = None
    if mode == "stochastic":
        if seed is None:
            raise PreconditionError("Stochastic ramps require an explicit seed")
        rng = derive_generator(seed, trial)

    configurations, residual_db = probing_configurations(scenario, settings.gain_search_upper)
    detected = detected_counts(scenario)
    input_counts = sensor_input_counts(scenario, detected)
    n_averages = effective_averages(scenario.analyzer)
    dns = np.array([calibrate_dn(scenario.calibration, v) for _, v in scenario.drive_schedule])
    amplitudes = np.array([transduce(scenario.sensor, dn, input_counts) for dn in dns])

    readings = scatter = None
    if rng is not None:
        twin, g_opt = configurations["twin"]
        readings = sampled_noise_readings(twin, g_opt, n_averages, noise_only_samples, rng)
        scatter = rng.choice(readings, size=len(dns))
    noise = noise_statistics(readings, confidence)

    series = {}
    for name in CONFIGURATIONS:
        moments, gain = configurations[name]
        variance, snl = differential_noise(moments, DifferentialDetector(electronic_gain=gain))
        if rng is not None:
            variance = _sampled_noise_ratio(moments, gain, rng, series_samples) * snl

        snr = np.array([predicted_snr(a, variance, n_averages).snr_amplitude for a in amplitudes])
        if scatter is not None:
            snr = snr + scatter
        snr = [analyzer_readout(s, variance, bias_db) for s in snr]

        points = tuple(
            RampPoint(time_s=t, drive_v=v, dn=float(dn), snr_amplitude=float(s))
            for (t, v), dn, s in zip(scenario.drive_schedule, dns, snr)
        )
        series[name] = RampSeries(
            configuration=name,
            electronic_gain=gain,
            noise_variance=variance,
            shot_noise=snl,
            points=points,
            noise=noise,
        )
        logger.debug(f"{name}: g={gain:.4f}, noise/SNL={variance / snl:.4f}")

    return RampResult(
        mode=mode,
        seed=seed,
        trial=trial,
        detected_counts=detected,
        input_counts=input_counts,
        residual_squeezing_db=residual_db,
        series=series,
    )


def series_pairs(series: RampSeries) -> list:
    return [(p.dn, p.snr_amplitude) for p in series.points]


def sensitivity_report(
    scenario: RampScenario,
    result: RampResult,
    confidence: Optional[float] = None,
) -> SensitivityReport:
    """Fit every configuration and derive the enhancement fractions."""
    confidence = get_settings().confidence if confidence is None else confidence
    results = {}
    for name, series in result.series.items():
        fit = fit_and_extract(series_pairs(series), series.noise, confidence, scenario.detection_bandwidth)
        results[name] = ConfigurationResult(
            configuration=name,
            electronic_gain=series.electronic_gain,
            noise_ratio=series.noise_ratio,
            noise=series.noise,
            fit=fit,
        )

    dn = {name: r.fit.dn_min_per_rtHz for name, r in results.items()}
    single_estimate = single_coherent_equivalent(dn["matched_pair"])
    return SensitivityReport(
        configurations=results,
        residual_squeezing_db=result.residual_squeezing_db,
        enhancement_vs_balanced=enhancement(dn["coherent"], dn["twin"]),
        enhancement_vs_single=enhancement(single_estimate, dn["twin"]),
        enhancement_vs_matched_pair=enhancement(dn["matched_pair"], dn["twin"]),
        single_from_matched_pair=single_estimate,
        lossless_enhancement=enhancement_from_ratio(scenario.source.ideal_ratio),
    )


def demo_scenario(scenario: RampScenario) -> RampScenario:
    """Same setup read out with the single-modulation analyzer settings."""
    analyzer = AnalyzerSettings(
        center_freq=scenario.analyzer.center_freq,
        rbw=DEMO_RBW_HZ,
        vbw=DEMO_VBW_HZ,
        trace_averages=DEMO_TRACE_AVERAGES,
    )
    return scenario.model_copy(update={"analyzer": analyzer, "detection_bandwidth": DEMO_BANDWIDTH_HZ})


def demo_snapshots(scenario: RampScenario) -> Dict[float, Dict[str, float]]:
    """Amplitude SNR of each configuration at the fixed demonstration modulations."""
    demo = demo_scenario(scenario)
    configurations, _ = probing_configurations(demo, get_settings().gain_search_upper)
    input_counts = sensor_input_counts(demo, detected_counts(demo))
    n_averages = effective_averages(demo.analyzer)

    snapshots = {}
    for dn in DEMO_MODULATIONS_RIU:
        signal = transduce(demo.sensor, dn, input_counts)
        snapshots[dn] = {}
        for name, (moments, gain) in configurations.items():
            variance, _ = differential_noise(moments, DifferentialDetector(electronic_gain=gain))
            snapshots[dn][name] = predicted_snr(signal, variance, n_averages).snr_amplitude
    return snapshots
