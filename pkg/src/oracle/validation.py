"""Monte Carlo cross-checks of the analytic noise, spectral and ramp results."""

import math
from typing import Dict, Optional, Sequence

import numpy as np
from scipy import stats

from src.config import Settings, get_settings
from src.errors import InsufficientDataError, InvariantViolationError
from src.experiment.constants import (
    MIN_VALIDATION_TRIALS,
    NOISE_ONLY_AMPLITUDE_STD,
    STOCHASTIC_SAMPLE_MEAN,
    STOCHASTIC_SERIES_SAMPLES,
)
from src.experiment.ramp import run_ramp, sensitivity_report
from src.experiment.scenario import RampScenario
from src.experiment.sensitivity import enhancement, enhancement_from_ratio
from src.logger import get_logger
from src.oracle.sampling import Modulation, TimeSeriesConfig, check_regime, correlate, derive_generator, sample_counts
from src.oracle.spectral import (
    EXPONENTIAL_LOG_BIAS_DB,
    estimate_spectrum,
    floor_readings,
    log_average_bias_db,
    tone_bin,
    tone_snr,
    white_noise_density,
)
from src.quantum import LossChannel, TwinBeamSource, TwoModeMoments, apply_loss, noise_ratio, source_moments
from src.signal_chain import predicted_snr
from src.state import CONFIGURATIONS, ValidationCheck, ValidationReport
from src.utils import build_model

logger = get_logger()

GRID_PROBE_TRANSMISSIONS = (0.482, 0.75, 1.0)
GRID_CONJ_TRANSMISSIONS = (0.5, 0.75, 0.95)
GRID_GAINS = (0.6, 1.0, 1.4)
SPECTRUM_SEGMENT_LENGTH = 1024
SPECTRAL_RTOL = 0.02
LOG_BIAS_TOLERANCE_DB = 0.1
PIPELINE_RATIO_TOLERANCE = 0.2
ENHANCEMENT_RTOL = 0.05
# Tone on bin 128 of 1024-sample segments, single-trace amplitude SNR of 2
TONE_SEGMENT_LENGTH = 1024
TONE_BIN = 128
TONE_SINGLE_TRACE_SNR = 2.0
TONE_AVERAGES = (16, 256)


def per_sample_source(source: TwinBeamSource) -> TwoModeMoments:
    """Source moments over a window holding STOCHASTIC_SAMPLE_MEAN probe counts."""
    return source_moments(source, STOCHASTIC_SAMPLE_MEAN / (source.gain * source.seed_flux))


def _check(name: str, measured: float, expected: float, tolerance: float, detail: Optional[str] = None) -> ValidationCheck:
    return ValidationCheck(
        name=name,
        measured=float(measured),
        expected=float(expected),
        tolerance=float(tolerance),
        passed=bool(abs(measured - expected) <= tolerance),
        detail=detail,
    )


def moment_convergence(
    m: TwoModeMoments,
    seed: int,
    sizes: Sequence[int] = (2 ** 16, 2 ** 20),
    tolerance_se: float = 3.0,
) -> list:
    """Empirical mean, variance and covariance against ``m`` at each sample size."""
    checks = []
    for n in sizes:
        probe, conj = sample_counts(m, TimeSeriesConfig.from_samples(n), derive_generator(seed, n))
        cov = np.cov(probe, conj, ddof=1)
        se_mean = math.sqrt(m.var_p / n)
        se_var = m.var_p * math.sqrt(2.0 / (n - 1))
        se_cov = math.sqrt((m.var_p * m.var_c + m.cov ** 2) / (n - 1))
        checks += [
            _check(f"moments[n={n}].mean_p", probe.mean(), m.mean_p, tolerance_se * se_mean),
            _check(f"moments[n={n}].var_p", cov[0, 0], m.var_p, tolerance_se * se_var),
            _check(f"moments[n={n}].cov", cov[0, 1], m.cov, tolerance_se * se_cov),
        ]
    return checks


def difference_noise_grid(
    source: TwinBeamSource,
    samples: int,
    seed: int,
    tolerance_se: float = 3.0,
    probe_transmissions: Sequence[float] = GRID_PROBE_TRANSMISSIONS,
    conj_transmissions: Sequence[float] = GRID_CONJ_TRANSMISSIONS,
    gains: Sequence[float] = GRID_GAINS,
) -> list:
    """Sampled p - g*c noise ratio against the analytic value on a (T_p, T_c, g) grid.

    One set of standard normals is shared by every grid point.
    """
    base = per_sample_source(source)
    normals = derive_generator(seed).standard_normal((2, samples))
    se_factor = math.sqrt(2.0 / (samples - 1))

    checks = []
    for tp in probe_transmissions:
        for tc in conj_transmissions:
            m = apply_loss(base, LossChannel(transmission=tp), LossChannel(transmission=tc))
            check_regime(m)
            probe, conj = correlate(m, normals)
            for g in gains:
                analytic = noise_ratio(m, g)
                snl = m.mean_p + g * g * m.mean_c
                empirical = float(np.var(probe - g * conj, ddof=1)) / snl
                checks.append(_check(
                    f"difference_noise[Tp={tp},Tc={tc},g={g}]",
                    empirical,
                    analytic,
                    tolerance_se * analytic * se_factor,
                ))
    return checks


def spectral_checks(samples: int, seed: int, segment_length: int = SPECTRUM_SEGMENT_LENGTH) -> list:
    """Parseval, white-level and log-averaging bias checks on a coherent series."""
    m = TwoModeMoments.coherent(STOCHASTIC_SAMPLE_MEAN)
    probe, _ = sample_counts(m, TimeSeriesConfig.from_samples(samples), derive_generator(seed))
    estimate = estimate_spectrum(probe, segment_length, "power")

    variance = float(np.var(probe))
    level = float(np.mean(estimate.power[1:segment_length // 2]))
    density = white_noise_density(m.var_p, 1.0)
    bias = log_average_bias_db(probe, segment_length)
    return [
        _check("spectrum.parseval", estimate.integrated_power(), variance, SPECTRAL_RTOL * variance),
        _check("spectrum.white_level", level, density, SPECTRAL_RTOL * density),
        _check(
            "spectrum.log_average_bias_db",
            bias,
            EXPONENTIAL_LOG_BIAS_DB,
            LOG_BIAS_TOLERANCE_DB,
            detail="log-averaged analyzer traces read low by this amount on pure noise",
        ),
    ]


def tone_snr_checks(
    seed: int,
    tolerance_se: float = 3.0,
    averages: Sequence[int] = TONE_AVERAGES,
    segment_length: int = TONE_SEGMENT_LENGTH,
) -> list:
    """Demodulated tone SNR and noise-only spread against the averaging predictions.

    A coherent probe carries a tone centred on one bin. For every N the
    averaged spectrum of N segments gives the tone SNR, scaled by sqrt(N)
    and compared with ``predicted_snr``, and the off-tone readings, whose
    spread must stay at the noise-only value.
    """
    m = TwoModeMoments.coherent(STOCHASTIC_SAMPLE_MEAN)
    frequency = TONE_BIN / segment_length
    bin_variance = white_noise_density(m.var_p, 1.0) / segment_length
    q = TONE_SINGLE_TRACE_SNR
    amplitude = q * math.sqrt(2.0 * bin_variance)
    modulation = Modulation(frequency=frequency, amplitude=amplitude)

    checks = []
    for n in averages:
        config = TimeSeriesConfig.from_samples(n * segment_length, modulation=modulation)
        probe, _ = sample_counts(m, config, derive_generator(seed, n))
        estimate = estimate_spectrum(probe, segment_length, "power")

        measured = math.sqrt(n) * tone_snr(estimate, frequency).snr_amplitude
        predicted = predicted_snr(amplitude, bin_variance, n).snr_amplitude
        se_snr = math.sqrt(2.0 * q * q + 1.0) / (2.0 * q)
        checks.append(_check(f"tone[N={n}].snr_amplitude", measured, predicted, tolerance_se * se_snr))

        readings = floor_readings(estimate, [tone_bin(estimate, frequency)])
        se_std = NOISE_ONLY_AMPLITUDE_STD / math.sqrt(2.0 * (readings.size - 1))
        checks.append(_check(
            f"tone[N={n}].noise_only_std",
            readings.std(ddof=1),
            NOISE_ONLY_AMPLITUDE_STD,
            tolerance_se * se_std,
        ))
    return checks


def moment_invariant_check(values: Dict[str, float]) -> ValidationCheck:
    """Report whether raw moments satisfy the physical invariants."""
    bound = values["var_p"] * values["var_c"]
    try:
        build_model(TwoModeMoments, **values)
    except InvariantViolationError as exc:
        return ValidationCheck(
            name="moment_invariants",
            measured=values["cov"] ** 2,
            expected=bound,
            tolerance=0.0,
            passed=False,
            detail=str(exc),
        )
    return ValidationCheck(
        name="moment_invariants",
        measured=values["cov"] ** 2,
        expected=bound,
        tolerance=0.0,
        passed=True,
    )


def validate_pipeline(
    scenario: RampScenario,
    trials: int,
    seed: int,
    inject_noise: bool = True,
    series_samples: int = STOCHASTIC_SERIES_SAMPLES,
) -> list:
    """Extract sensitivities from stochastic ramps and compare them to the prediction.

    Each trial uses its own generator derived from (seed, trial). With
    ``inject_noise=False`` every trial is the deterministic evaluation and
    the ratios are exactly 1.

    Raises:
        InsufficientDataError: fewer than ten trials
    """
    if trials < MIN_VALIDATION_TRIALS:
        raise InsufficientDataError(f"{trials} trials requested, at least {MIN_VALIDATION_TRIALS} required")

    expected = sensitivity_report(scenario, run_ramp(scenario))
    extracted = {name: [] for name in CONFIGURATIONS}
    mode = "stochastic" if inject_noise else "deterministic"
    for trial in range(trials):
        result = run_ramp(scenario, mode=mode, seed=seed, trial=trial, series_samples=series_samples)
        report = sensitivity_report(scenario, result)
        for name in CONFIGURATIONS:
            extracted[name].append(report.configurations[name].fit.dn_min_per_rtHz)

    checks = []
    t_quantile = stats.t.ppf(0.975, trials - 1)
    for name in CONFIGURATIONS:
        ratios = np.array(extracted[name]) / expected.configurations[name].fit.dn_min_per_rtHz
        mean = float(ratios.mean())
        half_width = float(t_quantile * ratios.std(ddof=1) / math.sqrt(trials))
        checks.append(_check(
            f"pipeline.{name}.dn_ratio",
            mean,
            1.0,
            PIPELINE_RATIO_TOLERANCE,
            detail=f"95% CI [{mean - half_width:.4f}, {mean + half_width:.4f}] over {trials} trials",
        ))

    empirical = enhancement(np.mean(extracted["coherent"]), np.mean(extracted["twin"]))
    predicted = enhancement_from_ratio(expected.configurations["twin"].noise_ratio)
    checks.append(_check(
        "pipeline.enhancement_vs_balanced",
        empirical,
        predicted,
        ENHANCEMENT_RTOL * predicted,
    ))
    return checks


def run_oracle_suite(
    scenario: RampScenario,
    seed: int,
    trials: Optional[int] = None,
    samples: Optional[int] = None,
    moments_override: Optional[Dict[str, float]] = None,
    series_samples: int = STOCHASTIC_SERIES_SAMPLES,
    settings: Optional[Settings] = None,
) -> ValidationReport:
    """Every oracle check for ``scenario`` collected into one report."""
    settings = settings or get_settings()
    trials = settings.validation_trials if trials is None else trials
    samples = settings.oracle_samples if samples is None else samples
    tolerance = settings.oracle_tolerance_se

    if trials < MIN_VALIDATION_TRIALS:
        raise InsufficientDataError(f"{trials} trials requested, at least {MIN_VALIDATION_TRIALS} required")

    report = ValidationReport()
    if moments_override is not None:
        report.checks.append(moment_invariant_check(moments_override))

    reference = apply_loss(per_sample_source(scenario.source), scenario.probe_loss, scenario.conj_loss)
    with logger.timer("Oracle moment convergence"):
        report.checks += moment_convergence(reference, seed, tolerance_se=tolerance)
    with logger.timer("Oracle difference-noise grid"):
        report.checks += difference_noise_grid(scenario.source, samples, seed, tolerance)
    with logger.timer("Oracle spectral checks"):
        report.checks += spectral_checks(samples, seed)
    with logger.timer("Oracle tone demodulation"):
        report.checks += tone_snr_checks(seed, tolerance)
    with logger.timer(f"Pipeline validation ({trials} trials)"):
        report.checks += validate_pipeline(scenario, trials, seed, series_samples=series_samples)

    for check in report.failures:
        logger.warning(
            f"Check failed: {check.name} measured={check.measured:.6g} "
            f"expected={check.expected:.6g} tolerance={check.tolerance:.3g}"
        )
    return report
