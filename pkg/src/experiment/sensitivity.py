"""Sensitivity figures: photon budget, threshold crossing and enhancement."""

import math
from typing import Sequence, Tuple

import numpy as np
from scipy import stats

from src.errors import InfeasibleSensitivityError, InsufficientDataError, PreconditionError
from src.experiment.constants import MIN_FIT_POINTS, PLANCK_CONSTANT, SPEED_OF_LIGHT
from src.logger import get_logger
from src.signal_chain.analyzer import per_root_hz, window_counts
from src.state import ExtractionResult, NoiseStatistics

logger = get_logger()

NM = 1.0e-9


def photon_flux(power: float, wavelength: float) -> float:
    """Photons per second F = P * lambda / (h c) for ``power`` W at ``wavelength`` nm."""
    if power < 0 or not wavelength > 0:
        raise PreconditionError(
            f"Power must be non-negative and wavelength positive (P={power}, lambda={wavelength})"
        )
    return power * wavelength * NM / (PLANCK_CONSTANT * SPEED_OF_LIGHT)


def confidence_z(confidence: float) -> float:
    """One-sided standard normal quantile."""
    if not 0.5 < confidence < 1.0:
        raise PreconditionError(f"Confidence must lie in (0.5, 1), got {confidence}")
    return float(stats.norm.ppf(confidence))


def detection_threshold(mean: float, std: float, confidence: float) -> float:
    """mean + z(confidence) * std of the noise-only amplitude distribution."""
    return mean + confidence_z(confidence) * std


def budget_estimate(
    transmission: float,
    dT_dn: float,
    flux: float,
    n_averages: float,
    bandwidth: float = 1.0,
) -> float:
    """Shot-noise-limited resolvable index change in RIU/sqrt(Hz).

    dn = (1/dT_dn) * sqrt(T / counts) / sqrt(N) with counts collected in
    ``bandwidth``, then normalized by sqrt(bandwidth); the result does not
    depend on the bandwidth chosen.
    """
    if dT_dn == 0:
        raise InfeasibleSensitivityError("Sensor has zero dT/dn; no index change is resolvable")
    if min(transmission, dT_dn, flux, n_averages, bandwidth) <= 0:
        raise PreconditionError(
            "Budget inputs must be positive "
            f"(T={transmission}, dT_dn={dT_dn}, flux={flux}, N={n_averages}, B={bandwidth})"
        )
    counts = window_counts(flux, bandwidth)
    raw = math.sqrt(transmission / counts) / dT_dn / math.sqrt(n_averages)
    return per_root_hz(raw, bandwidth)


def _fit_line(points: np.ndarray, threshold: float):
    if len(points) < MIN_FIT_POINTS or np.unique(points[:, 0]).size < 2:
        raise InsufficientDataError(
            f"{len(points)} points beyond threshold {threshold:.4g}, need {MIN_FIT_POINTS}"
        )
    fit = stats.linregress(points[:, 0], points[:, 1])
    if not fit.slope > 0:
        raise PreconditionError(f"Fitted SNR slope {fit.slope:.4g} is not positive")
    return fit


def fit_and_extract(
    series: Sequence[Tuple[float, float]],
    noise: NoiseStatistics,
    confidence: float,
    bandwidth: float,
) -> ExtractionResult:
    """Fit SNR against index change and find where it crosses the noise threshold.

    Fit points are chosen by index change, never by their measured SNR. A
    first line through every dn > 0 point locates the crossing; the final
    line uses only the points beyond it. Its crossing is the raw resolvable
    index change in ``bandwidth``; it is also returned normalized per sqrt(Hz).

    Args:
        series: (dn, linear amplitude SNR) pairs
        noise: Noise-only amplitude distribution
        confidence: One-sided confidence of the threshold
        bandwidth: Detection bandwidth in Hz

    Raises:
        InsufficientDataError: fewer than five points in either fit
        PreconditionError: non-positive fitted slope
    """
    threshold = detection_threshold(noise.mean, noise.std, confidence)
    data = np.asarray(series, dtype=float).reshape(-1, 2)
    positive = data[data[:, 0] > 0]
    first = _fit_line(positive, threshold)
    cutoff = (threshold - first.intercept) / first.slope
    above = positive[positive[:, 0] > cutoff]
    fit = _fit_line(above, threshold)

    crossing = (threshold - fit.intercept) / fit.slope
    if not crossing > 0:
        raise InfeasibleSensitivityError(
            f"Fit crosses the threshold at non-positive dn={crossing:.4g}"
        )
    logger.debug(
        f"Fit slope={fit.slope:.5g}/RIU intercept={fit.intercept:.4g} "
        f"threshold={threshold:.4f} -> dn_min={crossing:.4g} RIU"
    )
    return ExtractionResult(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        threshold=threshold,
        points_used=len(above),
        dn_min_raw=float(crossing),
        bandwidth_hz=bandwidth,
        dn_min_per_rtHz=per_root_hz(float(crossing), bandwidth),
    )


def enhancement(dn_snl: float, dn_q: float) -> float:
    """Fractional sensitivity gain of ``dn_q`` over the reference ``dn_snl``."""
    if not (dn_snl > 0 and dn_q > 0):
        raise PreconditionError(f"Sensitivities must be positive (dn_snl={dn_snl}, dn_q={dn_q})")
    return (dn_snl - dn_q) / dn_q


def enhancement_from_ratio(noise_ratio: float) -> float:
    """sqrt(1/R) - 1 for two measurements differing only by noise ratio R."""
    if not noise_ratio > 0:
        raise PreconditionError(f"Noise ratio must be positive, got {noise_ratio}")
    return math.sqrt(1.0 / noise_ratio) - 1.0


def single_coherent_equivalent(dn_balanced: float) -> float:
    """One coherent beam has half the noise power of a balanced coherent pair."""
    if dn_balanced < 0:
        raise PreconditionError(f"Sensitivity must be non-negative, got {dn_balanced}")
    return dn_balanced / math.sqrt(2.0)
