"""Averaged-periodogram emulation of analyzer trace averaging."""

import math
from typing import Literal, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy import signal

from src.errors import PreconditionError
from src.signal_chain.snr import SnrEstimate, peak_to_snr, power_to_dbm

AveragingMode = Literal["power", "log"]

# Mean of 10*log10 of an exponential variate relative to its mean, in dB
EXPONENTIAL_LOG_BIAS_DB = 10.0 * np.euler_gamma / math.log(10.0)


class SpectralEstimate(BaseModel):
    """One-sided power spectral density, counts^2 per Hz."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    frequencies: np.ndarray
    power: np.ndarray
    averaging_mode: AveragingMode
    segments: int

    @model_validator(mode="after")
    def _check(self) -> "SpectralEstimate":
        if self.frequencies.shape != self.power.shape:
            raise PreconditionError("Frequency and power arrays differ in length")
        steps = np.diff(self.frequencies)
        if steps.size and not np.allclose(steps, steps[0]):
            raise PreconditionError("Spectral frequency grid must be uniform")
        if self.averaging_mode == "power" and np.any(self.power < 0):
            raise PreconditionError("Power-averaged spectrum has negative bins")
        return self

    @property
    def resolution(self) -> float:
        return float(self.frequencies[1] - self.frequencies[0])

    def integrated_power(self) -> float:
        """Sum of density times bin width, the time-domain variance in power mode."""
        return float(np.sum(self.power) * self.resolution)


def estimate_spectrum(
    series: np.ndarray,
    segment_length: int,
    averaging_mode: AveragingMode = "power",
    sample_rate: float = 1.0,
) -> SpectralEstimate:
    """Average periodograms of non-overlapping, unwindowed segments.

    Each segment has its mean removed. ``"power"`` averages densities;
    ``"log"`` averages dB values per bin, which reads low on noise by
    about 2.51 dB.
    """
    series = np.asarray(series, dtype=float)
    if not 2 <= segment_length <= series.size:
        raise PreconditionError(
            f"Segment length {segment_length} invalid for a series of {series.size} samples"
        )
    if averaging_mode not in ("power", "log"):
        raise PreconditionError(f"Unknown averaging mode {averaging_mode!r}")

    n_segments = series.size // segment_length
    segments = series[: n_segments * segment_length].reshape(n_segments, segment_length)
    freqs, densities = signal.periodogram(
        segments,
        fs=sample_rate,
        window="boxcar",
        detrend="constant",
        scaling="density",
        axis=-1,
    )

    if averaging_mode == "power":
        power = densities.mean(axis=0)
    else:
        tiny = np.finfo(float).tiny
        power = 10.0 ** (np.mean(10.0 * np.log10(np.maximum(densities, tiny)), axis=0) / 10.0)

    return SpectralEstimate(
        frequencies=freqs,
        power=power,
        averaging_mode=averaging_mode,
        segments=n_segments,
    )


def white_noise_density(variance: float, sample_rate: float) -> float:
    """One-sided density of white noise with the given per-sample variance."""
    return 2.0 * variance / sample_rate


def log_average_bias_db(series: np.ndarray, segment_length: int, sample_rate: float = 1.0) -> float:
    """Measured dB offset of log averaging below power averaging (DC and Nyquist excluded)."""
    power = estimate_spectrum(series, segment_length, "power", sample_rate).power
    logged = estimate_spectrum(series, segment_length, "log", sample_rate).power
    bins = slice(1, segment_length // 2)
    return float(np.mean(10.0 * np.log10(power[bins] / logged[bins])))


def _interior_bins(estimate: SpectralEstimate, exclude: Sequence[int] = ()) -> np.ndarray:
    bins = np.arange(1, estimate.power.size - 1)
    return bins[~np.isin(bins, exclude)]


def tone_bin(estimate: SpectralEstimate, frequency: float) -> int:
    """Index of the bin holding ``frequency``; DC and Nyquist are not allowed."""
    index = int(round(frequency / estimate.resolution))
    if not 0 < index < estimate.power.size - 1:
        raise PreconditionError(f"Tone at {frequency} Hz falls outside the interior bins")
    return index


def floor_readings(estimate: SpectralEstimate, exclude: Sequence[int] = ()) -> np.ndarray:
    """Noise-only amplitude readings of the interior bins, in sqrt(N)-scaled RMS units.

    Each bin reads sqrt(P / floor) - 1 against the mean floor, scaled by
    sqrt(N / 2) so the spread stays near 1 / (2 sqrt(2)) for any N.
    """
    if estimate.averaging_mode != "power":
        raise PreconditionError("Floor readings need a power-averaged spectrum")
    bins = _interior_bins(estimate, exclude)
    power = estimate.power[bins]
    return math.sqrt(estimate.segments / 2.0) * (np.sqrt(power / power.mean()) - 1.0)


def tone_snr(estimate: SpectralEstimate, frequency: float) -> SnrEstimate:
    """Single-trace SNR of a tone from its peak bin over the mean interior floor."""
    index = tone_bin(estimate, frequency)
    floor = float(estimate.power[_interior_bins(estimate, [index])].mean())
    return peak_to_snr(power_to_dbm(float(estimate.power[index])), power_to_dbm(floor))
