"""SNR estimates, analyzer peak/floor correction and averaging predictions."""

import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, computed_field, field_validator

from src.errors import PreconditionError

# Absolute dBm scale is arbitrary; 1 count^2 per window reads as 0 dBm.
ANALYZER_REFERENCE_POWER = 1.0
# RMS power of a sinusoid with unit peak amplitude
RMS_FACTOR = 1.0 / math.sqrt(2.0)


class SnrEstimate(BaseModel):
    """Signal-to-noise ratio held in dB with a derived linear amplitude.

    ``snr_amplitude = sqrt(10 ** (snr_db / 10))``; a zero amplitude is
    represented by ``snr_db = -inf``.
    """

    model_config = ConfigDict(frozen=True)

    snr_db: float

    @field_validator("snr_db")
    @classmethod
    def _not_nan(cls, value: float) -> float:
        if math.isnan(value) or value == math.inf:
            raise PreconditionError(f"SNR in dB must be finite or -inf, got {value}")
        return value

    @computed_field
    @property
    def snr_amplitude(self) -> float:
        return snr_amplitude(self.snr_db)

    @classmethod
    def from_db(cls, snr_db: float) -> "SnrEstimate":
        return cls(snr_db=snr_db)

    @classmethod
    def from_amplitude(cls, amplitude: float) -> "SnrEstimate":
        if not amplitude >= 0 or math.isinf(amplitude):
            raise PreconditionError(f"SNR amplitude must be finite and non-negative, got {amplitude}")
        if amplitude == 0:
            return cls(snr_db=-math.inf)
        return cls(snr_db=20.0 * math.log10(amplitude))


def snr_amplitude(snr_db: float) -> float:
    """Linear amplitude SNR, sqrt(10 ** (snr_db / 10))."""
    if snr_db == -math.inf:
        return 0.0
    return math.sqrt(10.0 ** (snr_db / 10.0))


def correction_factor(delta_db: float) -> float:
    """Difference between the raw peak-to-floor reading and the true SNR (dB)."""
    return delta_db - peak_to_snr(delta_db, 0.0).snr_db


def peak_to_snr(peak_dbm: float, floor_dbm: float, bias_db: float = 0.0) -> SnrEstimate:
    """True SNR from an analyzer peak reading over its noise floor.

    The peak bin holds signal plus noise power, so
    snr_db = 10 log10(10 ** (delta / 10) - 1) with delta = peak - floor.
    ``bias_db`` is a log-averaging noise offset added to the floor first.

    Raises:
        PreconditionError: if the peak does not rise above the floor
    """
    delta = peak_dbm - (floor_dbm + bias_db)
    if not delta > 0:
        raise PreconditionError(
            f"Peak {peak_dbm} dBm does not exceed floor {floor_dbm + bias_db} dBm; "
            "signal indistinguishable from noise"
        )
    excess = np.expm1(delta * math.log(10.0) / 10.0)
    return SnrEstimate(snr_db=float(10.0 * np.log10(excess)))


def predicted_snr(signal_amplitude: float, noise_variance: float, n_averages: float) -> SnrEstimate:
    """Expected amplitude SNR of a sinusoidal modulation after N averages.

    snr_amplitude = sqrt(N) * (a / sqrt(2)) / sqrt(variance). The 1/sqrt(2)
    is the RMS of a sinusoid with peak amplitude a and is applied here only.
    """
    if not noise_variance > 0:
        raise PreconditionError(f"Noise variance must be positive, got {noise_variance}")
    if not n_averages >= 1:
        raise PreconditionError(f"Averaging number must be at least 1, got {n_averages}")
    if signal_amplitude < 0:
        raise PreconditionError(f"Signal amplitude must be non-negative, got {signal_amplitude}")
    amplitude = math.sqrt(n_averages) * signal_amplitude * RMS_FACTOR / math.sqrt(noise_variance)
    return SnrEstimate.from_amplitude(amplitude)


def power_to_dbm(power: float, reference: float = ANALYZER_REFERENCE_POWER) -> float:
    """Power in counts^2 on the analyzer's anchored dBm scale."""
    if not power > 0:
        raise PreconditionError(f"Power must be positive to express in dBm, got {power}")
    return 10.0 * math.log10(power / reference)


def predicted_readings(snr: SnrEstimate, floor_dbm: float) -> Tuple[float, float]:
    """Analyzer (peak, floor) readings in dBm that reproduce ``snr``."""
    peak = floor_dbm + 10.0 * math.log10(1.0 + snr.snr_amplitude ** 2)
    return peak, floor_dbm


def analyzer_readout(snr: float, noise_power: float, bias_db: float = 0.0) -> float:
    """Amplitude SNR recovered from the peak and floor an analyzer would display.

    ``snr`` becomes (peak, floor) dBm readings over a floor of ``noise_power``
    and is read back through :func:`peak_to_snr` with ``bias_db``. A reading
    whose peak does not clear the corrected floor is unresolved and reads 0.
    """
    if not snr > 0:
        return 0.0
    peak, floor = predicted_readings(SnrEstimate.from_amplitude(snr), power_to_dbm(noise_power))
    if not peak > floor + bias_db:
        return 0.0
    return peak_to_snr(peak, floor, bias_db).snr_amplitude
