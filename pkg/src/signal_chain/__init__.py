"""Spectrum-analyzer emulation and SNR conversions."""

from src.signal_chain.analyzer import (
    AnalyzerSettings,
    effective_averages,
    integration_window,
    per_root_hz,
    window_counts,
)
from src.signal_chain.snr import (
    ANALYZER_REFERENCE_POWER,
    SnrEstimate,
    analyzer_readout,
    correction_factor,
    peak_to_snr,
    power_to_dbm,
    predicted_readings,
    predicted_snr,
    snr_amplitude,
)

__all__ = [
    "AnalyzerSettings",
    "effective_averages",
    "integration_window",
    "per_root_hz",
    "window_counts",
    "ANALYZER_REFERENCE_POWER",
    "SnrEstimate",
    "analyzer_readout",
    "correction_factor",
    "peak_to_snr",
    "power_to_dbm",
    "predicted_readings",
    "predicted_snr",
    "snr_amplitude",
]
