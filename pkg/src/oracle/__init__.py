"""Monte Carlo oracle: seeded count series and spectral estimates.

Pipeline validation lives in :mod:`src.oracle.validation`.
"""

from src.oracle.sampling import (
    Modulation,
    TimeSeriesConfig,
    correlate,
    derive_generator,
    sample_counts,
)
from src.oracle.spectral import SpectralEstimate, estimate_spectrum, log_average_bias_db

__all__ = [
    "Modulation",
    "TimeSeriesConfig",
    "correlate",
    "derive_generator",
    "sample_counts",
    "SpectralEstimate",
    "estimate_spectrum",
    "log_average_bias_db",
]
