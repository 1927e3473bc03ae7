"""Spectrum-analyzer settings and bandwidth conventions.

A detection bandwidth B corresponds to an integration window
tau = 1 / (2 B); at 1 Hz a 2.8e14 photons/s beam gives 1.4e14 counts.
"""

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.errors import PreconditionError


class AnalyzerSettings(BaseModel):
    """Spectrum analyzer configuration."""

    model_config = ConfigDict(frozen=True)

    center_freq: float = Field(default=1.0e6, gt=0.0, description="Drive/modulation frequency (Hz)")
    rbw: float = Field(..., gt=0.0, description="Resolution bandwidth (Hz)")
    vbw: float = Field(..., gt=0.0, description="Video bandwidth (Hz)")
    span: float = Field(default=0.0, ge=0.0, description="Frequency span (Hz), 0 = zero span")
    sweep_time: float = Field(default=1.0, gt=0.0, description="Sweep time (s)")
    trace_averages: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _enough_averaging(self) -> "AnalyzerSettings":
        if effective_averages(self) < 1:
            raise PreconditionError(
                f"Effective averaging (rbw/vbw)*traces = {effective_averages(self):g} is below 1"
            )
        return self


def effective_averages(s: AnalyzerSettings) -> float:
    """N = (rbw / vbw) * trace_averages."""
    return s.rbw / s.vbw * s.trace_averages


def integration_window(bandwidth: float) -> float:
    """Integration time tau = 1/(2B) for a detection bandwidth B."""
    if not bandwidth > 0:
        raise PreconditionError(f"Detection bandwidth must be positive, got {bandwidth}")
    return 1.0 / (2.0 * bandwidth)


def window_counts(flux: float, bandwidth: float) -> float:
    """Photon counts collected in one integration window."""
    if flux < 0:
        raise PreconditionError(f"Photon flux must be non-negative, got {flux}")
    return flux * integration_window(bandwidth)


def per_root_hz(dn: float, bandwidth: float) -> float:
    """Normalize a resolvable index change measured in ``bandwidth`` to RIU/sqrt(Hz)."""
    if not bandwidth > 0:
        raise PreconditionError(f"Bandwidth must be positive, got {bandwidth}")
    return dn / math.sqrt(bandwidth)
