"""Sampled EOT transmission spectra: loading, interpolation, local slope."""

from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from src.errors import ConfigError, InsufficientDataError, PreconditionError, RangeViolationError
from src.logger import get_logger

logger = get_logger()

SPECTRUM_COLUMNS = ("wavelength_nm", "transmission")
MIN_SLOPE_SAMPLES = 5


class TransmissionSpectrum(BaseModel):
    """Transmission T(lambda) sampled at strictly increasing wavelengths (nm)."""

    model_config = ConfigDict(frozen=True)

    samples: Tuple[Tuple[float, float], ...]

    @field_validator("samples")
    @classmethod
    def _check_samples(cls, samples):
        if len(samples) < 2:
            raise PreconditionError("A spectrum needs at least two samples")
        wavelengths = np.array([s[0] for s in samples], dtype=float)
        transmission = np.array([s[1] for s in samples], dtype=float)
        if not (np.all(np.isfinite(wavelengths)) and np.all(np.isfinite(transmission))):
            raise PreconditionError("Spectrum samples must be finite")
        if np.any(np.diff(wavelengths) <= 0):
            raise PreconditionError("Spectrum wavelengths must be strictly increasing")
        if np.any(transmission < 0) or np.any(transmission > 1):
            raise PreconditionError("Spectrum transmission values must lie in [0, 1]")
        return samples

    @classmethod
    def from_arrays(cls, wavelengths, transmission) -> "TransmissionSpectrum":
        return cls(samples=tuple(zip(map(float, wavelengths), map(float, transmission))))

    @property
    def wavelengths(self) -> np.ndarray:
        return np.array([s[0] for s in self.samples])

    @property
    def transmission(self) -> np.ndarray:
        return np.array([s[1] for s in self.samples])


def load_spectrum(path: Union[str, Path]) -> TransmissionSpectrum:
    """Read a two-column spectrum CSV (header ``wavelength_nm,transmission``)."""
    path = Path(path)
    try:
        frame = pd.read_csv(path, comment="#")
    except FileNotFoundError as exc:
        raise ConfigError(f"Spectrum file not found: {path}") from exc
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise ConfigError(f"Unreadable spectrum file {path}: {exc}") from exc

    missing = [c for c in SPECTRUM_COLUMNS if c not in frame.columns]
    if missing:
        raise ConfigError(f"Spectrum file {path} is missing columns {missing}")

    try:
        spectrum = TransmissionSpectrum.from_arrays(
            frame["wavelength_nm"].to_numpy(dtype=float),
            frame["transmission"].to_numpy(dtype=float),
        )
    except ValidationError as exc:
        raise ConfigError(f"Invalid spectrum in {path}: {exc.errors()[0]['msg']}") from exc
    except ValueError as exc:
        raise ConfigError(f"Non-numeric spectrum values in {path}: {exc}") from exc
    logger.debug(f"Loaded spectrum {path.name}: {len(spectrum.samples)} samples")
    return spectrum


def transmission_at(spec: TransmissionSpectrum, wavelength: float) -> float:
    """Linearly interpolated transmission; exact at sample points."""
    wl = spec.wavelengths
    if not wl[0] <= wavelength <= wl[-1]:
        raise RangeViolationError(
            f"Wavelength {wavelength} nm outside sampled range [{wl[0]}, {wl[-1]}] nm"
        )
    return float(np.interp(wavelength, wl, spec.transmission))


def slope_dT_dlambda(spec: TransmissionSpectrum, wavelength: float, window: float) -> float:
    """Least-squares slope of T over samples within +/- window/2 of ``wavelength``.

    Raises:
        InsufficientDataError: fewer than five samples inside the window
    """
    if not window > 0:
        raise PreconditionError(f"Slope window must be positive, got {window}")
    wl = spec.wavelengths
    half = 0.5 * window * (1.0 + 1e-12)
    mask = np.abs(wl - wavelength) <= half
    count = int(mask.sum())
    if count < MIN_SLOPE_SAMPLES:
        raise InsufficientDataError(
            f"Only {count} samples within {window} nm of {wavelength} nm "
            f"(need {MIN_SLOPE_SAMPLES})"
        )
    slope, _ = np.polyfit(wl[mask] - wavelength, spec.transmission[mask], 1)
    return float(slope)


def lorentzian_transmission(wavelength, center: float, depth: float, width: float, baseline: float):
    """T = baseline + depth / (1 + ((lambda - center) / width)**2).

    Positive ``depth`` is a transmission peak (the EOT case), negative a dip.
    """
    x = (np.asarray(wavelength, dtype=float) - center) / width
    return baseline + depth / (1.0 + x * x)


def lorentzian_slope(wavelength, center: float, depth: float, width: float):
    """Analytic dT/dlambda of :func:`lorentzian_transmission`."""
    x = (np.asarray(wavelength, dtype=float) - center) / width
    return -2.0 * depth * x / (width * (1.0 + x * x) ** 2)


def synth_spectrum(
    center: float,
    depth: float,
    width: float,
    baseline: float,
    span: Optional[Tuple[float, float]] = None,
    points: int = 401,
) -> TransmissionSpectrum:
    """Single-resonance Lorentzian spectrum on a uniform grid.

    Args:
        center: Resonance wavelength (nm)
        depth: Peak height above baseline (negative for a dip)
        width: Half width at half maximum (nm)
        baseline: Off-resonance transmission
        span: (start, stop) wavelengths, default center +/- 4 widths
        points: Grid size

    Raises:
        PreconditionError: non-positive width, or T leaves [0, 1]
    """
    if not width > 0:
        raise PreconditionError(f"Resonance width must be positive, got {width}")
    extremes = (baseline, baseline + depth)
    if min(extremes) < 0 or max(extremes) > 1:
        raise PreconditionError(
            f"baseline={baseline}, depth={depth} take transmission outside [0, 1]"
        )
    start, stop = span if span is not None else (center - 4 * width, center + 4 * width)
    grid = np.linspace(start, stop, points)
    return TransmissionSpectrum.from_arrays(
        grid, lorentzian_transmission(grid, center, depth, width, baseline)
    )
