"""Seeded Gaussian photocount series for Monte Carlo cross-checks.

Series are drawn in the linearized bright-beam regime: each sample is a
bivariate normal pair with the requested per-sample moments. The generator
is numpy's PCG64 seeded through ``SeedSequence([seed, trial])``, so trials
are independent and can be evaluated in any order.
"""

import math
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.errors import InsufficientDataError, PreconditionError, RegimeError
from src.quantum.moments import TwoModeMoments

MIN_SERIES_SAMPLES = 2 ** 10
MIN_GAUSSIAN_MEAN = 100.0
GENERATOR_NAME = "numpy.random.PCG64"


class Modulation(BaseModel):
    model_config = ConfigDict(frozen=True)

    frequency: float = Field(..., gt=0.0, description="Hz")
    amplitude: float = Field(..., ge=0.0, description="Peak counts per sample")


class TimeSeriesConfig(BaseModel):
    """Length, rate and seed of a sampled series."""

    model_config = ConfigDict(frozen=True)

    sample_rate: float = Field(..., gt=0.0)
    duration: float = Field(..., gt=0.0)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    modulation: Optional[Modulation] = None

    @model_validator(mode="after")
    def _check(self) -> "TimeSeriesConfig":
        if self.n_samples < MIN_SERIES_SAMPLES:
            raise InsufficientDataError(
                f"{self.n_samples} samples requested, at least {MIN_SERIES_SAMPLES} required"
            )
        if self.modulation is not None and self.modulation.frequency >= self.sample_rate / 2:
            raise PreconditionError(
                f"Modulation at {self.modulation.frequency} Hz is above Nyquist "
                f"({self.sample_rate / 2} Hz)"
            )
        return self

    @property
    def n_samples(self) -> int:
        return int(round(self.duration * self.sample_rate))

    @classmethod
    def from_samples(cls, n_samples: int, sample_rate: float = 1.0, **kwargs) -> "TimeSeriesConfig":
        return cls(sample_rate=sample_rate, duration=n_samples / sample_rate, **kwargs)


def derive_generator(seed: int, trial: int = 0) -> np.random.Generator:
    """Independent generator for ``(seed, trial)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


def check_regime(m: TwoModeMoments) -> None:
    """Reject arms too dim for the Gaussian approximation; a dark, noiseless arm is allowed."""
    for arm, mean, var in (("probe", m.mean_p, m.var_p), ("conjugate", m.mean_c, m.var_c)):
        if mean == 0 and var == 0:
            continue
        if mean < MIN_GAUSSIAN_MEAN:
            raise RegimeError(
                f"{arm} mean {mean:.3g} counts/sample is below {MIN_GAUSSIAN_MEAN:g}; "
                "Gaussian sampling is not valid"
            )


def correlate(m: TwoModeMoments, normals: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Map a (2, n) array of standard normals onto the moments of ``m``."""
    z1, z2 = normals
    if m.var_p > 0:
        std_p = math.sqrt(m.var_p)
        loading = m.cov / std_p
        residual = math.sqrt(max(m.var_c - loading * loading, 0.0))
        probe = m.mean_p + std_p * z1
        conj = m.mean_c + loading * z1 + residual * z2
    else:
        probe = np.full(z1.shape, m.mean_p)
        conj = m.mean_c + math.sqrt(m.var_c) * z2
    return probe, conj


def sample_counts(
    m: TwoModeMoments,
    cfg: TimeSeriesConfig,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Aligned probe and conjugate count series with per-sample moments ``m``.

    A configured modulation adds ``amplitude * sin(2 pi f t)`` to the probe.

    Raises:
        RegimeError: if an illuminated arm averages fewer than 100 counts per sample
    """
    check_regime(m)
    rng = derive_generator(cfg.seed) if rng is None else rng
    probe, conj = correlate(m, rng.standard_normal((2, cfg.n_samples)))
    if cfg.modulation is not None:
        t = np.arange(cfg.n_samples) / cfg.sample_rate
        probe = probe + cfg.modulation.amplitude * np.sin(2 * np.pi * cfg.modulation.frequency * t)
    return probe, conj
