"""Differential detection with electronic gain on the conjugate arm."""

import math
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import minimize_scalar

from src.errors import PreconditionError
from src.logger import get_logger
from src.quantum.moments import SqueezingLevel, TwoModeMoments

logger = get_logger()

# Leading quadratic coefficient below this fraction of the largest one is degenerate
QUADRATIC_DEGENERACY_RTOL = 1e-15
DEFAULT_GAIN_SEARCH_UPPER = 10.0
GAIN_GRID_POINTS = 65


class DifferentialDetector(BaseModel):
    """Balanced detector computing probe - g * conjugate."""

    model_config = ConfigDict(frozen=True)

    electronic_gain: float = Field(default=1.0, ge=0.0)


def differential_noise(m: TwoModeMoments, det: DifferentialDetector) -> Tuple[float, float]:
    """Variance of p - g*c and the shot-noise variance of the same measurement.

    The SNL is the variance the detector would see with coherent beams of the
    same mean powers: mean_p + g**2 * mean_c.

    Returns:
        (variance, snl) in counts squared
    """
    g = det.electronic_gain
    variance = m.var_p + g * g * m.var_c - 2.0 * g * m.cov
    snl = m.mean_p + g * g * m.mean_c
    return variance, snl


def noise_ratio(m: TwoModeMoments, gain: float) -> float:
    """Differential noise normalized to the SNL at electronic gain ``gain``."""
    variance, snl = differential_noise(m, DifferentialDetector(electronic_gain=gain))
    if snl <= 0:
        raise PreconditionError(f"Shot-noise level is zero at g={gain}; no light detected")
    return variance / snl


def golden_section_gain(m: TwoModeMoments, upper: float) -> float:
    """Gain in [0, upper] minimizing the noise ratio by golden-section search.

    A coarse grid brackets the minimum; a minimum on either end of the
    interval is returned as is.
    """
    grid = np.linspace(0.0, upper, GAIN_GRID_POINTS)
    if m.mean_p == 0:
        grid = grid[1:]
    values = np.array([noise_ratio(m, g) for g in grid])
    i = int(np.argmin(values))
    if i in (0, grid.size - 1) or not (values[i] < values[i - 1] and values[i] < values[i + 1]):
        return float(grid[i])

    result = minimize_scalar(
        lambda g: noise_ratio(m, g),
        bracket=(grid[i - 1], grid[i], grid[i + 1]),
        method="golden",
    )
    return float(np.clip(result.x, 0.0, upper))


def _stationary_gains(m: TwoModeMoments, upper: float) -> list:
    # d/dg (variance/snl) = 0 reduces to a g^2 + b g + c = 0
    a = m.cov * m.mean_c
    b = m.var_c * m.mean_p - m.var_p * m.mean_c
    c = -m.cov * m.mean_p
    scale = max(abs(a), abs(b), abs(c))

    if scale == 0.0 or abs(a) < QUADRATIC_DEGENERACY_RTOL * scale:
        logger.debug("Gain quadratic degenerate, using golden-section search")
        return [golden_section_gain(m, upper)]

    disc = b * b - 4.0 * a * c
    if disc < 0:
        return []
    root = math.sqrt(disc)
    return [g for g in ((-b + root) / (2.0 * a), (-b - root) / (2.0 * a)) if g > 0]


def optimize_gain(
    m: TwoModeMoments,
    upper: Optional[float] = None,
) -> Tuple[float, SqueezingLevel]:
    """Electronic gain minimizing differential noise relative to the SNL.

    The closed-form stationary point is preferred; a golden-section search on
    [0, upper] takes over when the quadratic degenerates. The returned gain is
    the best of the stationary points, g = 0 and g = 1, so the residual never
    exceeds the unit-gain or probe-only readings.

    Args:
        m: Moments after losses
        upper: Upper bracket of the fallback search (default 10)

    Returns:
        (g_opt, residual squeezing at g_opt)

    Raises:
        PreconditionError: If all moments are zero
    """
    if m.is_degenerate:
        raise PreconditionError("Cannot optimize gain for all-zero moments")

    if m.mean_c == 0:
        if m.mean_p == 0:
            raise PreconditionError("Probe arm carries no light while conjugate is empty")
        return 0.0, SqueezingLevel.from_linear(noise_ratio(m, 0.0))

    upper = DEFAULT_GAIN_SEARCH_UPPER if upper is None else upper
    candidates = [1.0] + _stationary_gains(m, upper)
    if m.mean_p > 0:
        candidates.append(0.0)

    ratios = {g: noise_ratio(m, g) for g in candidates}
    g_opt = min(ratios, key=ratios.get)
    residual = SqueezingLevel.from_linear(ratios[g_opt])
    logger.debug(f"Optimized electronic gain g={g_opt:.6f}, residual {residual.db:.4f} dB")
    return g_opt, residual
