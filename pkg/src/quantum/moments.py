"""Photon-count moment types, twin-beam generation and loss propagation.

Optical fields are carried only by their first and second photon-counting
moments per integration window. A beam splitter of transmission T acting on
an arm maps

    mean' = T * mean
    var'  = T**2 * var + T * (1 - T) * mean

and the cross covariance picks up the product of both transmissions. The
second term is the whole contribution of the vacuum mode entering the open
port; no operator objects exist.
"""

import math

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from src.errors import InvariantViolationError, PreconditionError

# Relative slack for Cauchy-Schwarz after floating point propagation
CAUCHY_SCHWARZ_RTOL = 1e-9


def db_to_linear(db: float) -> float:
    """Convert squeezing in dB below the SNL to the linear noise ratio R."""
    if not math.isfinite(db):
        raise PreconditionError(f"Squeezing level must be finite, got {db}")
    return 10.0 ** (-db / 10.0)


def linear_to_db(ratio: float) -> float:
    """Inverse of :func:`db_to_linear`."""
    if not (math.isfinite(ratio) and ratio > 0):
        raise PreconditionError(f"Noise ratio must be positive and finite, got {ratio}")
    return -10.0 * math.log10(ratio)


class SqueezingLevel(BaseModel):
    """Noise relative to the shot-noise limit; positive dB means below the SNL."""

    model_config = ConfigDict(frozen=True)

    db: float

    @field_validator("db")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise PreconditionError(f"Squeezing level must be finite, got {value}")
        return value

    @computed_field
    @property
    def linear_r(self) -> float:
        return db_to_linear(self.db)

    @property
    def percent_below_snl(self) -> float:
        """Noise reduction as a percentage of the SNL (9 dB -> 87.4%)."""
        return (1.0 - self.linear_r) * 100.0

    @classmethod
    def from_linear(cls, ratio: float) -> "SqueezingLevel":
        return cls(db=linear_to_db(ratio))


class TwinBeamSource(BaseModel):
    """Seeded phase-insensitive amplifier, parameterized by gain G and seed flux."""

    model_config = ConfigDict(frozen=True)

    gain: float = Field(..., ge=1.0, description="Amplifier gain G")
    seed_flux: float = Field(..., gt=0.0, description="Seed photons per second")

    @classmethod
    def from_squeezing(cls, db: float, seed_flux: float) -> "TwinBeamSource":
        return cls(gain=gain_from_squeezing(db), seed_flux=seed_flux)

    @property
    def ideal_ratio(self) -> float:
        """Intensity-difference noise ratio of the unattenuated beams, 1/(2G-1)."""
        return 1.0 / (2.0 * self.gain - 1.0)


def gain_from_squeezing(db: float) -> float:
    """Amplifier gain whose ideal difference-noise ratio equals R: 2G - 1 = 1/R."""
    ratio = db_to_linear(db)
    if ratio > 1.0:
        raise PreconditionError(f"A twin-beam source cannot be noisier than the SNL ({db} dB)")
    return 0.5 * (1.0 / ratio + 1.0)


class TwoModeMoments(BaseModel):
    """Probe/conjugate photon-count moments for one integration window."""

    model_config = ConfigDict(frozen=True)

    mean_p: float = Field(..., ge=0.0)
    mean_c: float = Field(..., ge=0.0)
    var_p: float = Field(..., ge=0.0)
    var_c: float = Field(..., ge=0.0)
    cov: float = 0.0

    @model_validator(mode="after")
    def _check_invariants(self) -> "TwoModeMoments":
        values = (self.mean_p, self.mean_c, self.var_p, self.var_c, self.cov)
        if not all(math.isfinite(v) for v in values):
            raise InvariantViolationError(f"Moments must be finite: {values}")
        bound = self.var_p * self.var_c
        if self.cov * self.cov > bound * (1.0 + CAUCHY_SCHWARZ_RTOL):
            raise InvariantViolationError(
                f"Cauchy-Schwarz violated: cov^2={self.cov ** 2:.6g} > "
                f"var_p*var_c={bound:.6g}"
            )
        return self

    @classmethod
    def coherent(cls, mean_p: float, mean_c: float = 0.0) -> "TwoModeMoments":
        """Two independent Poissonian beams."""
        return cls(mean_p=mean_p, mean_c=mean_c, var_p=mean_p, var_c=mean_c, cov=0.0)

    @property
    def fano_p(self) -> float:
        return self.var_p / self.mean_p if self.mean_p > 0 else float("nan")

    @property
    def fano_c(self) -> float:
        return self.var_c / self.mean_c if self.mean_c > 0 else float("nan")

    @property
    def is_degenerate(self) -> bool:
        return not any((self.mean_p, self.mean_c, self.var_p, self.var_c, self.cov))

    def scaled(self, factor: float) -> "TwoModeMoments":
        """Rescale to a window ``factor`` times as long.

        Every moment is linear in the seed photon number, so a longer or
        shorter window (or a renormalized seed) scales them all alike.
        """
        if not factor >= 0:
            raise PreconditionError(f"Scale factor must be non-negative, got {factor}")
        return TwoModeMoments(
            mean_p=self.mean_p * factor,
            mean_c=self.mean_c * factor,
            var_p=self.var_p * factor,
            var_c=self.var_c * factor,
            cov=self.cov * factor,
        )


class LossChannel(BaseModel):
    """Beam-splitter loss on one arm."""

    model_config = ConfigDict(frozen=True)

    transmission: float = Field(..., ge=0.0, le=1.0)


def compose_losses(*transmissions: float) -> LossChannel:
    """Single channel equivalent to a cascade of losses (e.g. sensor x optics)."""
    return LossChannel(transmission=math.prod(transmissions))


def source_moments(source: TwinBeamSource, window: float) -> TwoModeMoments:
    """Moments of the seeded amplifier output over one window of ``window`` seconds.

    With N0 = seed_flux * window::

        mean_p = G N0             var_p = G (2G-1) N0
        mean_c = (G-1) N0         var_c = (G-1)(2G-1) N0
        cov    = ((2G-1)**2 - 1) N0 / 2

    so Var(p - c) / (mean_p + mean_c) = 1 / (2G - 1).
    """
    if not window > 0:
        raise PreconditionError(f"Integration window must be positive, got {window}")
    g = source.gain
    n0 = source.seed_flux * window
    k = 2.0 * g - 1.0
    return TwoModeMoments(
        mean_p=g * n0,
        mean_c=(g - 1.0) * n0,
        var_p=g * k * n0,
        var_c=(g - 1.0) * k * n0,
        cov=(k * k - 1.0) * n0 / 2.0,
    )


def _attenuate(mean: float, var: float, t: float) -> tuple:
    return t * mean, t * t * var + t * (1.0 - t) * mean


def apply_loss(
    m: TwoModeMoments,
    probe_channel: LossChannel,
    conj_channel: LossChannel,
) -> TwoModeMoments:
    """Propagate both arms through independent beam-splitter losses."""
    tp = probe_channel.transmission
    tc = conj_channel.transmission
    mean_p, var_p = _attenuate(m.mean_p, m.var_p, tp)
    mean_c, var_c = _attenuate(m.mean_c, m.var_c, tc)
    return TwoModeMoments(
        mean_p=mean_p,
        mean_c=mean_c,
        var_p=var_p,
        var_c=var_c,
        cov=tp * tc * m.cov,
    )

