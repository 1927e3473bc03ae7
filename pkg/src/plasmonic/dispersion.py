"""Resonance shift per refractive-index unit for a square nanohole array."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.errors import PreconditionError


class NanoholeGeometry(BaseModel):
    model_config = ConfigDict(frozen=True)

    pitch_d: float = Field(..., gt=0.0, description="Array period (nm)")
    mode_p: int = 1
    mode_q: int = 0
    medium_index_n: float = Field(default=1.0, gt=0.0, description="Dielectric index (RIU)")

    @model_validator(mode="after")
    def _mode_nonzero(self) -> "NanoholeGeometry":
        if self.mode_p == 0 and self.mode_q == 0:
            raise PreconditionError("Grating mode (p, q) = (0, 0) has no plasmon resonance")
        return self


class MetalPermittivity(BaseModel):
    model_config = ConfigDict(frozen=True)

    real_part: float = Field(..., lt=0.0, description="Must be negative (metallic regime)")
    imag_part: float = 0.0

    @property
    def value(self) -> complex:
        return complex(self.real_part, self.imag_part)


def dispersion_S(geom: NanoholeGeometry, metal: MetalPermittivity) -> float:
    """Spectral sensitivity S = d/sqrt(p^2+q^2) * |(eps/(n^2+eps))^(3/2)| in nm/RIU.

    The complex power is evaluated first and its magnitude taken.
    """
    eps = np.complex128(metal.value)
    denominator = geom.medium_index_n ** 2 + eps
    if denominator == 0:
        raise PreconditionError(
            f"n^2 + eps_m = 0 for n={geom.medium_index_n}, eps_m={metal.value} (pole)"
        )
    factor = np.abs(np.power(eps / denominator, 1.5))
    return float(geom.pitch_d / np.hypot(geom.mode_p, geom.mode_q) * factor)
