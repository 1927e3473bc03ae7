"""Sensor operating point and refractive-index transduction."""

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.errors import InvariantViolationError, PreconditionError
from src.logger import get_logger
from src.plasmonic.dispersion import MetalPermittivity, NanoholeGeometry, dispersion_S
from src.plasmonic.spectrum import TransmissionSpectrum, slope_dT_dlambda, transmission_at

logger = get_logger()


class SensorResponse(BaseModel):
    """Transmission, slope, dispersion and combined dT/dn at one wavelength."""

    model_config = ConfigDict(frozen=True)

    wavelength: float = Field(..., gt=0.0)
    t_at: float = Field(..., ge=0.0, le=1.0)
    dT_dlambda: float
    dispersion_S: float
    dT_dn: float = Field(..., ge=0.0)

    @model_validator(mode="after")
    def _consistent(self) -> "SensorResponse":
        expected = abs(self.dT_dlambda) * abs(self.dispersion_S)
        if not math.isclose(self.dT_dn, expected, rel_tol=1e-12, abs_tol=0.0):
            raise InvariantViolationError(
                f"dT_dn={self.dT_dn} differs from |dT/dlambda|*|S|={expected}"
            )
        return self

    @classmethod
    def from_values(
        cls,
        wavelength: float,
        t_at: float,
        dT_dlambda: float,
        dispersion_S: float,
    ) -> "SensorResponse":
        return cls(
            wavelength=wavelength,
            t_at=t_at,
            dT_dlambda=dT_dlambda,
            dispersion_S=dispersion_S,
            dT_dn=abs(dT_dlambda) * abs(dispersion_S),
        )


def sensor_response(
    spec: TransmissionSpectrum,
    geom: NanoholeGeometry,
    metal: MetalPermittivity,
    wavelength: float,
    window: float,
) -> SensorResponse:
    """Compose transmission, local slope and dispersion into a SensorResponse."""
    response = SensorResponse.from_values(
        wavelength=wavelength,
        t_at=transmission_at(spec, wavelength),
        dT_dlambda=slope_dT_dlambda(spec, wavelength, window),
        dispersion_S=dispersion_S(geom, metal),
    )
    logger.debug(
        f"Sensor at {wavelength} nm: T={response.t_at:.4f}, "
        f"dT/dlambda={response.dT_dlambda:.5f}/nm, S={response.dispersion_S:.1f} nm/RIU, "
        f"dT/dn={response.dT_dn:.4f}/RIU"
    )
    return response


def transduce(resp: SensorResponse, dn: float, input_window_counts: float) -> float:
    """Peak count modulation produced by an index change ``dn``."""
    if dn < 0 or input_window_counts < 0:
        raise PreconditionError(
            f"dn and input counts must be non-negative (dn={dn}, counts={input_window_counts})"
        )
    return input_window_counts * resp.dT_dn * dn
