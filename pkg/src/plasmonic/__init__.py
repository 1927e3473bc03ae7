"""EOT sensor model: spectrum, dispersion and transduction."""

from src.plasmonic.spectrum import (
    TransmissionSpectrum,
    load_spectrum,
    lorentzian_slope,
    lorentzian_transmission,
    slope_dT_dlambda,
    synth_spectrum,
    transmission_at,
)
from src.plasmonic.dispersion import MetalPermittivity, NanoholeGeometry, dispersion_S
from src.plasmonic.response import SensorResponse, sensor_response, transduce

__all__ = [
    "TransmissionSpectrum",
    "load_spectrum",
    "lorentzian_slope",
    "lorentzian_transmission",
    "slope_dT_dlambda",
    "synth_spectrum",
    "transmission_at",
    "MetalPermittivity",
    "NanoholeGeometry",
    "dispersion_S",
    "SensorResponse",
    "sensor_response",
    "transduce",
]
