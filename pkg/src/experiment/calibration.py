"""Interferometric calibration of the acoustic index modulation.

A Michelson arm of length L through the chamber is scanned over fringes of
amplitude A; the drive then produces a fringe modulation of amplitude B.
The index change is

    dn = lambda * B / (pi * A * L)

with B linear in the drive voltage and zero at zero drive.
"""

import math
from typing import Iterable, List

from pydantic import BaseModel, ConfigDict, Field

from src.errors import PreconditionError

NM_PER_MM = 1.0e6


class ChamberCalibration(BaseModel):
    model_config = ConfigDict(frozen=True)

    wavelength: float = Field(..., gt=0.0, description="nm")
    path_length: float = Field(..., gt=0.0, description="mm")
    scan_amplitude: float = Field(..., gt=0.0, description="Fringe amplitude A (V)")
    modulation_amplitude_per_drive: float = Field(
        ..., gt=0.0, description="Fringe modulation B per drive volt (V/V)"
    )

    @property
    def dn_per_volt(self) -> float:
        """Index change per drive volt (RIU/V)."""
        return (
            self.wavelength * self.modulation_amplitude_per_drive
            / (math.pi * self.scan_amplitude * self.path_length * NM_PER_MM)
        )


def modulation_amplitude(cal: ChamberCalibration, drive: float) -> float:
    """Fringe modulation B produced by ``drive`` volts."""
    if drive < 0:
        raise PreconditionError(f"Drive voltage must be non-negative, got {drive}")
    return cal.modulation_amplitude_per_drive * drive


def calibrate_dn(cal: ChamberCalibration, drive: float) -> float:
    """Refractive-index change for a drive voltage."""
    if drive < 0:
        raise PreconditionError(f"Drive voltage must be non-negative, got {drive}")
    return cal.dn_per_volt * drive


def calibration_table(cal: ChamberCalibration, drives: Iterable[float]) -> List[dict]:
    return [
        {
            "drive_v": float(v),
            "modulation_v": modulation_amplitude(cal, v),
            "dn_riu": calibrate_dn(cal, v),
        }
        for v in drives
    ]
