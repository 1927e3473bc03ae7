"""Quantum-noise core: photon-count moments, loss and differential detection."""

from src.quantum.moments import (
    LossChannel,
    SqueezingLevel,
    TwinBeamSource,
    TwoModeMoments,
    apply_loss,
    compose_losses,
    db_to_linear,
    gain_from_squeezing,
    linear_to_db,
    source_moments,
)
from src.quantum.detection import (
    DifferentialDetector,
    differential_noise,
    golden_section_gain,
    noise_ratio,
    optimize_gain,
)

__all__ = [
    "LossChannel",
    "SqueezingLevel",
    "TwinBeamSource",
    "TwoModeMoments",
    "apply_loss",
    "compose_losses",
    "db_to_linear",
    "gain_from_squeezing",
    "linear_to_db",
    "source_moments",
    "DifferentialDetector",
    "differential_noise",
    "golden_section_gain",
    "noise_ratio",
    "optimize_gain",
]
