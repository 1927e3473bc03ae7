"""Result models shared by the experiment, oracle and report layers."""

from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

CONFIGURATIONS = ("twin", "coherent", "matched_pair", "single")


class RampPoint(BaseModel):
    """One schedule point of a voltage ramp."""
    model_config = ConfigDict(frozen=True)

    time_s: float
    drive_v: float
    dn: float = Field(..., description="Refractive-index change (RIU)")
    snr_amplitude: float = Field(..., description="Linear amplitude SNR")


class NoiseStatistics(BaseModel):
    """Noise-only amplitude distribution and the detection threshold built from it."""
    model_config = ConfigDict(frozen=True)

    mean: float
    std: float = Field(..., ge=0.0)
    samples: int = Field(..., ge=0, description="0 when the analytic distribution is used")
    confidence: float
    threshold: float


class RampSeries(BaseModel):
    """SNR-vs-index series for one probing configuration."""
    model_config = ConfigDict(frozen=True)

    configuration: str
    electronic_gain: float
    noise_variance: float = Field(..., description="Differential noise per window (counts^2)")
    shot_noise: float = Field(..., description="SNL of the same measurement (counts^2)")
    points: Tuple[RampPoint, ...]
    noise: NoiseStatistics

    @property
    def noise_ratio(self) -> float:
        return self.noise_variance / self.shot_noise


class RampResult(BaseModel):
    """All configurations of one ramp evaluation."""
    model_config = ConfigDict(frozen=True)

    mode: str
    seed: Optional[int] = None
    trial: int = 0
    detected_counts: float = Field(..., description="Probe counts per window after the sensor")
    input_counts: float = Field(..., description="Probe counts per window before the sensor")
    residual_squeezing_db: float
    series: Dict[str, RampSeries]


class ExtractionResult(BaseModel):
    """Line fit of SNR against index change and its threshold crossing."""
    model_config = ConfigDict(frozen=True)

    slope: float
    intercept: float
    threshold: float
    points_used: int
    dn_min_raw: float = Field(..., gt=0.0, description="RIU in the detection bandwidth")
    bandwidth_hz: float
    dn_min_per_rtHz: float = Field(..., gt=0.0)


class ConfigurationResult(BaseModel):
    configuration: str
    electronic_gain: float
    noise_ratio: float
    noise: NoiseStatistics
    fit: ExtractionResult


class SensitivityReport(BaseModel):
    """Per-configuration fits plus enhancement fractions."""
    configurations: Dict[str, ConfigurationResult]
    residual_squeezing_db: float
    enhancement_vs_balanced: float = Field(..., gt=-1.0)
    enhancement_vs_single: float = Field(..., gt=-1.0)
    enhancement_vs_matched_pair: float = Field(..., gt=-1.0)
    single_from_matched_pair: float = Field(
        ..., description="Single-beam Δn_min inferred from the matched pair (RIU/√Hz)"
    )
    lossless_enhancement: float = Field(
        ..., description="Enhancement the source squeezing would give without loss"
    )


class ValidationCheck(BaseModel):
    name: str
    measured: float
    expected: float
    tolerance: float
    passed: bool
    detail: Optional[str] = None


class ValidationReport(BaseModel):
    checks: List[ValidationCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[ValidationCheck]:
        return [check for check in self.checks if not check.passed]


class RunManifest(BaseModel):
    """Everything needed to re-run a report."""
    command: str
    config: dict
    config_hash: str
    toolkit_version: str
    seed: Optional[int] = None
    started_at: str
    finished_at: str
