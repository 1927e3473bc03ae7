"""Scenario files and the resolved ramp scenario.

Scenario files are YAML with one section per part of the setup and units in
the key names::

    source:      {squeezing_db: 9.0}
    losses:      {probe_optics_transmission: 0.73, conj_transmission: 0.95}
    sensor:      {wavelength_nm: 795, spectrum_path: data/eot_transmission_approx.csv}
    probe:       {post_sensor_power_uw: 70}
    analyzer:    {rbw_hz: 100, vbw_hz: 10, trace_averages: 50}
    calibration: {path_length_mm: 6.35, scan_amplitude_v: 2.0, modulation_per_drive_v_per_v: 0.01}
    ramp:        {start_v: 0, stop_v: 1, duration_s: 10, points: 101}
    detection_bandwidth_hz: 100

Values are resolved with the precedence: ``--set``/CLI flags, then the
file, then ``QSENSE_*`` settings, then built-in defaults.
"""

from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.config import Settings, get_settings
from src.errors import ConfigError, PreconditionError
from src.experiment.calibration import ChamberCalibration
from src.logger import get_logger
from src.plasmonic import (
    MetalPermittivity,
    NanoholeGeometry,
    SensorResponse,
    dispersion_S,
    load_spectrum,
    slope_dT_dlambda,
    transmission_at,
)
from src.quantum import LossChannel, TwinBeamSource, compose_losses
from src.signal_chain import AnalyzerSettings

logger = get_logger()

PROJECT_ROOT = Path(__file__).resolve().parents[2]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SourceSection(_Section):
    squeezing_db: float = Field(..., ge=0.0)
    seed_flux_per_s: float = Field(default=1.0e14, gt=0.0)


class LossSection(_Section):
    probe_optics_transmission: float = Field(default=1.0, ge=0.0, le=1.0)
    probe_transmission: Optional[float] = Field(
        default=None, ge=0.0, le=1.0, description="Total probe transmission, replaces sensor x optics"
    )
    conj_transmission: Optional[float] = Field(default=None, ge=0.0, le=1.0)


class SensorSection(_Section):
    wavelength_nm: float = Field(..., gt=0.0)
    spectrum_path: Optional[str] = None
    slope_window_nm: Optional[float] = Field(default=None, gt=0.0)
    transmission: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    slope_per_nm: Optional[float] = None
    dispersion_nm_per_riu: Optional[float] = Field(default=None, gt=0.0)
    pitch_nm: float = Field(default=400.0, gt=0.0)
    mode_p: int = 1
    mode_q: int = 0
    medium_index: float = Field(default=1.0, gt=0.0)
    permittivity_real: float = Field(default=-24.5, lt=0.0)
    permittivity_imag: float = 1.83

    @model_validator(mode="after")
    def _explicit_pair(self) -> "SensorSection":
        if (self.transmission is None) != (self.slope_per_nm is None):
            raise ValueError("transmission and slope_per_nm must be given together")
        return self


class ProbeSection(_Section):
    post_sensor_power_uw: float = Field(..., gt=0.0)


class AnalyzerSection(_Section):
    rbw_hz: float = Field(..., gt=0.0)
    vbw_hz: float = Field(..., gt=0.0)
    trace_averages: int = Field(default=1, ge=1)
    center_freq_hz: float = Field(default=1.0e6, gt=0.0)
    span_hz: float = Field(default=0.0, ge=0.0)
    sweep_time_s: float = Field(default=1.0, gt=0.0)


class CalibrationSection(_Section):
    path_length_mm: float = Field(..., gt=0.0)
    scan_amplitude_v: float = Field(..., gt=0.0)
    modulation_per_drive_v_per_v: float = Field(..., gt=0.0)


class RampSection(_Section):
    start_v: float = Field(default=0.0, ge=0.0)
    stop_v: float = Field(..., ge=0.0)
    duration_s: float = Field(default=10.0, gt=0.0)
    points: int = Field(default=101, ge=2)

    @model_validator(mode="after")
    def _ordered(self) -> "RampSection":
        if self.stop_v < self.start_v:
            raise ValueError("stop_v must not be below start_v")
        return self


class MomentsOverride(_Section):
    """Raw moments for validation runs; invariants are checked where they are used."""
    mean_p: float
    mean_c: float
    var_p: float
    var_c: float
    cov: float


class ValidationSection(_Section):
    trials: Optional[int] = None
    series_samples: int = Field(default=2 ** 14, ge=2 ** 10)
    oracle_samples: Optional[int] = Field(default=None, ge=2 ** 10)
    moments_override: Optional[MomentsOverride] = None


class ScenarioConfig(_Section):
    """Parsed scenario file; every section is optional until a command needs it."""

    source: Optional[SourceSection] = None
    losses: LossSection = Field(default_factory=LossSection)
    sensor: Optional[SensorSection] = None
    probe: Optional[ProbeSection] = None
    analyzer: Optional[AnalyzerSection] = None
    calibration: Optional[CalibrationSection] = None
    ramp: Optional[RampSection] = None
    validation: ValidationSection = Field(default_factory=ValidationSection)
    detection_bandwidth_hz: float = Field(default=1.0, gt=0.0)
    base_dir: Optional[str] = Field(default=None, exclude=True)

    def require(self, *sections: str) -> None:
        """Raise ConfigError naming the first missing section."""
        for name in sections:
            if getattr(self, name) is None:
                raise ConfigError("Field required", key_path=name)

    def snapshot(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", exclude_none=True)


class RampScenario(BaseModel):
    """Fully resolved voltage-ramp experiment."""

    model_config = ConfigDict(frozen=True)

    source: TwinBeamSource
    probe_loss: LossChannel
    conj_loss: LossChannel
    sensor: SensorResponse
    post_sensor_power: float = Field(..., gt=0.0, description="W")
    wavelength: float = Field(..., gt=0.0, description="nm")
    analyzer: AnalyzerSettings
    drive_schedule: Tuple[Tuple[float, float], ...]
    calibration: ChamberCalibration
    detection_bandwidth: float = Field(..., gt=0.0)

    @model_validator(mode="after")
    def _schedule(self) -> "RampScenario":
        times = np.array([t for t, _ in self.drive_schedule], dtype=float)
        drives = np.array([v for _, v in self.drive_schedule], dtype=float)
        if times.size == 0:
            raise PreconditionError("Drive schedule is empty")
        if np.any(drives < 0):
            raise PreconditionError("Drive schedule contains negative voltages")
        if np.any(np.diff(times) < 0):
            raise PreconditionError("Drive schedule times must be non-decreasing")
        return self


def _format_validation_error(exc: ValidationError) -> ConfigError:
    err = exc.errors()[0]
    key_path = ".".join(str(part) for part in err["loc"]) or None
    return ConfigError(err["msg"], key_path=key_path)


def _parse_value(text: str) -> Any:
    return yaml.safe_load(text) if text != "" else None


def apply_overrides(data: Dict[str, Any], overrides: Iterable[str]) -> Dict[str, Any]:
    """Apply ``section.key=value`` assignments (values parsed as YAML scalars)."""
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"Override {item!r} is not of the form key.path=value")
        path, _, raw = item.partition("=")
        keys = [k for k in path.strip().split(".") if k]
        if not keys:
            raise ConfigError(f"Override {item!r} has an empty key path")
        node = data
        for key in keys[:-1]:
            child = node.setdefault(key, {})
            if not isinstance(child, dict):
                raise ConfigError("cannot override inside a scalar value", key_path=".".join(keys))
            node = child
        node[keys[-1]] = _parse_value(raw.strip())
    return data


def load_scenario_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Iterable[str] = (),
) -> ScenarioConfig:
    """Read a YAML scenario file (optional) and apply overrides.

    Raises:
        ConfigError: unreadable file, YAML syntax error, or an invalid key
    """
    data: Dict[str, Any] = {}
    base_dir = None
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"Cannot read scenario file {path}: {exc}") from exc
        try:
            loaded = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"Invalid YAML in {path}: {exc}") from exc
        if loaded is not None and not isinstance(loaded, dict):
            raise ConfigError(f"Scenario file {path} must contain a mapping at top level")
        data = loaded or {}
        base_dir = str(path.resolve().parent)
        logger.debug(f"Loaded scenario file {path}")

    data = apply_overrides(data, overrides)
    try:
        config = ScenarioConfig(**data)
    except ValidationError as exc:
        raise _format_validation_error(exc) from exc
    return config.model_copy(update={"base_dir": base_dir})


def resolve_path(path: str, base_dir: Optional[str] = None) -> Path:
    """Locate a data file relative to the scenario, the working directory or the project."""
    candidate = Path(path)
    if candidate.is_absolute():
        return candidate
    for root in filter(None, (base_dir, Path.cwd(), PROJECT_ROOT)):
        resolved = Path(root) / candidate
        if resolved.exists():
            return resolved
    return candidate


def build_sensor(config: ScenarioConfig, settings: Optional[Settings] = None) -> SensorResponse:
    """Operating point from explicit values or from a spectrum plus nanohole geometry."""
    config.require("sensor")
    settings = settings or get_settings()
    sensor = config.sensor

    dispersion = sensor.dispersion_nm_per_riu
    if dispersion is None:
        geom = NanoholeGeometry(
            pitch_d=sensor.pitch_nm,
            mode_p=sensor.mode_p,
            mode_q=sensor.mode_q,
            medium_index_n=sensor.medium_index,
        )
        metal = MetalPermittivity(real_part=sensor.permittivity_real, imag_part=sensor.permittivity_imag)
        dispersion = dispersion_S(geom, metal)

    if sensor.transmission is not None:
        t_at, slope = sensor.transmission, sensor.slope_per_nm
    else:
        spectrum = load_spectrum(resolve_path(sensor.spectrum_path or settings.spectrum_path, config.base_dir))
        window = sensor.slope_window_nm or settings.slope_window_nm
        t_at = transmission_at(spectrum, sensor.wavelength_nm)
        slope = slope_dT_dlambda(spectrum, sensor.wavelength_nm, window)

    response = SensorResponse.from_values(
        wavelength=sensor.wavelength_nm,
        t_at=t_at,
        dT_dlambda=slope,
        dispersion_S=dispersion,
    )
    logger.debug(
        f"Sensor at {response.wavelength} nm: T={response.t_at:.4f}, "
        f"dT/dlambda={response.dT_dlambda:.5f}/nm, S={response.dispersion_S:.1f} nm/RIU"
    )
    return response


def probe_channels(
    config: ScenarioConfig,
    sensor: Optional[SensorResponse],
    settings: Optional[Settings] = None,
) -> Tuple[LossChannel, LossChannel]:
    """Probe (sensor x optics, unless given directly) and conjugate loss channels."""
    settings = settings or get_settings()
    losses = config.losses
    if losses.probe_transmission is not None:
        probe = LossChannel(transmission=losses.probe_transmission)
    else:
        if sensor is None:
            raise ConfigError("Field required", key_path="losses.probe_transmission")
        probe = compose_losses(sensor.t_at, losses.probe_optics_transmission)
    conj_t = losses.conj_transmission
    conj = LossChannel(transmission=settings.default_conj_transmission if conj_t is None else conj_t)
    return probe, conj


def build_analyzer(config: ScenarioConfig) -> AnalyzerSettings:
    config.require("analyzer")
    a = config.analyzer
    return AnalyzerSettings(
        center_freq=a.center_freq_hz,
        rbw=a.rbw_hz,
        vbw=a.vbw_hz,
        span=a.span_hz,
        sweep_time=a.sweep_time_s,
        trace_averages=a.trace_averages,
    )


def build_calibration(config: ScenarioConfig) -> ChamberCalibration:
    config.require("calibration", "sensor")
    c = config.calibration
    return ChamberCalibration(
        wavelength=config.sensor.wavelength_nm,
        path_length=c.path_length_mm,
        scan_amplitude=c.scan_amplitude_v,
        modulation_amplitude_per_drive=c.modulation_per_drive_v_per_v,
    )


def drive_schedule(ramp: RampSection) -> Tuple[Tuple[float, float], ...]:
    times = np.linspace(0.0, ramp.duration_s, ramp.points)
    drives = np.linspace(ramp.start_v, ramp.stop_v, ramp.points)
    return tuple((float(t), float(v)) for t, v in zip(times, drives))


def build_scenario(config: ScenarioConfig, settings: Optional[Settings] = None) -> RampScenario:
    """Resolve a parsed scenario file into a RampScenario."""
    config.require("source", "sensor", "probe", "analyzer", "calibration", "ramp")
    settings = settings or get_settings()
    sensor = build_sensor(config, settings)
    probe_loss, conj_loss = probe_channels(config, sensor, settings)
    return RampScenario(
        source=TwinBeamSource.from_squeezing(config.source.squeezing_db, config.source.seed_flux_per_s),
        probe_loss=probe_loss,
        conj_loss=conj_loss,
        sensor=sensor,
        post_sensor_power=config.probe.post_sensor_power_uw * 1.0e-6,
        wavelength=config.sensor.wavelength_nm,
        analyzer=build_analyzer(config),
        drive_schedule=drive_schedule(config.ramp),
        calibration=build_calibration(config),
        detection_bandwidth=config.detection_bandwidth_hz,
    )
