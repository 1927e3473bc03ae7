"""Configuration management for the sensing toolkit."""

from pydantic_settings import BaseSettings
from pydantic import Field


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables (prefix ``QSENSE_``)."""

    # ===== LOGGING CONFIGURATION =====
    log_level: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR)"
    )
    log_dir: str = Field(
        default="logs",
        description="Directory for run log files"
    )
    log_to_file: bool = Field(
        default=True,
        description="Write a detailed log file next to console output"
    )

    # ===== OUTPUT =====
    output_dir: str = Field(
        default="outputs",
        description="Default report directory for CLI commands"
    )
    reproducible_timestamps: bool = Field(
        default=True,
        description="Take manifest timestamps from SOURCE_DATE_EPOCH instead of the clock"
    )

    # ===== PLASMONIC MODEL =====
    spectrum_path: str = Field(
        default="data/eot_transmission_approx.csv",
        description="Two-column transmission spectrum CSV (wavelength_nm, transmission)"
    )
    slope_window_nm: float = Field(
        default=10.0,
        gt=0,
        description="Full width of the least-squares window for dT/dlambda"
    )

    # ===== QUANTUM NOISE =====
    default_conj_transmission: float = Field(
        default=0.95,
        ge=0.0,
        le=1.0,
        description="Conjugate-arm transmission when a scenario does not give one"
    )
    gain_search_upper: float = Field(
        default=10.0,
        gt=0,
        description="Upper bracket of the golden-section electronic gain search"
    )

    # ===== SIGNAL CHAIN / EXTRACTION =====
    log_average_bias_db: float = Field(
        default=0.0,
        description="Log-averaging noise bias added to analyzer floors (literature ~2.5 dB)"
    )
    confidence: float = Field(
        default=0.99,
        gt=0.5,
        lt=1.0,
        description="One-sided confidence for the noise-only detection threshold"
    )
    noise_only_samples: int = Field(
        default=1000,
        ge=10,
        description="Noise-only amplitude readings drawn per stochastic ramp"
    )

    # ===== MONTE CARLO ORACLE =====
    oracle_samples: int = Field(
        default=2 ** 20,
        ge=2 ** 10,
        description="Samples per oracle time series"
    )
    oracle_tolerance_se: float = Field(
        default=3.0,
        gt=0,
        description="Oracle agreement tolerance in standard errors"
    )
    validation_trials: int = Field(
        default=50,
        ge=10,
        description="Default stochastic trials for validate_pipeline"
    )

    class Config:
        """Pydantic configuration."""
        env_prefix = "QSENSE_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False
        extra = "ignore"


def get_settings() -> Settings:
    """Get toolkit settings.

    Returns:
        Settings: instance loaded from environment variables and ``.env``
    """
    return Settings()
