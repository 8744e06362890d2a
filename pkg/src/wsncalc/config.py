"""Runtime configuration via environment variables with Pydantic validation.

All values are read from WSNCALC_* environment variables (with .env file support).
CLI options override them per invocation. Invalid values fail loudly.
"""

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from wsncalc.bounds.models import EffectiveBandwidthMode
from wsncalc.log_config import LOG_FORMATS
from wsncalc.scheduling.models import Convention


class Settings(BaseSettings):
    """wsncalc settings. All values sourced from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="WSNCALC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = "WARNING"
    log_format: str = "console"

    # Oracle grid
    grid_step_ms: float = Field(default=0.05, gt=0.0)
    horizon_factor: float = Field(default=4.0, ge=1.0)
    random_scenarios: int = Field(default=50, ge=0)
    random_seed: int = 20110101

    # Computation defaults
    default_convention: Convention = Convention.PAPER_NUMERIC
    default_ee_mode: EffectiveBandwidthMode = EffectiveBandwidthMode.AGGREGATE
    fractal_gamma: float = Field(default=6.0, gt=0.0)

    # Parallel evaluation of sweep points and validation scenarios
    max_workers: int = Field(default=4, ge=1)

    @field_validator("log_format")
    @classmethod
    def log_format_known(cls, v: str) -> str:
        if v not in LOG_FORMATS:
            raise ValueError(f"WSNCALC_LOG_FORMAT must be one of {', '.join(LOG_FORMATS)}")
        return v

    @field_validator("log_level")
    @classmethod
    def log_level_known(cls, v: str) -> str:
        level = v.strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level '{v}'")
        return level


def get_settings() -> Settings:
    """Create and return a validated Settings instance.

    Raises ValidationError with clear messages if an env var holds an invalid value.
    """
    return Settings()
