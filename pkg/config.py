"""
Configuration management for the BGW code construction toolkit
"""
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from pathlib import Path

# Get base directory for absolute paths
BASE_DIR = Path(__file__).parent.resolve()

# Smallest field cap the finite-field layer accepts
MIN_FIELD_CAP = 100_000


class Settings(BaseSettings):
    """Application settings (ambient concerns only; math inputs come from CLI flags)"""

    model_config = SettingsConfigDict(
        env_prefix="BGWCODES_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    enable_logging: bool = True
    log_level: str = "WARNING"

    # Verification kernels
    default_threads: int = 1

    # Largest field order p^s that gets log/antilog tables
    field_cap: int = MIN_FIELD_CAP

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        return value.upper()

    @field_validator("default_threads")
    @classmethod
    def _positive_threads(cls, value: int) -> int:
        if value < 1:
            raise ValueError("default_threads must be >= 1")
        return value

    @field_validator("field_cap")
    @classmethod
    def _cap_floor(cls, value: int) -> int:
        return max(value, MIN_FIELD_CAP)


settings = Settings()
