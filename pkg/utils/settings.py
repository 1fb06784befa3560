"""
Rigid Symbol Toolkit - Configuration Settings
"""

from pathlib import Path
from pydantic_settings import BaseSettings, SettingsConfigDict

PROJECT_ROOT = Path(__file__).resolve().parent.parent

VALID_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
VALID_FORMATS = ("text", "json", "csv")


class Settings(BaseSettings):
    # Application settings
    app_name: str = "Rigid Symbol Toolkit"
    version: str = "1.0.0"
    log_level: str = "WARNING"

    # Fixture directory (override with RIGIDSYM_FIXTURES)
    fixtures: Path = PROJECT_ROOT / "fixtures"
    appendix_fixture: str = "appendix_so13_sp12.csv"

    # Enumeration settings
    max_workers: int = 1  # 1 keeps every rank in-process

    # Output settings
    default_format: str = "text"
    schema_version: str = "rigidsym/1"

    model_config = SettingsConfigDict(
        env_prefix="RIGIDSYM_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        self._validate_settings()

    def _validate_settings(self):
        """Validate that every setting holds a usable value"""
        invalid_fields = []
        if self.log_level.upper() not in VALID_LOG_LEVELS:
            invalid_fields.append("log_level")
        if self.max_workers < 1:
            invalid_fields.append("max_workers")
        if self.default_format not in VALID_FORMATS:
            invalid_fields.append("default_format")

        if invalid_fields:
            raise ValueError(
                f"Invalid settings: {', '.join(invalid_fields)}. "
                f"Check the RIGIDSYM_* environment variables or your .env file."
            )

    @property
    def appendix_path(self) -> Path:
        return Path(self.fixtures) / self.appendix_fixture


# Global settings instance
settings = Settings()


def get_settings() -> Settings:
    """Get the global settings instance"""
    return settings
