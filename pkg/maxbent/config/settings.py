from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Library settings, overridable through MAXBENT_* environment variables or a .env file.
    """

    model_config = SettingsConfigDict(env_prefix="MAXBENT_", env_file=".env", env_file_encoding="utf-8", extra="ignore")

    CENSUS_GUARD: int = 16
    SAMPLED_CENSUS_SIZE: int = 256
    WORKERS: int = 1
    BATCH_SIZE: int = 64
    CCZ_RETRY_CAP: int = 1000
    DEFAULT_SEED: int = 42
    LOG_LEVEL: str = "INFO"


# singleton instance
settings = Settings()
