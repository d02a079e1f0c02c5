from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

load_dotenv()

class Settings(BaseSettings):
    # Logging
    ANISOTAG_LOG_LEVEL: str = "INFO"

    # Nonlinear map construction and cache
    ANISOTAG_MAP_CACHE_DIR: str = ".anisotag-cache"
    ANISOTAG_MAP_KNOTS: int = 1024

    # Pattern sampling density used by the sensor ring
    ANISOTAG_PATTERN_SAMPLES: int = 4096

    # Experiment defaults
    ANISOTAG_DEFAULT_TRIALS: int = 25
    ANISOTAG_DEFAULT_SEED: int = 0

    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=True,
        extra="allow",
    )

settings = Settings()
