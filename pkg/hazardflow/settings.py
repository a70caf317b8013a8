"""Settings for the HTTP service."""

from pydantic_settings import BaseSettings

from hazardflow.schemas.analysis import Rankdir
from hazardflow.services.flowgraph import DEFAULT_PATH_CAP


LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class Settings(BaseSettings):
    """Settings for the HTTP service, read from ``HAZARDFLOW_*`` variables."""

    gunicorn_workers: int = 1
    path_cap: int = DEFAULT_PATH_CAP
    log_level: str = "INFO"
    rankdir: Rankdir = Rankdir.TOP_TO_BOTTOM

    class Config:
        """Config for the service."""

        env_file = ".env"
        env_prefix = "HAZARDFLOW_"
        extra = "ignore"


def get_settings() -> Settings:
    """Get settings."""
    return Settings()
