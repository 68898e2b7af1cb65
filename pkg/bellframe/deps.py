import logging
from functools import lru_cache
from typing import Annotated, List

from fastapi import Depends
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict
from rich.console import Console
from rich.logging import RichHandler


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix='BELLFRAME_',
        env_file='.env',
        env_file_encoding='utf-8',
        extra='ignore',
    )

    log_level: str = 'INFO'
    workers: int = Field(default=1, ge=1)
    # Part of the Monte Carlo seed-derivation rule: changing it changes the stream.
    mc_chunk_size: int = Field(default=250_000, ge=1)
    default_seed: int = 7
    default_samples: int = Field(default=1_000_000, ge=1)
    default_rate: float = Field(default=1500.0, gt=0)
    default_duration: float = Field(default=20.0, gt=0)
    max_samples: int = Field(default=100_000_000, ge=1)
    cors_origins: List[str] = ["http://localhost:3000"]


@lru_cache
def get_settings() -> Settings:
    return Settings()


settings_dependency = Annotated[Settings, Depends(get_settings)]


def configure_logging(level: str = 'INFO') -> None:
    """Route every bellframe logger through rich on stderr; stdout is reserved for data."""
    handler = RichHandler(
        console=Console(stderr=True),
        show_path=False,
        rich_tracebacks=True,
    )
    logging.basicConfig(
        level=level.upper(),
        format='%(message)s',
        datefmt='[%X]',
        handlers=[handler],
        force=True,
    )
