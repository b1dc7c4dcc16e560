from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field
from functools import lru_cache
from typing import Optional
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

class Settings(BaseSettings):
    app_name: str = Field("OrliczLab")
    log_level: str = Field("INFO", pattern="^(DEBUG|INFO|WARNING|ERROR)$")
    # Default directory for every CSV the cli writes
    output_dir: str = Field(".")
    # SQLAlchemy URL of the verification ledger; unset means no ledger
    ledger_url: Optional[str] = Field(None)
    seed: int = Field(20240601)
    sweep_ds: float = Field(1.0 / 64.0, gt=0.0)
    kappa: float = Field(1.0, gt=0.0)
    jobs: int = Field(1, ge=1)

    model_config = SettingsConfigDict(
        env_prefix="ORLAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

@lru_cache()
def get_settings() -> Settings:
    return Settings()
