import os
from enum import Enum
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

# Load environment variables from .env file if it exists
load_dotenv()


class Protocol(str, Enum):
    """Monte Carlo protocol presets."""
    DESK = "desk"
    FULL = "full"


# (designs per config, trials per design)
PROTOCOL_SIZES = {
    Protocol.DESK: (20, 50),
    Protocol.FULL: (100, 100),
}


class Settings(BaseSettings):
    """Application settings."""

    PROJECT_NAME: str = "GTCS pooling toolkit"

    # Execution settings
    THREADS: int = Field(
        default=os.cpu_count() or 1,
        ge=1,
        description="Maximum number of parallel workers used by sweeps (env GTCS_THREADS)"
    )
    LOG_LEVEL: str = Field(
        default="INFO",
        description="Logging level for the gtcs loggers"
    )

    # Decoder settings
    BINARIZE_EPSILON: float = Field(
        default=1e-9,
        ge=0.0,
        description="A pool load above this value is a positive test result"
    )
    OMP_TOL: float = Field(
        default=1e-8,
        ge=0.0,
        description="Relative residual tolerance for OMP"
    )
    POSITIVE_THRESHOLD: float = Field(
        default=1e-6,
        description="A recovered coefficient above this value marks a positive sample"
    )
    NORMALIZE_COLUMNS: bool = Field(
        default=False,
        description="Use column-normalized correlations in OMP"
    )

    # Simulation settings
    LOAD_FLOOR: float = Field(
        default=0.01,
        gt=0.0,
        le=1.0,
        description="Smallest load drawn for a positive sample"
    )
    DESIGNS_PER_CONFIG: int = Field(
        default=PROTOCOL_SIZES[Protocol.DESK][0],
        ge=1,
        description="Random designs generated per (alpha, d) cell"
    )
    TRIALS_PER_DESIGN: int = Field(
        default=PROTOCOL_SIZES[Protocol.DESK][1],
        ge=1,
        description="Synthetic instances decoded per design"
    )
    SUCCESS_THRESHOLD: float = Field(
        default=0.99,
        ge=0.0,
        le=1.0,
        description="Success rate required by best-alpha tables"
    )
    DEFAULT_MASTER_SEED: int = Field(
        default=20200401,
        ge=0,
        description="Master seed used when none is given"
    )
    OUTPUT_DIRECTORY: str = Field(
        default="./results",
        description="Directory where sweep outputs are written by default"
    )

    model_config = SettingsConfigDict(
        case_sensitive=True,
        env_prefix="GTCS_",
        env_file=".env",
        extra="ignore",
    )


# Create global settings object
settings = Settings()
