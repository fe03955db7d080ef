"""
Configuration module: environment loading and the runtime settings singleton.
"""
import logging
import os
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from .utils import logger

# Load environment variables
load_dotenv()


# ===== SETTINGS MODEL =====

class Settings(BaseModel):
    """Runtime knobs shared by the kernels and the CLI."""

    precision: int = Field(40, description="Default absolute pi-adic precision of scenario fields")
    nu: int = Field(2, description="Default exponent nu for comparisons modulo p^nu-th powers")
    max_conductor: int = Field(120, description="Largest cyclotomic conductor accepted by bloch-dilog")
    quad_tolerances: List[float] = Field(
        default_factory=lambda: [1e-9, 1e-11],
        description="Absolute tolerance ladder for contour quadrature",
    )
    quad_accept: float = Field(1e-7, description="Largest disagreement accepted between ladder rungs")
    path_margin: float = Field(1e-3, description="Minimum distance of a contour ray from zeros and poles")
    dps: int = Field(30, description="mpmath working decimal digits for the dilogarithm")
    jobs: int = Field(1, description="Default worker count for suite runs")
    log_level: str = Field("INFO", description="Logging level name")


# ===== ENVIRONMENT PARSING =====

def _env_int(name: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"⚠️  {name}={raw!r} is not an integer, using {default}")
        return default
    if value < minimum:
        logger.warning(f"⚠️  {name}={value} below minimum {minimum}, using {default}")
        return default
    return value


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        logger.warning(f"⚠️  {name}={raw!r} is not a number, using {default}")
        return default
    if value <= 0:
        logger.warning(f"⚠️  {name} must be positive, using {default}")
        return default
    return value


def _env_ladder(name: str, default: List[float]) -> List[float]:
    raw = os.getenv(name)
    if not raw:
        return list(default)
    try:
        ladder = [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        logger.warning(f"⚠️  {name}={raw!r} is not a comma-separated ladder, using default")
        return list(default)
    if not ladder or any(t <= 0 for t in ladder):
        logger.warning(f"⚠️  {name} must list positive tolerances, using default")
        return list(default)
    return sorted(ladder, reverse=True)


def load_settings() -> Settings:
    """Build a Settings instance from the current environment."""
    defaults = Settings()
    level = os.getenv("REGULATOR_LOG_LEVEL", defaults.log_level).upper()
    if not isinstance(logging.getLevelName(level), int):
        logger.warning(f"⚠️  REGULATOR_LOG_LEVEL={level!r} unknown, using INFO")
        level = "INFO"
    return Settings(
        precision=_env_int("REGULATOR_PRECISION", defaults.precision, minimum=4),
        nu=_env_int("REGULATOR_NU", defaults.nu, minimum=0),
        max_conductor=_env_int("REGULATOR_MAX_CONDUCTOR", defaults.max_conductor),
        quad_tolerances=_env_ladder("REGULATOR_QUAD_TOLERANCES", defaults.quad_tolerances),
        quad_accept=_env_float("REGULATOR_QUAD_ACCEPT", defaults.quad_accept),
        path_margin=_env_float("REGULATOR_PATH_MARGIN", defaults.path_margin),
        dps=_env_int("REGULATOR_DPS", defaults.dps, minimum=15),
        jobs=_env_int("REGULATOR_JOBS", defaults.jobs),
        log_level=level,
    )


# ===== SETTINGS SINGLETON =====

_settings_instance: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Returns the process-wide settings, loading them on first use.

    Returns:
        Settings: the cached settings object
    """
    global _settings_instance
    if _settings_instance is None:
        _settings_instance = load_settings()
        logging.getLogger().setLevel(_settings_instance.log_level)
        logger.debug(
            f"Settings loaded: precision={_settings_instance.precision}, "
            f"nu={_settings_instance.nu}, max_conductor={_settings_instance.max_conductor}"
        )
    return _settings_instance


def reset_settings() -> None:
    """Drop the cached settings so the next get_settings() rereads the environment."""
    global _settings_instance
    _settings_instance = None
