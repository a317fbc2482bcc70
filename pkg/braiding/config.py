"""
Configuration for the braiding simulator.
Reads .env values (python-dotenv) into a frozen Settings object.
"""

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

PROJECT_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_FIXTURE = PROJECT_ROOT / "configs" / "calibration.json"
DEFAULT_SHOTS = 2 ** 15


@dataclass(frozen=True)
class Settings:
    """
    Runtime defaults, overridable per command.

    Attributes:
        shots: Shots per tomography setting
        seed: Base seed for the counter-based streams (None = nondeterministic)
        bootstrap: Bootstrap replicates for sampled error bars
        trajectories: Noisy trajectories per input state
        fixture: Path of the frozen calibration fixture
        log_level: Logging level name for entry points
        bridge_host: Host for the HTTP bridge
        bridge_port: Port for the HTTP bridge
    """

    shots: int = DEFAULT_SHOTS
    seed: Optional[int] = None
    bootstrap: int = 20
    trajectories: int = 256
    fixture: Path = DEFAULT_FIXTURE
    log_level: str = "INFO"
    bridge_host: str = "127.0.0.1"
    bridge_port: int = 8000


def _int_env(name: str, default: Optional[int]) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"Environment variable {name} must be an integer, got {raw!r}")


def get_settings() -> Settings:
    """Build Settings from the environment (values from .env included)."""
    settings = Settings(
        shots=_int_env("BRAIDING_SHOTS", DEFAULT_SHOTS),
        seed=_int_env("BRAIDING_SEED", None),
        bootstrap=_int_env("BRAIDING_BOOTSTRAP", 20),
        trajectories=_int_env("BRAIDING_TRAJECTORIES", 256),
        fixture=Path(os.getenv("BRAIDING_FIXTURE", str(DEFAULT_FIXTURE))),
        log_level=os.getenv("BRAIDING_LOG_LEVEL", "INFO").upper(),
        bridge_host=os.getenv("BRIDGE_HOST", "127.0.0.1"),
        bridge_port=_int_env("BRIDGE_PORT", 8000),
    )
    if settings.shots < 1:
        raise ValueError(f"BRAIDING_SHOTS must be >= 1, got {settings.shots}")
    return settings


def configure_logging(level: Optional[str] = None, verbose: bool = False) -> None:
    """Configure root logging for entry points."""
    name = "DEBUG" if verbose else (level or get_settings().log_level)
    logging.basicConfig(level=getattr(logging, name, logging.INFO))
