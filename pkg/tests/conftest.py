"""Shared fixtures for the braiding test suite."""

import numpy as np
import pytest

from braiding.encoding import get_encoding
from braiding.config import DEFAULT_FIXTURE
from simulator import stream_rng


@pytest.fixture
def y1():
    return get_encoding("Y1")


@pytest.fixture
def y2():
    return get_encoding("Y2")


@pytest.fixture
def rng() -> np.random.Generator:
    return stream_rng(1234)


@pytest.fixture
def fixture_path():
    return DEFAULT_FIXTURE


@pytest.fixture(autouse=True)
def _isolated_environment(monkeypatch):
    """Keep a developer's .env from changing defaults under test."""
    for key in ("BRAIDING_SHOTS", "BRAIDING_SEED", "BRAIDING_BOOTSTRAP", "BRAIDING_TRAJECTORIES",
                "BRAIDING_FIXTURE", "BRAIDING_LOG_LEVEL", "BRIDGE_HOST", "BRIDGE_PORT"):
        monkeypatch.delenv(key, raising=False)
