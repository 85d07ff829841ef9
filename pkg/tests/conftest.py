"""
Shared fixtures
"""
import os

import pytest

# single worker keeps sweeps ordered and quick under test
os.environ.setdefault('HYPERLAB_THREADS', '1')

from src.systems.circle import MorseSmaleCircleMap, Orientation  # noqa: E402


@pytest.fixture
def circle_map() -> MorseSmaleCircleMap:
    return MorseSmaleCircleMap(1, 0.1)


@pytest.fixture
def k2_map() -> MorseSmaleCircleMap:
    return MorseSmaleCircleMap(2, 0.05)


@pytest.fixture
def reversing_map() -> MorseSmaleCircleMap:
    return MorseSmaleCircleMap(1, 0.1, Orientation.REVERSING)


@pytest.fixture
def out_dir(tmp_path):
    path = tmp_path / 'reports'
    path.mkdir()
    return path
