"""
Test configuration and fixtures
"""

import pytest
import tempfile
import shutil
from pathlib import Path
import sys

import numpy as np

# Add the parent directory to Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

from core.dynamics import PhaseState, resonant_params
from core.poincare import SectionConfig
from utils.file_ops import FileOperations
from utils.seeds import derive_seed


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests"""
    test_dir = Path(tempfile.mkdtemp())
    yield test_dir
    # Cleanup
    if test_dir.exists():
        shutil.rmtree(test_dir)


@pytest.fixture
def file_ops():
    return FileOperations()


@pytest.fixture
def resonant():
    """Uncoupled 1:2 preset"""
    return resonant_params(0.0)


@pytest.fixture
def coupled():
    """Resonant preset at eps = 0.5"""
    return resonant_params(0.5)


@pytest.fixture
def unit_state():
    """Default trajectory start (1, 1, 1, 1)"""
    return PhaseState(1.0, 1.0, 1.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(derive_seed(42, "tests"))


@pytest.fixture
def small_section():
    """Section run small enough for unit tests"""
    return SectionConfig(h=3.0, epsilon=0.0, max_crossings=20, count=3, seed=42)
