import sys
from pathlib import Path

import pytest

# Add repo root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.enumeration.scalar import SeedPair  # noqa: E402


@pytest.fixture
def unit_seed():
    return SeedPair(1, 1)
