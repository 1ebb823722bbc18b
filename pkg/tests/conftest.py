import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mjspec.core import JunctionGeometry, MaterialParams  # noqa: E402


@pytest.fixture
def params():
    return MaterialParams()


@pytest.fixture
def short_geom():
    # 41 sites: fast enough for property checks, long enough for a junction
    return JunctionGeometry(length_sc=200.0, length_normal=10.0, lattice_spacing=10.0, eta=0.8)
