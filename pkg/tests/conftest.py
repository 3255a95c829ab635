from pathlib import Path

import pytest

from qscaled import PrecisionContext

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"


@pytest.fixture
def ctx():
    return PrecisionContext(bits=256, rel_tol=1e-50)


@pytest.fixture
def configs():
    return CONFIGS
