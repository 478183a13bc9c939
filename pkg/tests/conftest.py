import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from quatbend.pipeline import DATA_DIR  # noqa: E402
from quatbend.symplectic.model import load_model  # noqa: E402


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR


@pytest.fixture(scope="session")
def model31():
    return load_model(DATA_DIR / "model_3_-1.ini")
