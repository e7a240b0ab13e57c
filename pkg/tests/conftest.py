import json
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

DATA_DIR = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def demo_path() -> Path:
    return DATA_DIR / "demo.csv"


@pytest.fixture(scope="session")
def demo_expected() -> dict:
    return json.loads((DATA_DIR / "demo_expected.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def demo_dataset(demo_path):
    from portview.runstore import ingest

    return ingest(demo_path)


def frac(text: str) -> Fraction:
    return Fraction(text)
