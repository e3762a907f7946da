import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tricontract.fixtures import load_example  # noqa: E402


@pytest.fixture
def ex21():
    return load_example("2.1")


@pytest.fixture
def ex22():
    return load_example("2.2")
