import os
import pathlib

import pytest

SOURCE_DIR = pathlib.Path(os.environ.get("SIAKIT_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))


@pytest.fixture
def data_dir():
    return SOURCE_DIR / "data"


@pytest.fixture
def scenario_dir():
    return SOURCE_DIR / "scenarios"


@pytest.fixture
def cli():
    path = os.environ.get("SIAKIT_CLI")
    if not path:
        pytest.skip("SIAKIT_CLI not set")
    return path
