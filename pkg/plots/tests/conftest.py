import pathlib

import pytest

SAMPLES = pathlib.Path(__file__).resolve().parents[2] / "sample_outputs"


@pytest.fixture(scope="session")
def samples():
    if not SAMPLES.is_dir():
        pytest.fail(f"shipped sample outputs not found at {SAMPLES}")
    return SAMPLES
