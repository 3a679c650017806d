import numpy as np
import pytest

from safeadmit import run, scenario_library


@pytest.fixture(scope="session")
def preset_traces():
    """Run all four presets once and share the traces across tests."""
    return {name: run(cfg) for name, cfg in scenario_library().items()}


@pytest.fixture
def rng():
    return np.random.default_rng(42)
