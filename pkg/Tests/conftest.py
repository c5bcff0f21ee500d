"""
Shared fixtures. Run from the project root:
    python -m pytest Tests
"""
import copy
import json
import os
import sys

import numpy as np
import pytest

# Make sure the package is importable
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT)

from TransducerSimulator.services.config_loader import parse_config  # noqa: E402

DEVICE_PATH = os.path.join(ROOT, "configs", "reference_device.json")
FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")
TWO_PI = 2.0 * np.pi


@pytest.fixture
def device_data():
    with open(DEVICE_PATH, "r", encoding="utf-8") as handle:
        return copy.deepcopy(json.load(handle))


@pytest.fixture
def device(device_data):
    return parse_config(device_data)


@pytest.fixture
def device_path():
    return DEVICE_PATH


@pytest.fixture
def fixture_path():
    def _path(name: str) -> str:
        return os.path.join(FIXTURES, name)
    return _path


@pytest.fixture
def write_config(tmp_path, device_data):
    """Write the reference device config, with overrides, to a temporary JSON file."""
    def _write(name: str = "config.json", **overrides) -> str:
        data = {**device_data, **overrides}
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture
def write_text(tmp_path):
    def _write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


def random_config_data(rng: np.random.Generator) -> dict:
    """A valid raw configuration with rates drawn around the reference device."""
    omega_m = rng.uniform(1e9, 6e9)
    return {
        "omega_c_1": 193e12,
        "omega_c_2": 193e12 + rng.uniform(-0.5e9, 0.5e9),
        "kappa_ex": rng.uniform(10e6, 400e6),
        "kappa_0_1": rng.uniform(5e6, 100e6),
        "kappa_0_2": rng.uniform(5e6, 100e6),
        "J": omega_m / 2.0 * rng.uniform(0.8, 1.2),
        "g0": rng.uniform(100.0, 2000.0),
        "omega_m": omega_m,
        "gamma_0": rng.uniform(1e6, 20e6),
        "k_eff2": rng.uniform(1e-4, 2e-2),
        "C0": rng.uniform(50e-15, 500e-15),
        "R0": rng.uniform(1e3, 1e6),
        "P_in": rng.uniform(1e-4, 0.3),
    }
