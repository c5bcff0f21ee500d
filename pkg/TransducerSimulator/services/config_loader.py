"""
Configuration loading and validation for transducer runs
"""
import json
import logging
import math
from dataclasses import dataclass, fields
from typing import Dict, List, Optional

import numpy as np
from scipy import constants

from ..models.transducer_config import TransducerConfig


class ConfigError(Exception):
    """Configuration rejected by the schema"""

    def __init__(self, message: str, key: Optional[str] = None, errors: Optional[List[str]] = None):
        super().__init__(message)
        self.key = key
        self.errors = errors or [message]


@dataclass
class ValidationResult:
    """Result of validation operation"""
    valid: bool
    errors: List[str]
    keys: List[str]


HBAR = constants.hbar

# File keys holding ordinary frequencies; multiplied by 2*pi on load.
FREQUENCY_KEYS = (
    "omega_c_1", "omega_c_2", "kappa_0_1", "kappa_0_2", "kappa_ex", "J", "g0",
    "omega_m", "gamma_0", "omega_L", "kappa_L", "omega_mw",
)
POSITIVE_KEYS = ("C0", "R0", "Z0", "hbar")
REQUIRED_KEYS = (
    "omega_c_1", "kappa_0_1", "kappa_ex", "g0", "omega_m", "gamma_0",
    "k_eff2", "C0", "R0", "P_in",
)
UNIT_FLAGS = ("hz", "rad/s")
META_KEYS = ("units", "comment")

DEFAULT_Z0 = 50.0
DEFAULT_KAPPA_L_HZ = 10e3


class ConfigValidator:
    """
    Validates raw configuration dictionaries against the documented schema
    """

    KNOWN_KEYS = frozenset(f.name for f in fields(TransducerConfig)) | frozenset(META_KEYS)

    def validate(self, data: Dict) -> ValidationResult:
        """
        Validate every key of a raw configuration

        Args:
            data: Parsed JSON object

        Returns:
            ValidationResult listing every problem and the offending keys
        """
        errors: List[str] = []
        keys: List[str] = []

        if not isinstance(data, dict):
            return ValidationResult(valid=False, errors=["configuration must be a JSON object"], keys=[None])

        for key in data:
            if key not in self.KNOWN_KEYS:
                errors.append(f"unknown key: {key}")
                keys.append(key)

        units = data.get("units", "hz")
        if units not in UNIT_FLAGS:
            errors.append(f"unknown units flag: {units!r} (expected one of {', '.join(UNIT_FLAGS)})")
            keys.append("units")

        for key in REQUIRED_KEYS:
            if key not in data:
                errors.append(f"missing key: {key}")
                keys.append(key)

        for key, value in data.items():
            if key in META_KEYS or key not in self.KNOWN_KEYS:
                continue
            error = self._validate_value(key, value)
            if error:
                errors.append(error)
                keys.append(key)

        return ValidationResult(valid=len(errors) == 0, errors=errors, keys=keys)

    def _validate_value(self, key: str, value) -> Optional[str]:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return f"not a number: {key}"
        if key == "R0" and value == math.inf:
            return None
        if not math.isfinite(value):
            return f"not finite: {key}"
        if key == "k_eff2":
            if not 0.0 < value < 1.0:
                return f"k_eff2 outside (0, 1): {value}"
            return None
        if key == "P_in":
            if value < 0.0:
                return f"negative power: {key}"
            return None
        if key in FREQUENCY_KEYS:
            if value <= 0.0:
                return f"non-positive rate: {key}"
            return None
        if key in POSITIVE_KEYS and value <= 0.0:
            return f"non-positive value: {key}"
        return None


def photon_flux(P_in: float, omega_L: float, hbar: float = HBAR) -> float:
    """
    Photon flux carried by a monochromatic pump.

    Args:
        P_in: Pump power [W], non-negative
        omega_L: Pump angular frequency [rad/s]
        hbar: Reduced Planck constant [J s]

    Returns:
        P_in / (hbar * omega_L) [photons/s]
    """
    if P_in < 0.0:
        raise ValueError("P_in must be non-negative")
    if omega_L <= 0.0:
        raise ValueError("omega_L must be positive")
    return P_in / (hbar * omega_L)


def parse_config(data: Dict) -> TransducerConfig:
    """
    Build a TransducerConfig from a raw schema dictionary.

    Raises:
        ConfigError: naming the first offending key
    """
    result = ConfigValidator().validate(data)
    if not result.valid:
        logging.error(f"Configuration rejected: {'; '.join(result.errors)}")
        raise ConfigError(result.errors[0], key=result.keys[0], errors=result.errors)

    scale = 2.0 * np.pi if data.get("units", "hz") == "hz" else 1.0
    values = {}
    for key, value in data.items():
        if key in META_KEYS:
            continue
        values[key] = float(value) * scale if key in FREQUENCY_KEYS else float(value)

    values.setdefault("omega_c_2", values["omega_c_1"])
    values.setdefault("kappa_0_2", values["kappa_0_1"])
    values.setdefault("J", values["omega_m"] / 2.0)
    values.setdefault("omega_L", values["omega_c_1"])
    values.setdefault("kappa_L", DEFAULT_KAPPA_L_HZ * 2.0 * np.pi)
    values.setdefault("omega_mw", values["omega_m"])
    values.setdefault("Z0", DEFAULT_Z0)
    values.setdefault("hbar", HBAR)

    config = TransducerConfig(**values)
    logging.info(
        f"Loaded config: omega_m/2pi={config.omega_m / (2 * np.pi):.6e} Hz, "
        f"kappa_ex/2pi={config.kappa_ex / (2 * np.pi):.6e} Hz, P_in={config.P_in} W"
    )
    return config


def load_config(path) -> TransducerConfig:
    """
    Read and validate a JSON configuration file.

    Args:
        path: File path

    Returns:
        Fully populated config in angular units

    Raises:
        ConfigError: invalid JSON or schema violation
        OSError: unreadable file
    """
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as e:
            raise ConfigError(f"invalid JSON in {path}: {e}") from e
    return parse_config(data)


def serialize_config(config: TransducerConfig) -> Dict:
    """Inverse of parse_config: ordinary frequencies, every field explicit."""
    data: Dict = {"units": "hz"}
    for f in fields(TransducerConfig):
        value = getattr(config, f.name)
        data[f.name] = value / (2.0 * np.pi) if f.name in FREQUENCY_KEYS else value
    return data
