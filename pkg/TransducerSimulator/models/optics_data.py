"""
Data models for the photonic dimer.
"""
from dataclasses import dataclass

import numpy as np

PUMP_TARGETS = ("symmetric", "asymmetric", "explicit")


@dataclass(frozen=True)
class PumpPlacement:
    """Pump detunings Delta_i = omega_L - omega_c_i [rad/s] for both rings."""
    target: str
    Delta_1: float
    Delta_2: float

    def __post_init__(self):
        if self.target not in PUMP_TARGETS:
            raise ValueError(f"unknown pump target {self.target!r}")


@dataclass(frozen=True)
class Supermodes:
    """Hybridized dimer frequencies and their offsets above the pump [rad/s]."""
    omega_S: float
    omega_A: float
    Delta_S: float
    Delta_A: float

    @property
    def splitting(self) -> float:
        return self.omega_A - self.omega_S


@dataclass(frozen=True)
class MeanFields:
    """Intracavity mean amplitudes [sqrt(photons)] under a monochromatic pump."""
    placement: PumpPlacement
    a_bar_1: complex
    a_bar_2: complex
    g_om: complex

    @property
    def photons_1(self) -> float:
        return abs(self.a_bar_1) ** 2

    @property
    def photons_2(self) -> float:
        return abs(self.a_bar_2) ** 2


@dataclass(frozen=True)
class StaticShift:
    delta_x_norm: float
    detuning_shift: float


@dataclass(frozen=True)
class DimerSpectrum:
    """Per-unit-input intracavity amplitudes and bus transmission on a probe grid."""
    omega: np.ndarray
    a_1: np.ndarray
    a_2: np.ndarray
    t: np.ndarray
