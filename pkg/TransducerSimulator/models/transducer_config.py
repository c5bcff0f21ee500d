"""
Physical parameter set of a transducer run.

All frequencies and rates are angular [rad/s]. Files carry ordinary
frequencies [Hz]; conversion happens in services.config_loader.
"""
import dataclasses
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ComplexFrequency:
    """Laplace variable. Physical axis is s = -i*omega."""
    s: complex

    @classmethod
    def from_omega(cls, omega: float) -> "ComplexFrequency":
        return cls(s=complex(0.0, -omega))

    @property
    def omega(self) -> float:
        return -self.s.imag


def laplace_axis(omega_grid) -> np.ndarray:
    """Map an angular-frequency grid onto s = -i*omega."""
    return -1j * np.asarray(omega_grid, dtype=float)


@dataclass(frozen=True)
class TransducerConfig:
    omega_c_1: float
    omega_c_2: float
    kappa_0_1: float
    kappa_0_2: float
    kappa_ex: float
    J: float
    g0: float
    omega_m: float
    gamma_0: float
    k_eff2: float
    C0: float
    R0: float
    Z0: float
    P_in: float
    omega_L: float
    kappa_L: float
    omega_mw: float
    hbar: float

    @property
    def kappa_1(self) -> float:
        """Total linewidth of the bus-coupled ring."""
        return self.kappa_0_1 + self.kappa_ex

    @property
    def kappa_2(self) -> float:
        return self.kappa_0_2

    @property
    def photon_flux(self) -> float:
        """Pump photon flux P_in/(hbar omega_L) [photons/s]."""
        return self.P_in / (self.hbar * self.omega_L)

    def replace(self, **changes) -> "TransducerConfig":
        return dataclasses.replace(self, **changes)
