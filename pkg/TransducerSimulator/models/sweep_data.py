"""
Result of a pump-power by bus-coupling efficiency sweep.
"""
from dataclasses import dataclass

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class SweepSurface:
    """
    Peak-over-omega efficiency per cell.

    eta_peak and omega_peak have shape (len(kappa_ex), len(powers)).
    """
    powers: np.ndarray
    kappa_ex: np.ndarray
    eta_peak: np.ndarray
    omega_peak: np.ndarray
    mode: str = "rwa"

    def optimal_power_index(self) -> np.ndarray:
        """Index of the best pump power for every kappa_ex row."""
        return np.argmax(self.eta_peak, axis=1)

    def to_frame(self) -> pd.DataFrame:
        """Long format, rows ordered by kappa_ex then power."""
        kappa, power = np.meshgrid(self.kappa_ex, self.powers, indexing="ij")
        return pd.DataFrame({
            "p_in_w": power.ravel(),
            "kappa_ex_hz": kappa.ravel() / (2.0 * np.pi),
            "eta_peak": self.eta_peak.ravel(),
            "omega_peak_hz": self.omega_peak.ravel() / (2.0 * np.pi),
        })
