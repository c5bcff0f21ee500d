"""
Frequency-grid containers shared by every service.
"""
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class ComplexSpectrum:
    """Values sampled on an angular-frequency grid [rad/s]."""
    omega: np.ndarray
    values: np.ndarray
    quantity: str = "value"

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        values = np.asarray(self.values)
        if omega.ndim != 1 or values.shape[:1] != omega.shape:
            raise ValueError(f"{self.quantity}: values must follow the grid (got {values.shape} vs {omega.shape})")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "values", values)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    @property
    def abs2(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def to_frame(self) -> pd.DataFrame:
        """Tabular form with ordinary frequency in the first column."""
        frame = pd.DataFrame({"omega_hz": self.omega / (2.0 * np.pi)})
        if self.is_real:
            frame[self.quantity] = self.values
        else:
            frame["re"] = self.values.real
            frame["im"] = self.values.imag
            frame["abs2"] = self.abs2
        return frame


@dataclass(frozen=True)
class TransferSpectrum:
    """Matrix-valued spectrum G[omega] with shape (points, outputs, inputs)."""
    omega: np.ndarray
    values: np.ndarray
    output_labels: Tuple[str, ...] = field(default_factory=tuple)
    input_labels: Tuple[str, ...] = field(default_factory=tuple)

    def entry(self, output: str, input: str) -> ComplexSpectrum:
        i = self.output_labels.index(output)
        j = self.input_labels.index(input)
        return ComplexSpectrum(self.omega, self.values[:, i, j], quantity=f"G[{output},{input}]")

    def row_power(self) -> np.ndarray:
        """Sum over inputs of |G_ij|^2, shape (points, outputs)."""
        return np.sum(np.abs(self.values) ** 2, axis=2)


def validate_omega_grid(omega_grid, non_negative: bool = False) -> np.ndarray:
    """Coerce a grid to float and check it is 1-D, finite and strictly increasing."""
    omega = np.asarray(omega_grid, dtype=float)
    if omega.ndim != 1 or omega.size == 0:
        raise ValueError("omega grid must be a non-empty 1-D array")
    if not np.all(np.isfinite(omega)):
        raise ValueError("omega grid must be finite")
    if non_negative and np.any(omega < 0.0):
        raise ValueError("omega grid must be non-negative")
    if np.any(np.diff(omega) <= 0.0):
        raise ValueError("omega grid must be strictly increasing")
    return omega
