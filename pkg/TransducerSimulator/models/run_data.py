"""
Inputs and outputs shared by the command line and the HTTP trigger.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class GridSpec:
    """Linear frequency grid in ordinary units [Hz]."""
    fmin_hz: float
    fmax_hz: float
    points: int

    def __post_init__(self):
        if self.points < 1:
            raise ValueError("points must be at least 1")
        if not (np.isfinite(self.fmin_hz) and np.isfinite(self.fmax_hz)):
            raise ValueError("grid bounds must be finite")
        if self.points > 1 and self.fmax_hz <= self.fmin_hz:
            raise ValueError("fmax must exceed fmin")

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> Optional["GridSpec"]:
        if not data:
            return None
        return cls(fmin_hz=float(data["fmin_hz"]), fmax_hz=float(data["fmax_hz"]), points=int(data["points"]))

    @classmethod
    def around(cls, center: float, half_width: float, points: int, floor: Optional[float] = None) -> "GridSpec":
        """Grid over center +- half_width, both in rad/s, optionally clipped below at floor."""
        lower = center - half_width if floor is None else max(center - half_width, floor)
        return cls(fmin_hz=lower / (2.0 * np.pi), fmax_hz=(center + half_width) / (2.0 * np.pi), points=points)

    def omega(self) -> np.ndarray:
        if self.points == 1:
            return np.array([2.0 * np.pi * self.fmin_hz])
        return 2.0 * np.pi * np.linspace(self.fmin_hz, self.fmax_hz, self.points)

    def to_dict(self) -> Dict[str, Any]:
        return {"fmin_hz": self.fmin_hz, "fmax_hz": self.fmax_hz, "points": self.points}


@dataclass
class RunResult:
    """A table plus the derived quantities and grid that produced it."""
    command: str
    frame: pd.DataFrame
    derived: Dict[str, float] = field(default_factory=dict)
    grid: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "derived": self.derived,
            "grid": self.grid,
            "columns": list(self.frame.columns),
            "rows": self.frame.astype(object).where(self.frame.notna(), None).to_dict(orient="records"),
        }
