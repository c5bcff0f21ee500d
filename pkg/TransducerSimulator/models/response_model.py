"""
Response and run-manifest models for TransducerSimulator.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional
from datetime import datetime


@dataclass
class SimulatorResponse:
    success: bool
    message: str
    timestamp: str = field(default_factory=lambda: datetime.utcnow().isoformat() + "Z")
    operation: Optional[str] = None
    data: Optional[Dict[str, Any]] = None
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


@dataclass
class RunManifest:
    """
    Everything needed to reproduce one artifact.

    artifacts lists {"name", "sha256", "rows"} of the data written;
    created_at is informational only and stays out of the checksum.
    """
    command: str
    config: Dict[str, Any]
    derived: Dict[str, float]
    grid: Dict[str, Any] = field(default_factory=dict)
    artifacts: List[Dict[str, Any]] = field(default_factory=list)
    created_at: str = field(default_factory=lambda: datetime.utcnow().isoformat() + "Z")

    def core(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "derived": self.derived,
            "grid": self.grid,
            "artifacts": self.artifacts,
        }

    def to_dict(self) -> dict:
        return {**self.core(), "created_at": self.created_at}
