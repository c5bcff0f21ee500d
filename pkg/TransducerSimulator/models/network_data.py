"""
Data models for the linearized transducer network.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .optics_data import MeanFields
from .piezo_data import EffectiveMechanics
from .transducer_config import TransducerConfig

CONJUGATE_MARK = "†"

RWA_STATES = ("a1", "a2", "b")
INPUT_PORTS = ("a_in", "c_in", "f_o1", "f_o2", "f_m")
OUTPUT_PORTS = ("a_out", "c_out")
LOSS_OUTPUTS = ("f_o1_out", "f_o2_out", "f_m_out")


def conjugate_labels(labels: Tuple[str, ...]) -> Tuple[str, ...]:
    return tuple(f"{label}{CONJUGATE_MARK}" for label in labels)


@dataclass(frozen=True)
class OperatingPoint:
    """Resolved pump and microwave quantities the linear network is built from."""
    config: TransducerConfig
    mean_fields: MeanFields
    mechanics: EffectiveMechanics
    g_em: float

    @property
    def g_om(self) -> complex:
        return self.mean_fields.g_om

    @property
    def gamma_m(self) -> float:
        return self.mechanics.gamma_m_res

    @property
    def sqrt_gamma_ex(self) -> complex:
        return self.mechanics.sqrt_gamma_ex_res

    @property
    def gamma_ex(self) -> float:
        return self.mechanics.gamma_ex_res

    @property
    def gamma_noise(self) -> float:
        return self.mechanics.gamma_noise


@dataclass(frozen=True)
class StateSpaceModel:
    """
    x' = A x + B u, y = C x + D u with the Laplace convention s = -i*omega.

    The RWA model has the states (a1, a2, b); the full model appends their
    conjugates and doubles the ports the same way.
    """
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    state_labels: Tuple[str, ...]
    input_labels: Tuple[str, ...]
    output_labels: Tuple[str, ...]

    def __post_init__(self):
        n, m, p = len(self.state_labels), len(self.input_labels), len(self.output_labels)
        expected = {"A": (n, n), "B": (n, m), "C": (p, n), "D": (p, m)}
        for name, shape in expected.items():
            matrix = np.asarray(getattr(self, name), dtype=complex)
            if matrix.shape != shape:
                raise ValueError(f"{name} has shape {matrix.shape}, expected {shape}")
            object.__setattr__(self, name, matrix)

    @property
    def n_states(self) -> int:
        return len(self.state_labels)

    @property
    def rwa(self) -> bool:
        return self.n_states == len(RWA_STATES)


@dataclass(frozen=True)
class NetworkFunctions:
    """Cooperativities, extraction efficiencies and intrinsic-port factors on a grid."""
    omega: np.ndarray
    C_OM: np.ndarray
    C_OO: np.ndarray
    eta_opt: np.ndarray
    eta_MW: np.ndarray
    theta_o1: np.ndarray
    theta_o2: np.ndarray
    theta_m: np.ndarray

    @property
    def denominator(self) -> np.ndarray:
        return 1.0 + self.C_OM + self.C_OO
