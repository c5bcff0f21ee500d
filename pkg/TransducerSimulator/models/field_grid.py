"""
Sampled mode fields and material data for overlap quadrature.
"""
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

FIELD_COMPONENTS: Dict[str, Tuple[str, ...]] = {
    "electric": ("Ex", "Ey", "Ez"),
    "displacement": ("Qx", "Qy", "Qz"),
    "strain": ("S1", "S2", "S3", "S4", "S5", "S6"),
}


@dataclass(frozen=True)
class FieldGrid:
    """
    Cell-centred samples of one field.

    positions (N, 3) [m], volumes (N,) [m^3], materials (N,) material ids,
    values (N, k) with k = 3 for vectors and 6 Voigt entries for strain.
    """
    kind: str
    positions: np.ndarray
    volumes: np.ndarray
    materials: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.kind not in FIELD_COMPONENTS:
            raise ValueError(f"unknown field kind {self.kind!r}")
        positions = np.asarray(self.positions, dtype=float).reshape(-1, 3)
        volumes = np.asarray(self.volumes, dtype=float).reshape(-1)
        materials = np.asarray(self.materials, dtype=str).reshape(-1)
        values = np.asarray(self.values)
        width = len(FIELD_COMPONENTS[self.kind])
        values = values.reshape(-1, width)
        if not (len(positions) == len(volumes) == len(materials) == len(values)):
            raise ValueError(f"{self.kind} grid: per-cell arrays differ in length")
        if np.any(volumes <= 0.0):
            raise ValueError(f"{self.kind} grid: cell volumes must be strictly positive")
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "volumes", volumes)
        object.__setattr__(self, "materials", materials)
        object.__setattr__(self, "values", values)

    @property
    def n_cells(self) -> int:
        return len(self.volumes)

    @property
    def total_volume(self) -> float:
        return float(np.sum(self.volumes))

    def same_cells(self, other: "FieldGrid") -> bool:
        return (
            self.n_cells == other.n_cells
            and np.allclose(self.positions, other.positions, rtol=1e-12, atol=0.0)
            and np.allclose(self.volumes, other.volumes, rtol=1e-12, atol=0.0)
            and np.array_equal(self.materials, other.materials)
        )

    def scaled(self, factor: complex) -> "FieldGrid":
        return FieldGrid(self.kind, self.positions, self.volumes, self.materials, self.values * factor)


@dataclass(frozen=True)
class SurfaceSamples:
    """
    Interface samples for the moving-boundary integral.

    normals (N, 3), areas (N,) [m^2], E_par (N, 2) tangential electric field,
    D_perp (N,) normal displacement field. The boundary motion is either a
    displacement mode vector (N, 3) projected on the normal, or its normal
    component q_n directly; without either it is 1.
    """
    normals: np.ndarray
    areas: np.ndarray
    E_par: np.ndarray
    D_perp: np.ndarray
    displacement: Optional[np.ndarray] = None
    q_n: Optional[np.ndarray] = None

    def __post_init__(self):
        normals = np.asarray(self.normals, dtype=float).reshape(-1, 3)
        areas = np.asarray(self.areas, dtype=float).reshape(-1)
        E_par = np.asarray(self.E_par).reshape(-1, 2)
        D_perp = np.asarray(self.D_perp).reshape(-1)
        if not (len(normals) == len(areas) == len(E_par) == len(D_perp)):
            raise ValueError("surface samples: per-sample arrays differ in length")
        if np.any(areas <= 0.0):
            raise ValueError("surface samples: areas must be strictly positive")
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "areas", areas)
        object.__setattr__(self, "E_par", E_par)
        object.__setattr__(self, "D_perp", D_perp)
        if self.displacement is not None:
            object.__setattr__(self, "displacement", np.asarray(self.displacement, dtype=float).reshape(-1, 3))
        if self.q_n is not None:
            object.__setattr__(self, "q_n", np.asarray(self.q_n, dtype=float).reshape(-1))

    @property
    def n_samples(self) -> int:
        return len(self.areas)


@dataclass(frozen=True)
class Material:
    """Density [kg/m^3], relative permittivity, and optional Voigt tensors."""
    name: str
    density: float
    eps_r: float
    stiffness: Optional[np.ndarray] = None
    photoelastic: Optional[np.ndarray] = None
    piezo: Optional[np.ndarray] = None

    @property
    def is_piezoelectric(self) -> bool:
        return self.piezo is not None


@dataclass(frozen=True)
class MaterialTable:
    materials: Dict[str, Material] = field(default_factory=dict)

    def __getitem__(self, material_id: str) -> Material:
        return self.materials[material_id]

    def __contains__(self, material_id: str) -> bool:
        return material_id in self.materials

    def column(self, ids: np.ndarray, attribute: str) -> np.ndarray:
        """Per-cell scalar material property."""
        return np.array([getattr(self.materials[i], attribute) for i in ids], dtype=float)


@dataclass(frozen=True)
class ModeNormalization:
    m_eff: float
    u_zpf: float
    eps_r_eff: Optional[float] = None
