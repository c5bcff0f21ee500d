"""
Cell-sum quadratures over sampled mode fields.

Voigt convention: index pairs (11, 22, 33, 23, 13, 12) map to 1..6.
Strain columns carry engineering shear (S4 = 2 S_23 and so on), so
stress-like contractions c @ S and p @ S need no extra factors.
"""
import logging
import math

import numpy as np
from scipy import constants

from ..models.field_grid import FieldGrid, MaterialTable, ModeNormalization, SurfaceSamples
from .config_loader import HBAR

VOIGT_PAIRS = ((0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1))
NORMAL_TOLERANCE = 1e-9


class ModeOverlapError(Exception):
    """Quadrature inputs are empty, degenerate or inconsistent"""
    pass


def voigt_index(i: int, j: int) -> int:
    return VOIGT_PAIRS.index((min(i, j), max(i, j)))


def voigt_to_tensor(matrix: np.ndarray) -> np.ndarray:
    """6x6 Voigt matrix to the full rank-4 tensor with minor and major symmetry."""
    matrix = np.asarray(matrix)
    tensor = np.zeros((3, 3, 3, 3), dtype=matrix.dtype)
    for i, j, k, l in np.ndindex(3, 3, 3, 3):
        tensor[i, j, k, l] = matrix[voigt_index(i, j), voigt_index(k, l)]
    return tensor


def tensor_to_voigt(tensor: np.ndarray) -> np.ndarray:
    tensor = np.asarray(tensor)
    matrix = np.zeros((6, 6), dtype=tensor.dtype)
    for a, (i, j) in enumerate(VOIGT_PAIRS):
        for b, (k, l) in enumerate(VOIGT_PAIRS):
            matrix[a, b] = tensor[i, j, k, l]
    return matrix


def strain_from_gradient(gradient: np.ndarray) -> np.ndarray:
    """
    Voigt strain (N, 6) from displacement gradients du_i/dx_j (N, 3, 3).

    Symmetric by construction: S_ij = (u_i,j + u_j,i)/2, shear columns doubled.
    """
    gradient = np.asarray(gradient)
    sym = 0.5 * (gradient + np.swapaxes(gradient, -1, -2))
    scale = np.array([1.0, 1.0, 1.0, 2.0, 2.0, 2.0])
    return np.stack([sym[..., i, j] for i, j in VOIGT_PAIRS], axis=-1) * scale


def voigt_to_symmetric(vector: np.ndarray) -> np.ndarray:
    """Stress-like Voigt vectors (N, 6) to symmetric 3x3 tensors (N, 3, 3)."""
    vector = np.asarray(vector)
    tensor = np.zeros(vector.shape[:-1] + (3, 3), dtype=vector.dtype)
    for a, (i, j) in enumerate(VOIGT_PAIRS):
        tensor[..., i, j] = vector[..., a]
        tensor[..., j, i] = vector[..., a]
    return tensor


def build_amorphous_p(p11: float, p12: float) -> np.ndarray:
    """Photoelastic matrix of an isotropic solid, p44 = (p11 - p12)/2."""
    p44 = 0.5 * (p11 - p12)
    matrix = np.full((3, 3), p12, dtype=float)
    np.fill_diagonal(matrix, p11)
    return np.block([
        [matrix, np.zeros((3, 3))],
        [np.zeros((3, 3)), p44 * np.eye(3)],
    ])


def _ensure_cells(grid: FieldGrid) -> None:
    if grid.n_cells == 0:
        raise ModeOverlapError(f"{grid.kind} grid is empty")


def _ensure_same_cells(first: FieldGrid, second: FieldGrid) -> None:
    if not first.same_cells(second):
        raise ModeOverlapError(f"{first.kind} and {second.kind} grids are not sampled on the same cells")


def _check_materials(materials: MaterialTable, grid: FieldGrid) -> None:
    unknown = sorted(set(grid.materials) - set(materials.materials))
    if unknown:
        raise ModeOverlapError(f"unknown material ids in {grid.kind} grid: {', '.join(unknown)}")


def _material_column(materials: MaterialTable, grid: FieldGrid, attribute: str) -> np.ndarray:
    _check_materials(materials, grid)
    return materials.column(grid.materials, attribute)


def normalize_mechanical(
    grid: FieldGrid,
    materials: MaterialTable,
    omega_m: float,
    hbar: float = HBAR,
) -> ModeNormalization:
    """
    Effective mass m_eff = sum rho |Q|^2 dV and u_zpf = sqrt(hbar / (2 m_eff omega_m)).

    Raises:
        ModeOverlapError: empty grid or zero-norm mode
    """
    _ensure_cells(grid)
    if omega_m <= 0.0:
        raise ValueError("omega_m must be positive")
    density = _material_column(materials, grid, "density")
    m_eff = float(np.sum(density * np.sum(np.abs(grid.values) ** 2, axis=1) * grid.volumes))
    if m_eff <= 0.0:
        raise ModeOverlapError("displacement mode has zero norm")
    return ModeNormalization(m_eff=m_eff, u_zpf=math.sqrt(hbar / (2.0 * m_eff * omega_m)))


def normalize_electric(grid: FieldGrid, materials: MaterialTable) -> float:
    """eps_r_eff = sum eps_r |F|^2 dV."""
    _ensure_cells(grid)
    eps_r = _material_column(materials, grid, "eps_r")
    eps_r_eff = float(np.sum(eps_r * np.sum(np.abs(grid.values) ** 2, axis=1) * grid.volumes))
    if eps_r_eff <= 0.0:
        raise ModeOverlapError("electric mode has zero norm")
    return eps_r_eff


def k_eff2_overlap(
    e_grid: FieldGrid,
    s_grid: FieldGrid,
    materials: MaterialTable,
    c_eff: float,
    eps_eff: float,
) -> float:
    """
    Square of sum F_i e_iJ S_J dV / sqrt(c_eff eps_eff) over piezoelectric cells.

    A cell counts as piezoelectric when its material carries a piezo tensor,
    including an all-zero one.

    Raises:
        ModeOverlapError: mismatched grids or no piezoelectric cells
    """
    _ensure_cells(e_grid)
    _ensure_same_cells(e_grid, s_grid)
    if c_eff <= 0.0 or eps_eff <= 0.0:
        raise ValueError("c_eff and eps_eff must be positive")
    _check_materials(materials, e_grid)

    piezo_cells = np.array([materials[m].is_piezoelectric for m in e_grid.materials])
    if not piezo_cells.any():
        raise ModeOverlapError("no piezoelectric cells in the grid")

    integral = 0.0
    for index in np.nonzero(piezo_cells)[0]:
        e = materials[e_grid.materials[index]].piezo
        integral += e_grid.values[index] @ e @ s_grid.values[index] * e_grid.volumes[index]
    return float(abs(integral) ** 2 / (c_eff * eps_eff))


def electric_energy_norm(e_grid: FieldGrid, materials: MaterialTable) -> float:
    """sum eps0 eps_r |E|^2 dV, the E.D normalization of the optical mode."""
    return constants.epsilon_0 * normalize_electric(e_grid, materials)


def g0_photoelastic(
    e_grid: FieldGrid,
    s_grid: FieldGrid,
    materials: MaterialTable,
    omega_0: float,
    u_zpf: float,
) -> float:
    """
    Photoelastic single-photon coupling.

    g0 = -(omega_0/2) (sum E* . d_eps . E dV / sum E . D dV) u_zpf with
    d_eta = p S and d_eps = -eps0 eps_r^2 d_eta. Cells without a photoelastic
    tensor do not contribute to the numerator.
    """
    _ensure_cells(e_grid)
    _ensure_same_cells(e_grid, s_grid)
    denominator = electric_energy_norm(e_grid, materials)
    eps_r = materials.column(e_grid.materials, "eps_r")

    numerator = 0.0 + 0j
    for index, material_id in enumerate(e_grid.materials):
        p = materials[material_id].photoelastic
        if p is None:
            continue
        d_eta = voigt_to_symmetric(p @ s_grid.values[index])
        d_eps = -constants.epsilon_0 * eps_r[index] ** 2 * d_eta
        e_vec = e_grid.values[index]
        numerator += np.conj(e_vec) @ d_eps @ e_vec * e_grid.volumes[index]

    return float(np.real(-0.5 * omega_0 * numerator / denominator * u_zpf))


def g0_moving_boundary(
    surface: SurfaceSamples,
    delta_eps: float,
    delta_eps_inv: float,
    omega_0: float,
    displacement_zpf: float,
    energy_norm: float,
) -> float:
    """
    Moving-boundary single-photon coupling.

    g0 = -(omega_0/2) sum u_zpf q_n (d_eps |E_par|^2 - d_eps_inv |D_perp|^2) dA / energy_norm,
    where d_eps = eps_1 - eps_2 and d_eps_inv = 1/eps_1 - 1/eps_2 across the
    interface and q_n is the normal boundary displacement of the mode.
    Non-unit normals are rescaled with a warning.
    """
    if surface.n_samples == 0:
        raise ModeOverlapError("surface has no samples")
    if energy_norm <= 0.0:
        raise ModeOverlapError("energy normalization must be positive")

    lengths = np.linalg.norm(surface.normals, axis=1)
    if np.any(lengths == 0.0):
        raise ModeOverlapError("zero-length surface normal")
    off_unit = np.abs(lengths - 1.0) > NORMAL_TOLERANCE
    if off_unit.any():
        logging.warning(f"{int(off_unit.sum())} surface normals are not unit length; normalizing")
    normals = surface.normals / lengths[:, None]

    if surface.displacement is not None:
        q_n = np.sum(surface.displacement * normals, axis=1)
    elif surface.q_n is not None:
        q_n = surface.q_n
    else:
        q_n = np.ones(surface.n_samples)

    e_par2 = np.sum(np.abs(surface.E_par) ** 2, axis=1)
    d_perp2 = np.abs(surface.D_perp) ** 2
    integrand = displacement_zpf * q_n * (delta_eps * e_par2 - delta_eps_inv * d_perp2)
    return float(-0.5 * omega_0 * np.sum(integrand * surface.areas) / energy_norm)


def g0_total(g0_pe: float, g0_mb: float) -> float:
    return g0_pe + g0_mb
