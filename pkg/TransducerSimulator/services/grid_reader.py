"""
Readers for field-grid CSV files, interface samples and material tables.

Grid files may start with '#' comment lines (units, provenance); the first
other line is the column header. Reported line numbers are 1-based lines
of the file as written.
"""
import json
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..models.field_grid import FIELD_COMPONENTS, FieldGrid, Material, MaterialTable, SurfaceSamples
from .mode_overlap import build_amorphous_p

GRID_COLUMNS = ("x", "y", "z", "dV", "material")
SURFACE_COLUMNS = ("nx", "ny", "nz", "dA", "Epar1", "Epar2", "Dperp")
SURFACE_DISPLACEMENT = ("Qx", "Qy", "Qz")


class GridFormatError(Exception):
    """Malformed grid, surface or material file"""

    def __init__(self, message: str, path: str, line: Optional[int] = None):
        location = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{location}: {message}")
        self.path = str(path)
        self.line = line


def _read_table(path) -> Tuple[pd.DataFrame, int]:
    """
    DataFrame of the file body and the 1-based line number of its header.

    The frame is indexed by file line, so blank or comment lines inside the
    body keep the reported line numbers right.
    """
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    header_index = next((i for i, line in enumerate(lines) if line.strip() and not line.lstrip().startswith("#")), None)
    if header_index is None:
        raise GridFormatError("no header line", path, line=max(len(lines), 1))

    try:
        frame = pd.read_csv(path, comment="#", skiprows=header_index, skip_blank_lines=False,
                            skipinitialspace=True, dtype=str)
    except pd.errors.ParserError as e:
        raise GridFormatError(f"unparsable CSV ({e})", path, line=header_index + 1) from e
    frame.columns = [str(column).strip() for column in frame.columns]
    # pandas drops lines that start with the comment character; blank lines stay as empty rows
    body = [number for number, line in enumerate(lines[header_index + 1:], start=header_index + 2)
            if not line.startswith("#")]
    frame.index = pd.Index(body[:len(frame)])
    return frame.dropna(how="all"), header_index + 1


def _line(frame: pd.DataFrame, row: int) -> int:
    return int(frame.index[row])


def _require_columns(frame: pd.DataFrame, columns: Sequence[str], path, header_line: int) -> None:
    missing = [column for column in columns if column not in frame.columns]
    if missing:
        raise GridFormatError(f"missing columns: {', '.join(missing)}", path, line=header_line)


def _numeric(frame: pd.DataFrame, columns: Sequence[str], path) -> np.ndarray:
    """Columns as a float array; the first unparsable cell is reported by file line."""
    values = frame[list(columns)].apply(pd.to_numeric, errors="coerce").to_numpy(dtype=float)
    bad = np.argwhere(~np.isfinite(values))
    if bad.size:
        row, column = bad[0]
        raise GridFormatError(f"non-numeric value in column {columns[column]}", path,
                              line=_line(frame, row))
    return values


def _positive(frame: pd.DataFrame, values: np.ndarray, name: str, path) -> None:
    bad = np.nonzero(values <= 0.0)[0]
    if bad.size:
        raise GridFormatError(f"{name} must be strictly positive", path, line=_line(frame, bad[0]))


def read_field_grid(path, kind: str) -> FieldGrid:
    """
    Read a field grid with header x,y,z,dV,material,<components>.

    Args:
        path: CSV file
        kind: "electric" (Ex,Ey,Ez), "displacement" (Qx,Qy,Qz) or "strain" (S1..S6)

    Raises:
        GridFormatError: missing columns, non-numeric cells, empty body, dV <= 0
    """
    if kind not in FIELD_COMPONENTS:
        raise ValueError(f"unknown field kind {kind!r}")
    frame, header_line = _read_table(path)
    components = FIELD_COMPONENTS[kind]
    _require_columns(frame, GRID_COLUMNS + components, path, header_line)
    if frame.empty:
        raise GridFormatError("grid has no cells", path, line=header_line)

    coordinates = _numeric(frame, ("x", "y", "z"), path)
    volumes = _numeric(frame, ("dV",), path)[:, 0]
    _positive(frame, volumes, "dV", path)
    values = _numeric(frame, components, path)
    materials = frame["material"].fillna("").astype(str).str.strip().to_numpy()
    empty = np.nonzero(materials == "")[0]
    if empty.size:
        raise GridFormatError("missing material id", path, line=_line(frame, empty[0]))

    grid = FieldGrid(kind=kind, positions=coordinates, volumes=volumes, materials=materials, values=values)
    logging.info(f"Read {kind} grid {path}: {grid.n_cells} cells, volume {grid.total_volume:.6e} m^3")
    return grid


def read_surface_samples(path) -> SurfaceSamples:
    """
    Read interface samples with header nx,ny,nz,dA,Epar1,Epar2,Dperp.

    Optional columns Qx,Qy,Qz give the displacement mode at the interface;
    alternatively Qn gives its normal component.
    """
    frame, header_line = _read_table(path)
    _require_columns(frame, SURFACE_COLUMNS, path, header_line)
    if frame.empty:
        raise GridFormatError("surface file has no samples", path, line=header_line)

    normals = _numeric(frame, ("nx", "ny", "nz"), path)
    areas = _numeric(frame, ("dA",), path)[:, 0]
    _positive(frame, areas, "dA", path)
    E_par = _numeric(frame, ("Epar1", "Epar2"), path)
    D_perp = _numeric(frame, ("Dperp",), path)[:, 0]

    displacement = None
    q_n = None
    if all(column in frame.columns for column in SURFACE_DISPLACEMENT):
        displacement = _numeric(frame, SURFACE_DISPLACEMENT, path)
    elif "Qn" in frame.columns:
        q_n = _numeric(frame, ("Qn",), path)[:, 0]

    return SurfaceSamples(normals=normals, areas=areas, E_par=E_par, D_perp=D_perp,
                          displacement=displacement, q_n=q_n)


def _matrix(value, shape: Tuple[int, int], name: str, material_id: str, path) -> np.ndarray:
    matrix = np.asarray(value, dtype=float)
    if matrix.shape != shape:
        raise GridFormatError(f"material {material_id}: {name} must be {shape[0]}x{shape[1]}, got {matrix.shape}", path)
    return matrix


def read_materials(path) -> MaterialTable:
    """
    Read a JSON material table keyed by material id.

    Each entry has density and eps_r, and optionally stiffness (6x6),
    photoelastic (6x6, or {"p11", "p12"} for an amorphous solid) and
    piezo (3x6 stress constants).
    """
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data: Dict = json.load(handle)
        except json.JSONDecodeError as e:
            raise GridFormatError(f"invalid JSON ({e.msg})", path, line=e.lineno) from e
    if not isinstance(data, dict) or not data:
        raise GridFormatError("material table must be a non-empty JSON object", path)

    materials: Dict[str, Material] = {}
    for material_id, entry in data.items():
        if material_id == "comment":
            continue
        if not isinstance(entry, dict):
            raise GridFormatError(f"material {material_id}: entry must be a JSON object", path)
        missing: List[str] = [key for key in ("density", "eps_r") if key not in entry]
        if missing:
            raise GridFormatError(f"material {material_id}: missing {', '.join(missing)}", path)
        photoelastic = entry.get("photoelastic")
        if isinstance(photoelastic, dict):
            absent = [key for key in ("p11", "p12") if key not in photoelastic]
            if absent:
                raise GridFormatError(f"material {material_id}: photoelastic missing {', '.join(absent)}", path)
            photoelastic = build_amorphous_p(float(photoelastic["p11"]), float(photoelastic["p12"]))
        elif photoelastic is not None:
            photoelastic = _matrix(photoelastic, (6, 6), "photoelastic", material_id, path)
        stiffness = entry.get("stiffness")
        piezo = entry.get("piezo")
        materials[material_id] = Material(
            name=material_id,
            density=float(entry["density"]),
            eps_r=float(entry["eps_r"]),
            stiffness=None if stiffness is None else _matrix(stiffness, (6, 6), "stiffness", material_id, path),
            photoelastic=photoelastic,
            piezo=None if piezo is None else _matrix(piezo, (3, 6), "piezo", material_id, path),
        )
    return MaterialTable(materials=materials)
