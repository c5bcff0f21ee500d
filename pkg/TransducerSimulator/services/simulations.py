"""
One function per experiment, shared by the command line and the HTTP trigger.

Each returns a RunResult: the table to store plus every derived quantity
the table depends on, in ordinary units.
"""
import logging
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import signal

from ..models.field_grid import FieldGrid, MaterialTable, SurfaceSamples
from ..models.network_data import OperatingPoint
from ..models.run_data import GridSpec, RunResult
from ..models.transducer_config import TransducerConfig
from .derive_report import derive, g0_report
from .network_service import conversion_efficiency, operating_point
from .optics_service import hybridization, resolve_placement, supermodes, transmission_spectrum
from .piezo_service import (admittance, bvd_from_config, config_g_em, config_port_rates, effective_mechanics,
                            extract_bvd, s11)
from .sweep_runner import DEFAULT_POINTS, conversion_window, sweep

TWO_PI = 2.0 * np.pi


def network_summary(op: OperatingPoint) -> Dict[str, float]:
    """Derived rates an efficiency run depends on [Hz]."""
    config = op.config
    rates = config_port_rates(config)
    placement = op.mean_fields.placement
    modes = supermodes(config, placement)
    return {
        "g_em_hz": op.g_em / TWO_PI,
        "Gamma_ex_hz": rates.Gamma_ex / TWO_PI,
        "Gamma_0_hz": rates.Gamma_0 / TWO_PI,
        "gamma_ex_hz": op.gamma_ex / TWO_PI,
        "gamma_total_hz": op.gamma_m / TWO_PI,
        "gamma_noise_hz": op.gamma_noise / TWO_PI,
        "g_om_hz": abs(op.g_om) / TWO_PI,
        "photons_2": op.mean_fields.photons_2,
        "J_hz": config.J / TWO_PI,
        "Delta_1_hz": placement.Delta_1 / TWO_PI,
        "Delta_2_hz": placement.Delta_2 / TWO_PI,
        "Delta_S_hz": modes.Delta_S / TWO_PI,
        "Delta_A_hz": modes.Delta_A / TWO_PI,
    }


def _grid_or_default(grid: Optional[GridSpec], default: GridSpec) -> Tuple[GridSpec, np.ndarray]:
    spec = grid or default
    return spec, spec.omega()


def run_derive(config: TransducerConfig) -> RunResult:
    report = derive(config)
    return RunResult(command="derive", frame=report.to_frame(), derived=report.values())


def run_efficiency(
    config: TransducerConfig,
    grid: Optional[GridSpec] = None,
    mode: str = "rwa",
    terms: str = "exact",
    target: str = "symmetric",
) -> RunResult:
    """Conversion efficiency spectrum; the default grid spans the conversion window."""
    op = operating_point(config, resolve_placement(config, target))
    window = conversion_window(op, DEFAULT_POINTS)
    spec, omega = _grid_or_default(grid, GridSpec(window[0] / TWO_PI, window[-1] / TWO_PI, DEFAULT_POINTS))
    spectrum = conversion_efficiency(op, omega, mode=mode, terms=terms)

    k = int(np.argmax(spectrum.values))
    derived = network_summary(op)
    derived["eta_peak"] = float(spectrum.values[k])
    derived["omega_peak_hz"] = float(spectrum.omega[k] / TWO_PI)
    logging.info(f"Efficiency ({mode}): peak {derived['eta_peak']:.6f} at {derived['omega_peak_hz']:.9e} Hz")

    grid_info = {**spec.to_dict(), "mode": mode, "target": target}
    if mode == "full":
        grid_info["terms"] = terms
    return RunResult(command="efficiency", frame=spectrum.to_frame(), derived=derived, grid=grid_info)


def run_admittance(config: TransducerConfig, grid: Optional[GridSpec] = None, extract: bool = False) -> RunResult:
    """
    BVD admittance synthesized from the configuration, optionally read back.

    Raises:
        ExtractionError: extract=True and the grid misses the resonance pair
    """
    bvd = bvd_from_config(config)
    half_width = 10.0 * config.gamma_0 + config.k_eff2 * config.omega_m
    spec, omega = _grid_or_default(grid, GridSpec.around(config.omega_m, half_width, DEFAULT_POINTS, floor=0.0))
    spectrum = admittance(bvd, config.omega_m, config.gamma_0, omega)

    derived = {"C0": bvd.C0, "Cm": bvd.Cm, "Lm": bvd.Lm, "Rm": bvd.Rm, "k_eff2": bvd.k_eff2}
    if extract:
        result = extract_bvd(spectrum, C0_hint=config.C0)
        derived.update({
            "omega_s_hz": result.omega_s / TWO_PI,
            "omega_p_hz": result.omega_p / TWO_PI,
            "k_eff2_extrema": result.k_eff2_extrema,
            "k_eff2_fit": result.k_eff2,
            "omega_m_fit_hz": result.omega_m / TWO_PI,
            "gamma_0_fit_hz": result.gamma_0 / TWO_PI,
            "figure_of_merit": result.figure_of_merit,
        })
    return RunResult(command="admittance", frame=spectrum.to_frame(), derived=derived, grid=spec.to_dict())


def run_s11(config: TransducerConfig, grid: Optional[GridSpec] = None) -> RunResult:
    mechanics = effective_mechanics(config, complex(0.0, -config.omega_m))
    half_width = 10.0 * mechanics.gamma_m_res
    spec, omega = _grid_or_default(grid, GridSpec.around(config.omega_m, half_width, DEFAULT_POINTS, floor=0.0))
    spectrum = s11(config, omega)
    rates = config_port_rates(config)
    derived = {
        "g_em_hz": config_g_em(config) / TWO_PI,
        "Gamma_ex_hz": rates.Gamma_ex / TWO_PI,
        "Gamma_0_hz": rates.Gamma_0 / TWO_PI,
        "gamma_ex_hz": mechanics.gamma_ex_res / TWO_PI,
        "gamma_total_hz": mechanics.gamma_m_res / TWO_PI,
        "s11_min_abs": float(np.min(np.abs(spectrum.values))),
    }
    return RunResult(command="s11", frame=spectrum.to_frame(), derived=derived, grid=spec.to_dict())


def transmission_minima(detuning: np.ndarray, power: np.ndarray) -> np.ndarray:
    """Detunings of the two deepest transmission dips, ascending."""
    dips, _ = signal.find_peaks(-power)
    if dips.size < 2:
        return detuning[dips]
    deepest = dips[np.argsort(power[dips])[:2]]
    return np.sort(detuning[deepest])


def run_transmission(config: TransducerConfig, grid: Optional[GridSpec] = None) -> RunResult:
    """Bus transmission versus laser frequency measured from ring 1 (omega_hz = omega_L - omega_c1)."""
    mean, _, root = hybridization(config)
    half_width = abs(root) + 2.0 * (config.kappa_1 + config.kappa_2)
    spec, omega = _grid_or_default(grid, GridSpec.around(mean - config.omega_c_1, half_width, DEFAULT_POINTS))
    spectrum = transmission_spectrum(config, omega)

    frame = spectrum.to_frame()
    derived = {
        "omega_reference_hz": config.omega_c_1 / TWO_PI,
        "J_hz": config.J / TWO_PI,
        "splitting_hz": 2.0 * abs(root) / TWO_PI,
    }
    minima = transmission_minima(spectrum.omega, spectrum.abs2)
    if minima.size == 2:
        derived["minima_separation_hz"] = float((minima[1] - minima[0]) / TWO_PI)
    return RunResult(command="transmission", frame=frame, derived=derived, grid=spec.to_dict())


def run_sweep(
    config: TransducerConfig,
    powers_w: Sequence[float],
    kappa_ex_hz: Sequence[float],
    grid: Optional[GridSpec] = None,
    mode: str = "rwa",
    jobs: int = 1,
) -> RunResult:
    kappas = TWO_PI * np.asarray(kappa_ex_hz, dtype=float)
    surface = sweep(config, powers_w, kappas, omega_grid=None if grid is None else grid.omega(), mode=mode, jobs=jobs)
    best = surface.optimal_power_index()
    derived = {
        "eta_max": float(surface.eta_peak.max()),
        "optimal_power_w": [float(surface.powers[i]) for i in best],
    }
    grid_info = {
        "powers_w": [float(p) for p in surface.powers],
        "kappa_ex_hz": [float(k) / TWO_PI for k in surface.kappa_ex],
        "omega": grid.to_dict() if grid else "conversion window per cell",
        "mode": mode,
    }
    return RunResult(command="sweep", frame=surface.to_frame(), derived=derived, grid=grid_info)


def run_g0(
    e_grid: FieldGrid,
    s_grid: FieldGrid,
    materials: MaterialTable,
    omega_0: float,
    u_zpf: Optional[float] = None,
    displacement: Optional[FieldGrid] = None,
    omega_m: Optional[float] = None,
    surface: Optional[SurfaceSamples] = None,
    interface: Optional[Tuple[str, str]] = None,
) -> RunResult:
    report = g0_report(e_grid, s_grid, materials, omega_0, u_zpf=u_zpf, displacement=displacement,
                       omega_m=omega_m, surface=surface, interface=interface)
    grid_info = {"cells": e_grid.n_cells, "omega_0_hz": omega_0 / TWO_PI}
    if surface is not None:
        grid_info["surface_samples"] = surface.n_samples
    return RunResult(command="g0", frame=report.to_frame(), derived=report.values(), grid=grid_info)
