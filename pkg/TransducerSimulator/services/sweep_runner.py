"""
Efficiency sweeps over pump power and bus coupling.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from ..models.network_data import OperatingPoint
from ..models.sweep_data import SweepSurface
from ..models.transducer_config import TransducerConfig
from .network_service import EFFICIENCY_MODES, conversion_efficiency, operating_point

DEFAULT_POINTS = 2001


def conversion_window(op: OperatingPoint, points: int = DEFAULT_POINTS) -> np.ndarray:
    """
    Grid centred on omega_m wide enough for both supermode linewidths,
    the optomechanical splitting and the mechanical linewidth.
    """
    config = op.config
    half_width = 1.5 * (config.kappa_1 + config.kappa_2) + 2.0 * abs(op.g_om) + 5.0 * op.gamma_m
    lower = max(config.omega_m - half_width, 1e-6 * config.omega_m)
    return np.linspace(lower, config.omega_m + half_width, points)


def peak_efficiency(op: OperatingPoint, omega_grid, mode: str = "rwa") -> Tuple[float, float]:
    """
    Maximum of eta over omega: grid argmax refined by a bounded scalar search
    between the neighbouring grid points.

    Returns:
        (omega_peak, eta_peak)
    """
    spectrum = conversion_efficiency(op, omega_grid, mode=mode)
    omega, eta = spectrum.omega, spectrum.values
    k = int(np.argmax(eta))
    best = (float(omega[k]), float(eta[k]))
    if omega.size < 3 or eta[k] == 0.0:
        return best

    lower = omega[max(k - 1, 0)]
    upper = omega[min(k + 1, omega.size - 1)]

    def objective(w: float) -> float:
        return -float(conversion_efficiency(op, [w], mode=mode).values[0])

    result = optimize.minimize_scalar(objective, bounds=(lower, upper), method="bounded",
                                      options={"xatol": 1e-6 * (upper - lower)})
    if result.success and -result.fun > best[1]:
        return float(result.x), float(-result.fun)
    return best


def _evaluate_cell(args) -> Tuple[float, float]:
    config, omega_grid, mode = args
    op = operating_point(config)
    grid = conversion_window(op) if omega_grid is None else omega_grid
    return peak_efficiency(op, grid, mode=mode)


def _validate_range(values: Sequence[float], name: str) -> np.ndarray:
    array = np.asarray(values, dtype=float).reshape(-1)
    if array.size == 0:
        raise ValueError(f"empty {name} range")
    if not np.all(np.isfinite(array)) or np.any(array <= 0.0):
        raise ValueError(f"{name} values must be finite and positive")
    return array


def sweep(
    config: TransducerConfig,
    power_grid: Sequence[float],
    kappa_ex_grid: Sequence[float],
    omega_grid: Optional[Sequence[float]] = None,
    mode: str = "rwa",
    jobs: int = 1,
) -> SweepSurface:
    """
    Peak efficiency over omega for every (kappa_ex, P_in) cell.

    Args:
        config: Base parameters; P_in and kappa_ex are overridden per cell
        power_grid: Pump powers [W]
        kappa_ex_grid: Bus couplings [rad/s]
        omega_grid: Shared frequency grid; default is a per-cell window around omega_m
        mode: "rwa" or "full"
        jobs: Worker processes; cells come back in row-major order regardless

    Returns:
        SweepSurface
    """
    if mode not in EFFICIENCY_MODES:
        raise ValueError(f"mode must be one of {EFFICIENCY_MODES}, got {mode!r}")
    powers = _validate_range(power_grid, "power")
    kappas = _validate_range(kappa_ex_grid, "kappa_ex")
    grid = None if omega_grid is None else np.asarray(omega_grid, dtype=float)

    cells = [(config.replace(P_in=float(p), kappa_ex=float(k)), grid, mode) for k in kappas for p in powers]
    logging.info(f"Sweep: {len(kappas)} x {len(powers)} cells, mode={mode}, jobs={jobs}")

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate_cell, cells))
    else:
        results = [_evaluate_cell(cell) for cell in cells]

    omega_peak = np.array([r[0] for r in results]).reshape(len(kappas), len(powers))
    eta_peak = np.array([r[1] for r in results]).reshape(len(kappas), len(powers))
    return SweepSurface(powers=powers, kappa_ex=kappas, eta_peak=eta_peak, omega_peak=omega_peak, mode=mode)
