"""
Derived-parameter report of a configuration, and the g0 overlap report.
"""
import logging
from typing import Optional, Tuple

import numpy as np
from scipy import constants

from ..models.field_grid import FieldGrid, MaterialTable, SurfaceSamples
from ..models.report_data import Report
from ..models.transducer_config import TransducerConfig
from .config_loader import HBAR
from .mode_overlap import electric_energy_norm, g0_moving_boundary, g0_photoelastic, g0_total, normalize_mechanical
from .network_service import efficiency_ceiling, network_functions, operating_point
from .optics_service import static_shift, supermodes
from .piezo_service import adiabatic_parameter, config_port_rates
from .sweep_runner import conversion_window, peak_efficiency

TWO_PI = 2.0 * np.pi

# Tabulated device values, ordinary units
TABLE_VALUES = {
    "Q_o": 7.5e6,
    "photons_2": 1e8,
    "g_om": 20e6,
    "Delta_S": 0.0,
    "Delta_A": 3.267e9,
    "Q_m": 600.0,
    "M": 2.61,
    "g_em": 100e6,
    "gamma_ex": 2.9e6,
    "gamma_total": 8.2e6,
}
PHOTON_NUMBER_NOTE = "tabulated as an order of magnitude; g_om and g0 imply the computed value"


def derive(config: TransducerConfig) -> Report:
    """
    Recompute every derived row of the parameter table from a configuration.

    Rates are reported as ordinary frequencies [Hz]. The photon-number row
    carries a note instead of being forced onto the tabulated magnitude.
    """
    op = operating_point(config)
    rates = config_port_rates(config)
    modes = supermodes(config, op.mean_fields.placement)
    shift = static_shift(config, op.mean_fields.photons_2)
    C_OM = network_functions(op, [config.omega_m]).C_OM[0]
    omega_peak, eta_peak = peak_efficiency(op, conversion_window(op))
    Q_m = config.omega_m / config.gamma_0

    report = Report(title="derive")
    report.add("Q_o", "", config.omega_c_1 / config.kappa_0_1, TABLE_VALUES["Q_o"])
    report.add("photon_flux", "1/s", config.photon_flux)
    report.add("photons_1", "", op.mean_fields.photons_1)
    report.add("photons_2", "", op.mean_fields.photons_2, TABLE_VALUES["photons_2"], PHOTON_NUMBER_NOTE)
    report.add("g_om", "Hz", abs(op.g_om) / TWO_PI, TABLE_VALUES["g_om"])
    report.add("static_shift", "Hz", shift.detuning_shift / TWO_PI)
    report.add("delta_x_norm", "x_zpf", shift.delta_x_norm)
    report.add("Delta_S", "Hz", modes.Delta_S / TWO_PI, TABLE_VALUES["Delta_S"])
    report.add("Delta_A", "Hz", modes.Delta_A / TWO_PI, TABLE_VALUES["Delta_A"])
    report.add("J", "Hz", config.J / TWO_PI)
    report.add("Q_m", "", Q_m, TABLE_VALUES["Q_m"])
    report.add("M", "", config.k_eff2 * Q_m / (1.0 - config.k_eff2), TABLE_VALUES["M"])
    report.add("g_em", "Hz", op.g_em / TWO_PI, TABLE_VALUES["g_em"])
    report.add("Gamma_ex", "Hz", rates.Gamma_ex / TWO_PI)
    report.add("Gamma_0", "Hz", rates.Gamma_0 / TWO_PI)
    report.add("Gamma_ex_over_Gamma", "", rates.overcoupling)
    report.add("adiabatic_parameter", "", adiabatic_parameter(config))
    report.add("gamma_ex", "Hz", op.gamma_ex / TWO_PI, TABLE_VALUES["gamma_ex"])
    report.add("gamma_total", "Hz", op.gamma_m / TWO_PI, TABLE_VALUES["gamma_total"])
    report.add("gamma_noise", "Hz", op.gamma_noise / TWO_PI)
    report.add("C_OM_at_omega_m", "", abs(C_OM))
    report.add("eta_ceiling", "", efficiency_ceiling(op))
    report.add("eta_peak_rwa", "", eta_peak)
    report.add("omega_peak", "Hz", omega_peak / TWO_PI)

    logging.info(
        f"Derived: g_EM/2pi={op.g_em / TWO_PI:.4e} Hz, |gamma_ex|/2pi={op.gamma_ex / TWO_PI:.4e} Hz, "
        f"g_om/2pi={abs(op.g_om) / TWO_PI:.4e} Hz, peak eta={eta_peak:.4f}"
    )
    return report


def interface_contrast(materials: MaterialTable, inner: str, outer: str):
    """
    (delta_eps, delta_eps_inv) across an interface in absolute units:
    eps0 (eps_r1 - eps_r2) and (1/eps_r1 - 1/eps_r2) / eps0.
    """
    eps_1 = materials[inner].eps_r
    eps_2 = materials[outer].eps_r
    eps0 = constants.epsilon_0
    return eps0 * (eps_1 - eps_2), (1.0 / eps_1 - 1.0 / eps_2) / eps0


def g0_report(
    e_grid: FieldGrid,
    s_grid: FieldGrid,
    materials: MaterialTable,
    omega_0: float,
    u_zpf: Optional[float] = None,
    displacement: Optional[FieldGrid] = None,
    omega_m: Optional[float] = None,
    surface: Optional[SurfaceSamples] = None,
    interface: Optional[Tuple[str, str]] = None,
    hbar: float = HBAR,
) -> Report:
    """
    Photoelastic and moving-boundary single-photon couplings from field grids.

    u_zpf is taken as given or from the displacement grid normalization at
    omega_m. The same scalar multiplies both contributions. Without surface
    samples the moving-boundary term is zero.
    """
    report = Report(title="g0")
    if u_zpf is None:
        if displacement is None or omega_m is None:
            raise ValueError("either u_zpf or a displacement grid with omega_m is required")
        normalization = normalize_mechanical(displacement, materials, omega_m, hbar=hbar)
        u_zpf = normalization.u_zpf
        report.add("m_eff", "kg", normalization.m_eff)
    report.add("u_zpf", "m", u_zpf)

    energy_norm = electric_energy_norm(e_grid, materials)
    report.add("energy_norm", "F m", energy_norm)

    g0_pe = g0_photoelastic(e_grid, s_grid, materials, omega_0, u_zpf)
    g0_mb = 0.0
    if surface is not None:
        if interface is None:
            raise ValueError("surface samples need the interface materials")
        delta_eps, delta_eps_inv = interface_contrast(materials, *interface)
        g0_mb = g0_moving_boundary(surface, delta_eps, delta_eps_inv, omega_0, u_zpf, energy_norm)

    report.add("g0_PE", "Hz", g0_pe / TWO_PI)
    report.add("g0_MB", "Hz", g0_mb / TWO_PI)
    report.add("g0_total", "Hz", g0_total(g0_pe, g0_mb) / TWO_PI)
    logging.info(f"g0: PE/2pi={g0_pe / TWO_PI:.6e} Hz, MB/2pi={g0_mb / TWO_PI:.6e} Hz")
    return report
