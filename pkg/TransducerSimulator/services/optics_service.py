"""
Optical side: dimer susceptibilities, pump placement, mean fields,
bus transmission, laser lineshape and the static displacement shift.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy import integrate

from ..models.optics_data import DimerSpectrum, MeanFields, PumpPlacement, StaticShift, Supermodes
from ..models.spectrum import ComplexSpectrum, validate_omega_grid
from ..models.transducer_config import TransducerConfig, laplace_axis
from .config_loader import HBAR, photon_flux


def hybridization(config: TransducerConfig) -> Tuple[float, float, float]:
    """Mean ring frequency, half ring detuning and the signed half splitting."""
    mean = 0.5 * (config.omega_c_1 + config.omega_c_2)
    half_detuning = 0.5 * (config.omega_c_1 - config.omega_c_2)
    root = math.copysign(math.hypot(half_detuning, config.J), config.J)
    return mean, half_detuning, root


def resolve_placement(
    config: TransducerConfig,
    target: str = "symmetric",
    delta_1: Optional[float] = None,
    delta_2: Optional[float] = None,
) -> PumpPlacement:
    """
    Resolve the pump detunings Delta_i = omega_L - omega_c_i.

    Args:
        config: Transducer parameters
        target: "symmetric" puts the pump on the lower supermode, "asymmetric"
            on the upper one, "explicit" uses delta_1/delta_2
        delta_1: Explicit ring-1 detuning [rad/s]; defaults to omega_L - omega_c_1
        delta_2: Explicit ring-2 detuning [rad/s]; defaults to the ring-1 value
            shifted by the ring frequency difference

    Returns:
        PumpPlacement
    """
    if target == "explicit":
        d1 = config.omega_L - config.omega_c_1 if delta_1 is None else float(delta_1)
        d2 = d1 + (config.omega_c_1 - config.omega_c_2) if delta_2 is None else float(delta_2)
        return PumpPlacement(target=target, Delta_1=d1, Delta_2=d2)

    if target not in ("symmetric", "asymmetric"):
        raise ValueError(f"unknown pump target {target!r}")
    mean, _, root = hybridization(config)
    sign = -1.0 if target == "symmetric" else 1.0
    d1 = (mean - config.omega_c_1) + sign * root
    d2 = (mean - config.omega_c_2) + sign * root
    return PumpPlacement(target=target, Delta_1=d1, Delta_2=d2)


def supermodes(config: TransducerConfig, placement: Optional[PumpPlacement] = None) -> Supermodes:
    """Supermode frequencies and their offsets above the pump."""
    placement = placement or resolve_placement(config)
    mean, _, root = hybridization(config)
    split = abs(root)
    # offsets from detunings, not from omega_S - omega_L, to keep the optical carrier out
    offset = (mean - config.omega_c_1) - placement.Delta_1
    return Supermodes(
        omega_S=mean - split,
        omega_A=mean + split,
        Delta_S=offset - split,
        Delta_A=offset + split,
    )


def optical_susceptibilities(config: TransducerConfig, placement: PumpPlacement, s):
    """chi_i[s] = 1/(s - i Delta_i + kappa_i/2) for both rings."""
    chi_1 = 1.0 / (s - 1j * placement.Delta_1 + config.kappa_1 / 2.0)
    chi_2 = 1.0 / (s - 1j * placement.Delta_2 + config.kappa_2 / 2.0)
    return chi_1, chi_2


def _dimer_response(config: TransducerConfig, chi_1, chi_2):
    """Ring amplitudes and transmission per unit input amplitude."""
    a_1 = math.sqrt(config.kappa_ex) * chi_1 / (1.0 + config.J ** 2 * chi_1 * chi_2)
    a_2 = 1j * config.J * chi_2 * a_1
    t = 1.0 - math.sqrt(config.kappa_ex) * a_1
    return a_1, a_2, t


def mean_fields(config: TransducerConfig, placement: Optional[PumpPlacement] = None) -> MeanFields:
    """
    Intracavity mean fields at the pump (s = 0 in the laser frame).

    The input amplitude is sqrt(P_in / (hbar omega_L)); g_om = g0 * a_bar_2.
    """
    placement = placement or resolve_placement(config)
    chi_1, chi_2 = optical_susceptibilities(config, placement, 0.0)
    a_1, a_2, _ = _dimer_response(config, chi_1, chi_2)
    a_in = math.sqrt(photon_flux(config.P_in, config.omega_L, config.hbar))
    fields = MeanFields(
        placement=placement,
        a_bar_1=complex(a_1 * a_in),
        a_bar_2=complex(a_2 * a_in),
        g_om=complex(config.g0 * a_2 * a_in),
    )
    logging.debug(
        f"Mean fields ({placement.target}): |a1|^2={fields.photons_1:.4e}, |a2|^2={fields.photons_2:.4e}, "
        f"|g_om|/2pi={abs(fields.g_om) / (2 * np.pi):.4e} Hz"
    )
    return fields


def dimer_fields(config: TransducerConfig, omega_grid) -> DimerSpectrum:
    """
    Weak-probe response of the dimer in the frame of ring 1.

    omega_grid is the probe detuning omega - omega_c_1 [rad/s].
    """
    omega = validate_omega_grid(omega_grid)
    ring_frame = PumpPlacement(target="explicit", Delta_1=0.0, Delta_2=config.omega_c_1 - config.omega_c_2)
    chi_1, chi_2 = optical_susceptibilities(config, ring_frame, laplace_axis(omega))
    a_1, a_2, t = _dimer_response(config, chi_1, chi_2)
    return DimerSpectrum(omega=omega, a_1=a_1, a_2=a_2, t=t)


def transmission_spectrum(config: TransducerConfig, omega_grid) -> ComplexSpectrum:
    """Bus transmission t = 1 - kappa_ex chi_1/(1 + J^2 chi_1 chi_2) versus probe detuning."""
    spectrum = dimer_fields(config, omega_grid)
    return ComplexSpectrum(spectrum.omega, spectrum.t, quantity="t")


def laser_spectrum(
    P_in: float,
    omega_L: float,
    kappa_L: float,
    phi_L: float,
    omega_grid,
    hbar: float = HBAR,
) -> ComplexSpectrum:
    """
    Lorentzian pump amplitude normalized to the photon flux P_in/(hbar omega_L).

    a_in[w] = (1/sqrt(pi)) sqrt(kappa_L/2) / (-i(w - omega_L) + kappa_L/2) * sqrt(P_in/(hbar omega_L)) e^{i phi_L}
    """
    if kappa_L <= 0.0:
        raise ValueError("kappa_L must be positive")
    omega = validate_omega_grid(omega_grid)
    amplitude = math.sqrt(photon_flux(P_in, omega_L, hbar)) * np.exp(1j * phi_L)
    values = amplitude * math.sqrt(kappa_L / 2.0) / math.sqrt(np.pi) / (-1j * (omega - omega_L) + kappa_L / 2.0)
    return ComplexSpectrum(omega, values, quantity="a_in")


def spectral_photon_flux(spectrum: ComplexSpectrum) -> float:
    """Integral of |a_in|^2 over the grid (trapezoidal)."""
    return float(integrate.trapezoid(spectrum.abs2, spectrum.omega))


def static_shift(config: TransducerConfig, photon_number: float) -> StaticShift:
    """
    Radiation-pressure shift of the displacement origin.

    detuning_shift = 2 g0^2 n / omega_m; delta_x_norm is the same shift of the
    mechanical origin in units of x_zpf (2 g0 n / omega_m).
    """
    if photon_number < 0.0:
        raise ValueError("photon_number must be non-negative")
    delta_x_norm = 2.0 * config.g0 * photon_number / config.omega_m
    return StaticShift(delta_x_norm=delta_x_norm, detuning_shift=config.g0 * delta_x_norm)
