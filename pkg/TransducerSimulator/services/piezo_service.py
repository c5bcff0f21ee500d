"""
Electromechanical side: coupling rate, BVD admittance, port rates,
microwave reflection and elimination of the microwave mode.
"""
import logging
import math
from typing import Tuple

import numpy as np

from ..models.piezo_data import BvdExtraction, BvdParams, EffectiveMechanics, PortRates
from ..models.spectrum import ComplexSpectrum, validate_omega_grid
from ..models.transducer_config import TransducerConfig, laplace_axis


class ExtractionError(Exception):
    """Admittance spectrum does not contain a usable resonance pair"""
    pass


ADIABATIC_WARN_LEVEL = 0.1
C0_HINT_TOLERANCE = 0.05


def _ensure_positive(value: float, name: str) -> None:
    if not value > 0.0:
        raise ValueError(f"{name} must be positive")


def g_em(k_eff2: float, omega_m: float, omega_mw: float) -> float:
    """Piezoelectric coupling rate 0.5*sqrt(k_eff2)*sqrt(omega_m*omega_mw) [rad/s]."""
    if k_eff2 < 0.0:
        raise ValueError("k_eff2 must be non-negative")
    _ensure_positive(omega_m, "omega_m")
    _ensure_positive(omega_mw, "omega_mw")
    return 0.5 * math.sqrt(k_eff2) * math.sqrt(omega_m * omega_mw)


def config_g_em(config: TransducerConfig) -> float:
    return g_em(config.k_eff2, config.omega_m, config.omega_mw)


def bvd_from_config(config: TransducerConfig) -> BvdParams:
    return BvdParams.from_coupling(config.C0, config.k_eff2, config.omega_m, config.gamma_0)


def admittance(bvd: BvdParams, omega_m: float, gamma_0: float, omega_grid) -> ComplexSpectrum:
    """
    BVD admittance Y = i w C0 + (1/Lm) i w / (-w^2 + i w gamma_0 + omega_m^2).

    Args:
        bvd: Circuit parameters
        omega_m: Motional resonance [rad/s]
        gamma_0: Motional linewidth [rad/s]
        omega_grid: Non-negative, strictly increasing angular frequencies

    Returns:
        ComplexSpectrum of Y [S]
    """
    omega = validate_omega_grid(omega_grid, non_negative=True)
    motional = (1j * omega / bvd.Lm) / (-omega ** 2 + 1j * omega * gamma_0 + omega_m ** 2)
    return ComplexSpectrum(omega, 1j * omega * bvd.C0 + motional, quantity="Y")


def _refine_extremum(omega: np.ndarray, values: np.ndarray, index: int) -> Tuple[float, float]:
    """Vertex of the parabola through the three samples around index."""
    step = omega[index + 1] - omega[index]
    offsets = (omega[index - 1:index + 2] - omega[index]) / step
    a, b, c = np.polyfit(offsets, values[index - 1:index + 2], 2)
    if a == 0.0:
        return float(omega[index]), float(values[index])
    x = -b / (2.0 * a)
    if abs(x) > 1.0:
        return float(omega[index]), float(values[index])
    return float(omega[index] + x * step), float(c - b * b / (4.0 * a))


def _half_max_crossings(omega: np.ndarray, conductance: np.ndarray, peak: int, level: float) -> Tuple[float, float]:
    below_left = np.nonzero(conductance[:peak] < level)[0]
    below_right = np.nonzero(conductance[peak:] < level)[0]
    if below_left.size == 0 or below_right.size == 0:
        raise ExtractionError("half-maximum crossings of the conductance lie outside the grid")
    j = below_left[-1]
    k = peak + below_right[0]
    left = np.interp(level, conductance[j:j + 2], omega[j:j + 2])
    # np.interp needs increasing sample points; the right flank falls
    right = np.interp(level, conductance[k - 1:k + 1][::-1], omega[k - 1:k + 1][::-1])
    return float(left), float(right)


def extract_bvd(spectrum: ComplexSpectrum, C0_hint: float = None) -> BvdExtraction:
    """
    Read series/parallel resonances and the BVD circuit back from Y.

    The series (max |Y|) and parallel (min |Y|) points give the lossless
    extremum estimate of k_eff2 and the midpoint omega_m. The circuit
    itself comes from the conductance Re Y of the motional branch: its peak
    sits at omega_m with height 1/Rm and full width at half maximum gamma_0.

    Raises:
        ExtractionError: no resonance/antiresonance pair, or omega_p <= omega_s
    """
    omega = spectrum.omega
    Y = np.asarray(spectrum.values, dtype=complex)
    if omega.size < 5:
        raise ExtractionError("spectrum too short to locate a resonance pair")

    magnitude = np.abs(Y)
    i_s = int(np.argmax(magnitude))
    i_p = i_s + int(np.argmin(magnitude[i_s:]))
    if i_p <= i_s:
        raise ExtractionError("omega_p <= omega_s: no antiresonance above the series resonance")
    if i_s == 0 or i_p >= omega.size - 1:
        raise ExtractionError("no extremum pair found inside the grid")

    omega_s, _ = _refine_extremum(omega, magnitude, i_s)
    omega_p, _ = _refine_extremum(omega, magnitude, i_p)
    if omega_p <= omega_s:
        raise ExtractionError("omega_p <= omega_s after refinement")
    k_eff2_extrema = (omega_p ** 2 - omega_s ** 2) / omega_p ** 2

    conductance = Y.real
    i_m = int(np.argmax(conductance))
    if i_m == 0 or i_m >= omega.size - 1:
        raise ExtractionError("conductance peak on the grid edge")
    omega_m, g_max = _refine_extremum(omega, conductance, i_m)
    left, right = _half_max_crossings(omega, conductance, i_m, 0.5 * g_max)
    gamma_0 = right - left

    Rm = 1.0 / g_max
    Lm = Rm / gamma_0
    Cm = 1.0 / (omega_m ** 2 * Lm)
    C0 = float(np.interp(omega_m, omega, Y.imag)) / omega_m
    if C0_hint is not None and abs(C0 - C0_hint) > C0_HINT_TOLERANCE * C0_hint:
        logging.warning(f"Extracted C0={C0:.6e} F deviates from hint {C0_hint:.6e} F")

    bvd = BvdParams(C0=C0, Cm=Cm, Lm=Lm, Rm=Rm)
    logging.info(
        f"BVD extraction: omega_s/2pi={omega_s / (2 * np.pi):.9e} Hz, omega_p/2pi={omega_p / (2 * np.pi):.9e} Hz, "
        f"k_eff2={bvd.k_eff2:.6e} (extrema formula {k_eff2_extrema:.6e})"
    )
    return BvdExtraction(
        omega_s=omega_s,
        omega_p=omega_p,
        omega_mid=0.5 * (omega_s + omega_p),
        k_eff2_extrema=k_eff2_extrema,
        omega_m=omega_m,
        gamma_0=gamma_0,
        k_eff2=bvd.k_eff2,
        bvd=bvd,
    )


def port_rates(C0: float, R0: float, Z0: float) -> PortRates:
    """Gamma_ex = 1/(Z0 C0), Gamma_0 = 1/(R0 C0); R0 may be infinite."""
    _ensure_positive(C0, "C0")
    _ensure_positive(R0, "R0")
    _ensure_positive(Z0, "Z0")
    return PortRates(Gamma_ex=1.0 / (Z0 * C0), Gamma_0=1.0 / (R0 * C0))


def config_port_rates(config: TransducerConfig) -> PortRates:
    return port_rates(config.C0, config.R0, config.Z0)


def microwave_susceptibility(config: TransducerConfig, s, rates: PortRates = None):
    rates = rates or config_port_rates(config)
    return 1.0 / (s + 1j * config.omega_mw + rates.Gamma / 2.0)


def s11(config: TransducerConfig, omega_grid) -> ComplexSpectrum:
    """
    Microwave reflection S11 = -1 + Gamma_ex chi_MW / (1 + g_EM^2 chi_MW chi_m).

    The mechanics enters with its intrinsic linewidth gamma_0.
    """
    omega = validate_omega_grid(omega_grid, non_negative=True)
    s = laplace_axis(omega)
    rates = config_port_rates(config)
    g = config_g_em(config)
    chi_mw = microwave_susceptibility(config, s, rates)
    chi_m = 1.0 / (s + 1j * config.omega_m + config.gamma_0 / 2.0)
    values = -1.0 + rates.Gamma_ex * chi_mw / (1.0 + g ** 2 * chi_mw * chi_m)
    return ComplexSpectrum(omega, values, quantity="S11")


def effective_mechanics(config: TransducerConfig, s: complex) -> EffectiveMechanics:
    """
    Adiabatically eliminate the microwave mode.

    gamma_m/2 = gamma_0/2 + chi_MW g_EM^2 and sqrt(gamma_ex) = i g_EM chi_MW sqrt(Gamma_ex),
    evaluated at s and at the mechanical resonance s = -i*omega_m.
    """
    rates = config_port_rates(config)
    g = config_g_em(config)

    def _eliminate(point: complex):
        chi_mw = microwave_susceptibility(config, point, rates)
        gamma_m = config.gamma_0 + 2.0 * chi_mw * g ** 2
        sqrt_gamma_ex = 1j * g * chi_mw * math.sqrt(rates.Gamma_ex)
        return complex(gamma_m), complex(sqrt_gamma_ex)

    gamma_m, sqrt_gamma_ex = _eliminate(complex(s))
    gamma_m_res, sqrt_gamma_ex_res = _eliminate(complex(0.0, -config.omega_m))

    small_parameter = adiabatic_parameter(config)
    if small_parameter > ADIABATIC_WARN_LEVEL:
        logging.warning(
            f"Microwave mode is not fast compared with the mechanics: (gamma_0 + 4 g^2/Gamma)/Gamma = {small_parameter:.3f}"
        )

    return EffectiveMechanics(
        s=complex(s),
        gamma_m=gamma_m,
        gamma_ex=sqrt_gamma_ex ** 2,
        sqrt_gamma_ex=sqrt_gamma_ex,
        gamma_m_res=abs(gamma_m_res),
        gamma_ex_res=abs(sqrt_gamma_ex_res) ** 2,
        sqrt_gamma_ex_res=sqrt_gamma_ex_res,
    )


def adiabatic_parameter(config: TransducerConfig) -> float:
    rates = config_port_rates(config)
    g = config_g_em(config)
    return (config.gamma_0 + 4.0 * g ** 2 / rates.Gamma) / rates.Gamma
