"""
Linearized transducer network: state space, transfer matrices, closed-form
RWA transfer functions and the conversion efficiency.
"""
import logging
import math
from typing import Dict, Optional, Tuple

import numpy as np
from scipy import linalg

from ..models.network_data import (
    INPUT_PORTS,
    LOSS_OUTPUTS,
    OUTPUT_PORTS,
    RWA_STATES,
    NetworkFunctions,
    OperatingPoint,
    StateSpaceModel,
    conjugate_labels,
)
from ..models.optics_data import MeanFields, PumpPlacement
from ..models.piezo_data import EffectiveMechanics
from ..models.spectrum import ComplexSpectrum, TransferSpectrum, validate_omega_grid
from ..models.transducer_config import TransducerConfig, laplace_axis
from .optics_service import mean_fields, optical_susceptibilities
from .piezo_service import config_g_em, effective_mechanics

FULL_NUMERATOR_TERMS = ("exact", "displayed")


class SingularNetworkError(Exception):
    """(sI - A) or a Mason determinant vanished at a grid point"""

    def __init__(self, message: str, omega: Optional[float] = None):
        super().__init__(message)
        self.omega = omega


def operating_point(config: TransducerConfig, placement: Optional[PumpPlacement] = None) -> OperatingPoint:
    """Resolve mean fields and the eliminated mechanics at the mechanical resonance."""
    fields = mean_fields(config, placement)
    mechanics = effective_mechanics(config, complex(0.0, -config.omega_m))
    return OperatingPoint(config=config, mean_fields=fields, mechanics=mechanics, g_em=config_g_em(config))


def mode_susceptibilities(op: OperatingPoint, s) -> Dict[str, np.ndarray]:
    """
    Susceptibilities of every network mode at s, keyed by state label.

    Conjugate modes see conjugated detunings and the same linewidths.
    """
    config = op.config
    placement = op.mean_fields.placement
    chi_1, chi_2 = optical_susceptibilities(config, placement, s)
    mirrored = PumpPlacement(target="explicit", Delta_1=-placement.Delta_1, Delta_2=-placement.Delta_2)
    chi_1c, chi_2c = optical_susceptibilities(config, mirrored, s)
    chi_m = 1.0 / (s + 1j * config.omega_m + op.gamma_m / 2.0)
    chi_mc = 1.0 / (s - 1j * config.omega_m + op.gamma_m / 2.0)
    labels = RWA_STATES + conjugate_labels(RWA_STATES)
    return dict(zip(labels, (chi_1, chi_2, chi_m, chi_1c, chi_2c, chi_mc)))


def build_state_space(
    config: TransducerConfig,
    fields: MeanFields,
    mechanics: EffectiveMechanics,
    rwa: bool = True,
) -> StateSpaceModel:
    """
    Assemble A, B, C, D for the three-mode (RWA) or six-mode network.

    Inputs are (a_in, c_in, f_o1, f_o2, f_m); outputs are (a_out, c_out).
    The full model appends the conjugate states and ports, with
    counter-rotating optomechanical couplings between the two blocks.
    """
    placement = fields.placement
    g = fields.g_om
    J = config.J
    gamma_m = mechanics.gamma_m_res
    sqrt_gamma_ex = mechanics.sqrt_gamma_ex_res

    A = np.array([
        [1j * placement.Delta_1 - config.kappa_1 / 2.0, 1j * J, 0.0],
        [1j * J, 1j * placement.Delta_2 - config.kappa_2 / 2.0, 1j * g],
        [0.0, 1j * np.conj(g), -1j * config.omega_m - gamma_m / 2.0],
    ], dtype=complex)

    B = np.zeros((3, 5), dtype=complex)
    B[0, 0] = math.sqrt(config.kappa_ex)
    B[2, 1] = sqrt_gamma_ex
    B[0, 2] = math.sqrt(config.kappa_0_1)
    B[1, 3] = math.sqrt(config.kappa_0_2)
    B[2, 4] = math.sqrt(max(mechanics.gamma_noise, 0.0))

    C = np.array([
        [-math.sqrt(config.kappa_ex), 0.0, 0.0],
        [0.0, 0.0, np.conj(sqrt_gamma_ex)],
    ], dtype=complex)
    D = np.array([
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0, 0.0],
    ], dtype=complex)

    if rwa:
        return StateSpaceModel(A=A, B=B, C=C, D=D, state_labels=RWA_STATES,
                               input_labels=INPUT_PORTS, output_labels=OUTPUT_PORTS)

    A_full = linalg.block_diag(A, np.conj(A))
    # counter-rotating terms: a2 <- b†, b <- a2†, a2† <- b, b† <- a2
    A_full[1, 5] = 1j * g
    A_full[2, 4] = 1j * g
    A_full[4, 2] = -1j * np.conj(g)
    A_full[5, 1] = -1j * np.conj(g)

    return StateSpaceModel(
        A=A_full,
        B=linalg.block_diag(B, np.conj(B)),
        C=linalg.block_diag(C, np.conj(C)),
        D=linalg.block_diag(D, D),
        state_labels=RWA_STATES + conjugate_labels(RWA_STATES),
        input_labels=INPUT_PORTS + conjugate_labels(INPUT_PORTS),
        output_labels=OUTPUT_PORTS + conjugate_labels(OUTPUT_PORTS),
    )


def _first_singular(omega: np.ndarray, pencils: np.ndarray) -> float:
    for point, pencil in zip(omega, pencils):
        if np.linalg.matrix_rank(pencil) < pencil.shape[0]:
            return float(point)
    return float(omega[0])


def transfer_matrix(model: StateSpaceModel, omega_grid) -> TransferSpectrum:
    """
    G[s] = C (sI - A)^-1 B + D on every grid point, batched.

    Raises:
        SingularNetworkError: (sI - A) singular at some omega
    """
    omega = validate_omega_grid(omega_grid)
    s = laplace_axis(omega)
    pencils = s[:, None, None] * np.eye(model.n_states) - model.A
    rhs = np.broadcast_to(model.B, (omega.size,) + model.B.shape)
    try:
        states = np.linalg.solve(pencils, rhs)
    except np.linalg.LinAlgError as e:
        bad = _first_singular(omega, pencils)
        logging.error(f"Singular network at omega/2pi={bad / (2 * np.pi):.9e} Hz")
        raise SingularNetworkError(f"(sI - A) is singular at omega={bad:.9e} rad/s", omega=bad) from e

    values = model.C @ states + model.D
    if not np.all(np.isfinite(values)):
        bad = float(omega[np.argmax(~np.isfinite(values).all(axis=(1, 2)))])
        raise SingularNetworkError(f"non-finite transfer function at omega={bad:.9e} rad/s", omega=bad)
    return TransferSpectrum(omega=omega, values=values,
                            output_labels=model.output_labels, input_labels=model.input_labels)


def scattering_matrix(model: StateSpaceModel, omega_grid) -> TransferSpectrum:
    """
    Square scattering matrix over all five ports of the RWA network.

    The three loss ports get outputs from the passive relation
    y = D (u - B^H x), i.e. C = -D B^H.
    """
    if not model.rwa:
        raise ValueError("scattering_matrix needs the RWA model")
    D_ext = np.diag([1.0, -1.0, 1.0, 1.0, 1.0]).astype(complex)
    extended = StateSpaceModel(
        A=model.A,
        B=model.B,
        C=-D_ext @ model.B.conj().T,
        D=D_ext,
        state_labels=model.state_labels,
        input_labels=model.input_labels,
        output_labels=model.output_labels + LOSS_OUTPUTS,
    )
    return transfer_matrix(extended, omega_grid)


def network_functions(op: OperatingPoint, omega_grid) -> NetworkFunctions:
    """Cooperativities C_OM, C_OO, extraction efficiencies and intrinsic-port factors."""
    omega = validate_omega_grid(omega_grid)
    chi = mode_susceptibilities(op, laplace_axis(omega))
    config = op.config
    return NetworkFunctions(
        omega=omega,
        C_OM=chi["a2"] * chi["b"] * abs(op.g_om) ** 2,
        C_OO=chi["a1"] * chi["a2"] * config.J ** 2,
        eta_opt=config.kappa_ex / 2.0 * chi["a1"],
        eta_MW=op.gamma_ex / 2.0 * chi["b"],
        theta_o1=config.kappa_0_1 / 2.0 * chi["a1"],
        theta_o2=config.kappa_0_2 / 2.0 * chi["a2"],
        theta_m=max(op.gamma_noise, 0.0) / 2.0 * chi["b"],
    )


def closed_form_rwa(
    config: TransducerConfig,
    omega_grid,
    functions: Optional[NetworkFunctions] = None,
) -> Dict[str, np.ndarray]:
    """
    The ten RWA transfer functions G_ij, outputs (a_out, c_out) by inputs
    (a_in, c_in, f_o1, f_o2, f_m), written with cooperativities.

    Square roots are principal; G11 and G22 match the state-space entries
    exactly, the others in modulus.
    """
    if functions is None:
        functions = network_functions(operating_point(config), omega_grid)
    elif not np.array_equal(functions.omega, validate_omega_grid(omega_grid)):
        raise ValueError("network functions were evaluated on a different grid")

    f = functions
    den = f.denominator
    root = np.sqrt
    cross = root(f.C_OM) * root(f.C_OO)

    return {
        "G11": (f.C_OO + (1.0 + f.C_OM) * (1.0 - 2.0 * f.eta_opt)) / den,
        "G12": 2.0 * cross * root(f.eta_MW) * root(f.eta_opt) / den,
        "G13": -2.0 * root(f.eta_opt) * root(f.theta_o1) * (1.0 + f.C_OM) / den,
        "G14": -2j * root(f.eta_opt) * root(f.theta_o2) * root(f.C_OO) / den,
        "G15": 2.0 * cross * root(f.eta_opt) * root(f.theta_m) / den,
        "G21": -2.0 * cross * root(f.eta_MW) * root(f.eta_opt) / den,
        "G22": -1.0 + 2.0 * f.eta_MW * (1.0 + f.C_OO) / den,
        "G23": -2.0 * cross * root(f.eta_MW) * root(f.theta_o1) / den,
        "G24": 2j * root(f.eta_MW) * root(f.theta_o2) * root(f.C_OM) / den,
        "G25": 2.0 * root(f.eta_MW) * root(f.theta_m) * (1.0 + f.C_OO) / den,
    }


EFFICIENCY_MODES = ("rwa", "full")


def full_numerator_denominator(
    op: OperatingPoint,
    omega_grid,
    terms: str = "exact",
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Numerator and denominator of the microwave-to-optical gain with
    counter-rotating terms.

    terms="exact" is Mason's formula on the complete six-mode graph, which
    has two four-node loops and a second forward path through b† and a2†.
    terms="displayed" drops both and keeps only the two-node loop algebra.
    """
    if terms not in FULL_NUMERATOR_TERMS:
        raise ValueError(f"terms must be one of {FULL_NUMERATOR_TERMS}, got {terms!r}")
    omega = validate_omega_grid(omega_grid)
    chi = mode_susceptibilities(op, laplace_axis(omega))
    config = op.config
    g2 = abs(op.g_om) ** 2
    J2 = config.J ** 2

    L1 = -chi["a2"] * chi["b"] * g2
    L2 = -chi["a2†"] * chi["b†"] * g2
    L3 = -chi["a1"] * chi["a2"] * J2
    L4 = -chi["a1†"] * chi["a2†"] * J2
    L5 = chi["a2†"] * chi["b"] * g2
    L6 = chi["a2"] * chi["b†"] * g2

    path = (op.sqrt_gamma_ex * math.sqrt(config.kappa_ex) * op.g_om * config.J
            * chi["a1"] * chi["a2"] * chi["b"])
    pairs = L1 * L2 + L1 * L4 + L2 * L3 + L3 * L4 + L3 * L5 + L4 * L6 + L5 * L6
    denominator = 1.0 - (L1 + L2 + L3 + L4 + L5 + L6) + pairs

    if terms == "displayed":
        return path * (1.0 - L2 - L4), denominator
    # the two four-node loops carry gains L1*L2 and L5*L6
    return path * (1.0 - L4), denominator - L1 * L2 - L5 * L6


def conversion_efficiency(
    op: OperatingPoint,
    omega_grid,
    mode: str = "rwa",
    terms: str = "exact",
) -> ComplexSpectrum:
    """
    Microwave-to-optical efficiency |G12|^2 at a resolved operating point.

    mode="rwa": 4 |C_OM C_OO eta_MW eta_opt| / |1 + C_OM + C_OO|^2.
    mode="full": |N/D|^2 with counter-rotating terms.

    Raises:
        SingularNetworkError: vanishing full-model denominator
    """
    if mode not in EFFICIENCY_MODES:
        raise ValueError(f"mode must be one of {EFFICIENCY_MODES}, got {mode!r}")
    omega = validate_omega_grid(omega_grid)
    if mode == "rwa":
        f = network_functions(op, omega)
        eta = 4.0 * np.abs(f.C_OM * f.C_OO * f.eta_MW * f.eta_opt) / np.abs(f.denominator) ** 2
        return ComplexSpectrum(omega, eta, quantity="eta")

    numerator, denominator = full_numerator_denominator(op, omega, terms)
    zero = np.nonzero(denominator == 0.0)[0]
    if zero.size:
        bad = float(omega[zero[0]])
        raise SingularNetworkError(f"vanishing denominator at omega={bad:.9e} rad/s", omega=bad)
    return ComplexSpectrum(omega, np.abs(numerator / denominator) ** 2, quantity="eta")


def _log_peak(label: str, spectrum: ComplexSpectrum) -> None:
    k = int(np.argmax(spectrum.values))
    logging.info(f"{label} efficiency: peak {spectrum.values[k]:.6f} at omega/2pi={spectrum.omega[k] / (2 * np.pi):.9e} Hz")


def efficiency_rwa(
    config: TransducerConfig,
    omega_grid,
    placement: Optional[PumpPlacement] = None,
) -> ComplexSpectrum:
    """eta = 4 |C_OM C_OO eta_MW eta_opt| / |1 + C_OM + C_OO|^2."""
    spectrum = conversion_efficiency(operating_point(config, placement), omega_grid, mode="rwa")
    _log_peak("RWA", spectrum)
    return spectrum


def efficiency_full(
    config: TransducerConfig,
    omega_grid,
    terms: str = "exact",
    placement: Optional[PumpPlacement] = None,
) -> ComplexSpectrum:
    """|N/D|^2 including counter-rotating optomechanical terms."""
    spectrum = conversion_efficiency(operating_point(config, placement), omega_grid, mode="full", terms=terms)
    _log_peak(f"Full ({terms})", spectrum)
    return spectrum


def efficiency_ceiling(op: OperatingPoint) -> float:
    """
    Largest conversion efficiency reachable at any pump power:
    (|gamma_ex|/gamma_m) * kappa_ex/(kappa_1 + kappa_2).
    """
    config = op.config
    return (op.gamma_ex / op.gamma_m) * config.kappa_ex / (config.kappa_1 + config.kappa_2)
